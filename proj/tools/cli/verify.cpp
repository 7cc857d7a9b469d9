// SPDX-License-Identifier: Apache-2.0

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "report.hpp"

namespace batchmp::cli {
namespace {

namespace o = oracle;
using o::RefInt;

// Moduli are redrawn every this many trials; building a context costs
// about as much as a few dozen reductions.
constexpr std::uint64_t kTrialsPerContext = 16;

struct Property {
  Property(const char* n) : name(n) {}  // NOLINT(google-explicit-constructor)

  std::string name;
  std::uint64_t trials = 0;
  bool failed = false;
  std::vector<std::string> counterexample;

  void fail(std::uint64_t trial, std::vector<std::string> lines) {
    if (failed) return;
    failed = true;
    counterexample.push_back("first counterexample at trial " + std::to_string(trial) + ":");
    for (auto& l : lines) counterexample.push_back(std::move(l));
  }
};

template <std::size_t L>
std::vector<RefInt> values(const SlicedBatch<L>& b) {
  std::vector<RefInt> v;
  for (Words& w : contract(b)) v.emplace_back(std::move(w));
  return v;
}

template <std::size_t L>
SlicedBatch<L> batch_of(const std::vector<RefInt>& v, std::size_t limbs) {
  std::vector<Words> w;
  w.reserve(v.size());
  for (const RefInt& x : v) w.push_back(x.words());
  return expand<L>(w, kLimbBits * limbs);
}

std::string kv(const char* key, const RefInt& v) { return std::string("  ") + key + "=" + v.to_hex(); }

// Checks got == want lane by lane; records the first bad lane.
template <typename Inputs>
void expect_lanes(Property& p, std::uint64_t trial, const std::vector<RefInt>& got,
                  const std::vector<RefInt>& want, Inputs&& inputs) {
  ++p.trials;
  for (std::size_t k = 0; k < want.size(); ++k) {
    if (got[k] != want[k]) {
      std::vector<std::string> lines{"  lane=" + std::to_string(k)};
      inputs(k, lines);
      lines.push_back(kv("expected", want[k]));
      lines.push_back(kv("got", got[k]));
      p.fail(trial, std::move(lines));
      return;
    }
  }
}

template <std::size_t L>
void verify_products(const JobSpec& spec, Rng& rng, std::vector<Property>& props) {
  const bool kara = spec.flavor == Flavor::karatsuba;
  const std::optional<KaratsubaPlan> plan =
      kara ? std::optional<KaratsubaPlan>(karatsuba_plan(spec.size_bits)) : std::nullopt;
  const std::size_t limbs = plan ? plan->operand_limbs : limbs_for_bits(spec.size_bits);

  props = {{"mul-vs-oracle"}, {"square-vs-oracle"}};
  if (kara) {
    props.push_back({"k_mul-vs-oracle"});
    props.push_back({"k_square-vs-oracle"});
    props.push_back({"karatsuba-vs-schoolbook"});
  }

  for (std::uint64_t trial = 0; trial < spec.trials; ++trial) {
    std::vector<RefInt> a(L), b(L), ab(L), aa(L);
    for (std::size_t k = 0; k < L; ++k) {
      a[k] = RefInt(test_operand(rng, spec.size_bits));
      b[k] = RefInt(test_operand(rng, spec.size_bits));
      ab[k] = o::ref_mul(a[k], b[k]);
      aa[k] = o::ref_square(a[k]);
    }
    const auto both = [&](std::size_t k, std::vector<std::string>& l) {
      l.push_back(kv("a", a[k]));
      l.push_back(kv("b", b[k]));
    };
    const auto one = [&](std::size_t k, std::vector<std::string>& l) { l.push_back(kv("a", a[k])); };

    const SlicedBatch<L> A = batch_of<L>(a, limbs);
    const SlicedBatch<L> B = batch_of<L>(b, limbs);
    const SlicedBatch<L> P = b_mul(A, B);
    const SlicedBatch<L> S = b_square(A);
    expect_lanes(props[0], trial, values(P), ab, both);
    expect_lanes(props[1], trial, values(S), aa, one);
    if (kara) {
      const SlicedBatch<L> KP = k_mul(A, B, *plan);
      const SlicedBatch<L> KS = k_square(A, *plan);
      expect_lanes(props[2], trial, values(KP), ab, both);
      expect_lanes(props[3], trial, values(KS), aa, one);
      ++props[4].trials;
      if (KP != P || KS != S) props[4].fail(trial, {"  k_mul/k_square differ from b_mul/b_square"});
    }
  }
}

template <std::size_t L>
void verify_modular(const JobSpec& spec, Rng& rng, std::vector<Property>& props) {
  const bool kara = spec.flavor == Flavor::karatsuba;
  props = {{"context-vs-oracle"}, {"reduce-vs-oracle"}, {"cios-vs-classic"}};
  const std::size_t truncated_at = props.size();
  if (spec.truncated) props.push_back({"truncated-vs-classic"});
  const std::size_t kara_at = props.size();
  if (kara) props.push_back({"karatsuba-vs-schoolbook"});
  const std::size_t exp_at = props.size();
  props.push_back({"exp-vs-oracle"});

  ExpConfig cfg;
  cfg.window = spec.window.value_or(0);

  std::optional<MontgomeryContext<L>> ctx;
  std::vector<RefInt> n(L), np(L), two_n(L);
  RefInt r;

  for (std::uint64_t trial = 0; trial < spec.trials; ++trial) {
    if (trial % kTrialsPerContext == 0) {
      std::vector<Words> moduli(L);
      for (auto& m : moduli) m = random_modulus(rng, spec.size_bits);
      ctx = context_new<L>(moduli, spec.size_bits, spec.flavor, spec.truncated);
      r = RefInt::pow2(ctx->r_bits);
      std::vector<RefInt> r2(L), one(L);
      for (std::size_t k = 0; k < L; ++k) {
        n[k] = RefInt(moduli[k]);
        two_n[k] = o::ref_add(n[k], n[k]);
        np[k] = o::ref_sub(r, o::ref_mod_inverse(n[k], r));
        r2[k] = o::ref_mod(o::ref_square(r), n[k]);
        one[k] = o::ref_mod(r, n[k]);
      }
      const auto mod_only = [&](std::size_t k, std::vector<std::string>& l) { l.push_back(kv("N", n[k])); };
      expect_lanes(props[0], trial, values(ctx->n_prime), np, mod_only);
      expect_lanes(props[0], trial, values(ctx->r2), r2, mod_only);
      expect_lanes(props[0], trial, values(ctx->one), one, mod_only);
      props[0].trials -= 2;
    }

    // Operands below 2N. Every fourth trial reduces T = x * R instead of
    // a product, so the low half of T is zero.
    std::vector<RefInt> a(L), b(L), t(L);
    const bool low_zero = trial % 4 == 3;
    for (std::size_t k = 0; k < L; ++k) {
      a[k] = RefInt(below(rng, two_n[k].words()));
      b[k] = RefInt(below(rng, two_n[k].words()));
      t[k] = low_zero ? o::ref_shl(RefInt(below(rng, n[k].words())), ctx->r_bits) : o::ref_mul(a[k], b[k]);
    }
    const auto with_t = [&](std::size_t k, std::vector<std::string>& l) {
      l.push_back(kv("T", t[k]));
      l.push_back(kv("N", n[k]));
    };
    const auto with_ab = [&](std::size_t k, std::vector<std::string>& l) {
      l.push_back(kv("a", a[k]));
      l.push_back(kv("b", b[k]));
      l.push_back(kv("N", n[k]));
    };

    const SlicedBatch<L> A = batch_of<L>(a, ctx->limbs);
    const SlicedBatch<L> B = batch_of<L>(b, ctx->limbs);
    const SlicedBatch<L> T = batch_of<L>(t, 2 * ctx->limbs);
    const SlicedBatch<L> C = mont_reduce(T, *ctx);

    std::vector<RefInt> want(L);
    for (std::size_t k = 0; k < L; ++k) want[k] = o::ref_montred(t[k], n[k], np[k], ctx->r_bits);
    const std::vector<RefInt> got = values(C);
    expect_lanes(props[1], trial, got, want, with_t);
    for (std::size_t k = 0; k < L; ++k) {
      if (!(got[k] < two_n[k])) {
        props[1].fail(trial, {"  lane=" + std::to_string(k) + " result not below 2N", kv("T", t[k]),
                              kv("N", n[k])});
      }
    }

    const SlicedBatch<L> classic = mont_reduce(product(A, B, *ctx), *ctx);
    expect_lanes(props[2], trial, values(mont_mul_cios(A, B, *ctx)), values(classic), with_ab);
    if (spec.truncated) {
      expect_lanes(props[truncated_at], trial, values(mont_reduce_truncated(T, *ctx)), got, with_t);
    }
    if (kara) {
      expect_lanes(props[kara_at], trial, values(k_mul(A, B, *ctx->plan)), values(b_mul(A, B)), with_ab);
    }

    std::vector<Words> bases(L), exps(L);
    std::vector<RefInt> expected(L);
    for (std::size_t k = 0; k < L; ++k) {
      bases[k] = below(rng, n[k].words());
      exps[k] = test_operand(rng, 1 + rng() % 64);
      expected[k] = o::ref_modexp(RefInt(bases[k]), RefInt(exps[k]), n[k]);
    }
    std::vector<RefInt> results;
    for (Words& w : fixed_window_exp<L>(bases, exps, *ctx, cfg)) results.emplace_back(std::move(w));
    expect_lanes(props[exp_at], trial, results, expected, [&](std::size_t k, std::vector<std::string>& l) {
      l.push_back(kv("base", RefInt(bases[k])));
      l.push_back(kv("exp", RefInt(exps[k])));
      l.push_back(kv("N", n[k]));
    });
  }
}

}  // namespace

int cmd_verify(const JobSpec& spec, std::ostream& out) {
  validate(spec);
  const Backend backend = resolve_backend(spec.backend);
  ScopedBackend use(backend);
  print_header(out, spec, backend);
  out << "trials: " << spec.trials << "\n";
  if (spec.trials == 0) {
    out << "no trials requested\n";
    return kExitPass;
  }

  Rng rng(spec.seed);
  std::vector<Property> props;
  with_lanes(spec.lanes, [&](auto lanes) {
    constexpr std::size_t L = decltype(lanes)::value;
    if (is_modulus_size(spec.size_bits)) {
      verify_modular<L>(spec, rng, props);
    } else {
      verify_products<L>(spec, rng, props);
    }
  });

  bool all = true;
  for (const Property& p : props) {
    out << (p.failed ? "FAIL  " : "PASS  ") << p.name << "  trials=" << p.trials << "\n";
    for (const std::string& line : p.counterexample) out << line << "\n";
    all = all && !p.failed;
  }
  out << "result: " << (all ? "PASS" : "FAIL") << "\n";
  return all ? kExitPass : kExitCheckFailed;
}

}  // namespace batchmp::cli
