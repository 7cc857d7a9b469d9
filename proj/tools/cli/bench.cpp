// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#if defined(__x86_64__) || defined(__i386__)
#include <x86intrin.h>
#define BATCHMP_HAVE_RDTSC 1
#endif

#include "commands.hpp"
#include "report.hpp"

namespace batchmp::cli {
namespace {

struct Timing {
  double ns = 0;
  double cycles = 0;
};

volatile std::uint64_t g_sink = 0;

std::uint64_t cycle_stamp() {
#ifdef BATCHMP_HAVE_RDTSC
  return __rdtsc();
#else
  return 0;
#endif
}

// Warm-up runs, then the minimum over `trials` timed runs.
Timing min_of_runs(const JobSpec& spec, const std::function<std::uint64_t()>& run) {
  for (std::uint64_t i = 0; i < spec.warmup; ++i) g_sink = g_sink + run();
  Timing best{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  const std::uint64_t reps = std::max<std::uint64_t>(spec.trials, 1);
  for (std::uint64_t i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t c0 = cycle_stamp();
    g_sink = g_sink + run();
    const std::uint64_t c1 = cycle_stamp();
    const auto t1 = std::chrono::steady_clock::now();
    best.ns = std::min(best.ns, std::chrono::duration<double, std::nano>(t1 - t0).count());
    best.cycles = std::min(best.cycles, static_cast<double>(c1 - c0));
  }
  return best;
}

struct Variant {
  std::string name;
  Timing mean_of_min;
};

template <std::size_t L>
std::vector<Words> values(Rng& rng, std::size_t bits) {
  std::vector<Words> v(L);
  for (auto& w : v) w = uniform_bits(rng, bits);
  return v;
}

template <std::size_t L>
std::vector<Variant> bench(const JobSpec& spec, Rng& rng) {
  // Each entry builds fresh data for one data set and returns the runner.
  using Runner = std::function<std::uint64_t()>;
  std::vector<std::pair<std::string, std::function<Runner(Rng&)>>> variants;
  const std::size_t bits = spec.size_bits;
  const bool kara = spec.flavor == Flavor::karatsuba;

  if (spec.bench_op == "mul" || spec.bench_op == "square") {
    std::optional<KaratsubaPlan> plan;
    if (kara) {
      plan = is_modulus_size(bits) ? montgomery_shape(bits, Flavor::karatsuba, false).plan
                                   : std::optional<KaratsubaPlan>(karatsuba_plan(bits));
    }
    const std::size_t limbs = plan ? plan->operand_limbs : limbs_for_bits(bits);
    const bool sq = spec.bench_op == "square";
    variants.emplace_back(kara ? (sq ? "k_square" : "k_mul") : (sq ? "b_square" : "b_mul"), [=](Rng& r) {
      auto a = std::make_shared<SlicedBatch<L>>(expand<L>(values<L>(r, bits), kLimbBits * limbs));
      auto b = std::make_shared<SlicedBatch<L>>(expand<L>(values<L>(r, bits), kLimbBits * limbs));
      return Runner([=] {
        const SlicedBatch<L> p = plan ? (sq ? k_square(*a, *plan) : k_mul(*a, *b, *plan))
                                      : (sq ? b_square(*a) : b_mul(*a, *b));
        return p.limb(0, 0);
      });
    });
  } else {
    std::vector<bool> modes{false};
    if (!(kara && bits == 1024)) modes.push_back(true);
    for (bool truncated : modes) {
      const std::string name = truncated ? "truncated" : "classic";
      variants.emplace_back(name, [=, &spec](Rng& r) {
        std::vector<Words> moduli(L);
        for (auto& m : moduli) m = random_modulus(r, bits);
        auto ctx = std::make_shared<MontgomeryContext<L>>(context_new<L>(moduli, bits, spec.flavor, truncated));
        std::vector<Words> xs(L), ys(L);
        for (std::size_t k = 0; k < L; ++k) {
          xs[k] = below(r, moduli[k]);
          ys[k] = below(r, moduli[k]);
        }
        if (spec.bench_op == "mont") {
          auto a = std::make_shared<SlicedBatch<L>>(expand<L>(xs, kLimbBits * ctx->limbs));
          auto b = std::make_shared<SlicedBatch<L>>(expand<L>(ys, kLimbBits * ctx->limbs));
          return Runner([=] { return mont_mul(*a, *b, *ctx).limb(0, 0); });
        }
        // Full-length exponents, as in a private-key operation.
        auto exps = std::make_shared<std::vector<Words>>(values<L>(r, bits));
        auto bases = std::make_shared<std::vector<Words>>(xs);
        ExpConfig cfg;
        cfg.window = spec.window.value_or(0);
        cfg.exponent_bits = bits;
        return Runner([=] { return fixed_window_exp<L>(*bases, *exps, *ctx, cfg)[0][0]; });
      });
    }
  }

  std::vector<Variant> report;
  for (auto& [name, make] : variants) {
    Timing sum;
    const std::uint64_t sets = std::max<std::uint64_t>(spec.datasets, 1);
    for (std::uint64_t d = 0; d < sets; ++d) {
      const Runner run = make(rng);
      const Timing t = min_of_runs(spec, run);
      sum.ns += t.ns;
      sum.cycles += t.cycles;
    }
    report.push_back({name, {sum.ns / double(sets), sum.cycles / double(sets)}});
  }
  return report;
}

}  // namespace

int cmd_bench(const JobSpec& spec, std::ostream& out) {
  validate(spec);
  const Backend backend = resolve_backend(spec.backend);
  ScopedBackend use(backend);
  print_header(out, spec, backend);
  out << "operation: " << spec.bench_op << "  data sets: " << std::max<std::uint64_t>(spec.datasets, 1)
      << "  runs per set: " << std::max<std::uint64_t>(spec.trials, 1) << "  warm-up: " << spec.warmup << "\n";
  out << "statistic: mean over data sets of the minimum run\n";

  Rng rng(spec.seed);
  const std::vector<Variant> rows =
      with_lanes(spec.lanes, [&](auto lanes) { return bench<decltype(lanes)::value>(spec, rng); });

  out << std::left << std::setw(12) << "variant" << std::right << std::setw(16) << "ns/batch"
      << std::setw(16) << "cycles/batch" << std::setw(14) << "ns/lane" << "\n";
  for (const Variant& v : rows) {
    out << std::left << std::setw(12) << v.name << std::right << std::fixed << std::setprecision(1)
        << std::setw(16) << v.mean_of_min.ns << std::setw(16);
#ifdef BATCHMP_HAVE_RDTSC
    out << v.mean_of_min.cycles;
#else
    out << "n/a";
#endif
    out << std::setw(14) << v.mean_of_min.ns / double(spec.lanes) << "\n";
  }
  if (rows.size() == 2) {
    out << "ratio truncated/classic: " << std::setprecision(3) << rows[1].mean_of_min.ns / rows[0].mean_of_min.ns
        << " (time)";
#ifdef BATCHMP_HAVE_RDTSC
    out << ", " << rows[1].mean_of_min.cycles / rows[0].mean_of_min.cycles << " (cycles)";
#endif
    out << "\n";
  }
  out << std::defaultfloat;
  return kExitPass;
}

}  // namespace batchmp::cli
