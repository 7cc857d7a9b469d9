// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"
#include "support.hpp"

using namespace batchmp;
using namespace batchmp::test;
namespace o = batchmp::oracle;

namespace {

struct Combo {
  Flavor flavor;
  bool truncated;
};

std::vector<Combo> combos(std::size_t bits) {
  std::vector<Combo> out{{Flavor::schoolbook, false}, {Flavor::schoolbook, true},
                         {Flavor::karatsuba, false}};
  if (bits != 1024) out.push_back({Flavor::karatsuba, true});
  return out;
}

template <std::size_t L>
std::vector<Words> random_moduli(Rng& rng, std::size_t bits) {
  std::vector<Words> m(L);
  for (auto& x : m) x = random_modulus(rng, bits - rng() % 3);
  return m;
}

// Values below 2N per lane.
template <std::size_t L>
std::vector<RefInt> below_twice(Rng& rng, const std::vector<Words>& moduli) {
  std::vector<RefInt> out;
  for (const Words& m : moduli) {
    const RefInt twice = o::ref_shl(to_ref(m), 1);
    out.push_back(o::ref_mod(to_ref(random_operand(rng, bit_length(m) + 1)), twice));
  }
  return out;
}

}  // namespace

TEST_CASE("shape per size and flavor") {
  CHECK(montgomery_shape(1024, Flavor::schoolbook, true).limbs == 20);
  CHECK(montgomery_shape(2048, Flavor::schoolbook, false).r_bits == 2080);
  CHECK(montgomery_shape(4096, Flavor::schoolbook, false).limbs == 79);
  CHECK(montgomery_shape(1024, Flavor::karatsuba, false).r_bits == 1038);
  CHECK(montgomery_shape(4096, Flavor::karatsuba, true).limbs == 80);
  CHECK_THROWS_AS(montgomery_shape(1024, Flavor::karatsuba, true), ConfigError);
  CHECK_THROWS_AS(montgomery_shape(3072, Flavor::schoolbook, false), ConfigError);
  CHECK(parse_flavor("karatsuba") == Flavor::karatsuba);
  CHECK_THROWS_AS(parse_flavor("toom"), ConfigError);
}

TEST_CASE("context invariants") {
  Rng rng(51);
  for (std::size_t bits : kModulusSizes) {
    for (const Combo& combo : combos(bits)) {
      const auto m = random_moduli<8>(rng, bits);
      const auto ctx = context_new<8>(m, bits, combo.flavor, combo.truncated);
      const RefInt r = RefInt::pow2(ctx.r_bits);
      const auto np = lane_values(ctx.n_prime);
      const auto r2 = lane_values(ctx.r2);
      const auto one = lane_values(ctx.one);
      for (std::size_t k = 0; k < 8; ++k) {
        const RefInt n = to_ref(m[k]);
        REQUIRE(o::ref_low_bits(o::ref_add(o::ref_mul(n, np[k]), RefInt(1)), ctx.r_bits) == RefInt());
        REQUIRE(np[k] < r);
        REQUIRE(r2[k] == o::ref_mod(o::ref_square(r), n));
        REQUIRE(one[k] == o::ref_mod(r, n));
        REQUIRE(ctx.n0_prime[k] == (np[k].words()[0] & kMask52));
      }
    }
  }
}

TEST_CASE("n0' for structured low limbs") {
  std::vector<Words> m(4);
  for (std::size_t k = 0; k < 4; ++k) {
    RefInt v = o::ref_add(o::ref_shl(RefInt(12345 + k), 900), RefInt(kMask52));
    m[k] = v.words();
  }
  const auto a = context_new<4>(m, 1024, Flavor::schoolbook, false);
  CHECK(a.n0_prime == LaneVector4::broadcast(1));
  for (std::size_t k = 0; k < 4; ++k) m[k] = o::ref_add(o::ref_shl(RefInt(777 + k), 1000), RefInt::pow2(52 * 3)).words();
  for (auto& x : m) x[0] |= 1;
  const auto b = context_new<4>(m, 1024, Flavor::schoolbook, false);
  CHECK(b.n0_prime == LaneVector4::broadcast(kMask52));
}

TEST_CASE("context rejects bad moduli") {
  std::vector<Words> m(4, RefInt::pow2(1023).words());
  for (auto& x : m) x[0] |= 1;
  CHECK_NOTHROW(context_new<4>(m, 1024, Flavor::schoolbook, false));
  m[2][0] &= ~std::uint64_t{1};
  CHECK_THROWS_AS(context_new<4>(m, 1024, Flavor::schoolbook, false), InvalidModulusError);
  m[2] = Words{1};
  CHECK_THROWS_AS(context_new<4>(m, 1024, Flavor::schoolbook, false), InvalidModulusError);
  m[2] = o::ref_add(RefInt::pow2(1024), RefInt(1)).words();
  CHECK_THROWS_AS(context_new<4>(m, 1024, Flavor::schoolbook, false), SizeError);
  m.pop_back();
  CHECK_THROWS_AS(context_new<4>(m, 1024, Flavor::schoolbook, false), ShapeError);
}

TEST_CASE("reduction family is bit-identical and correct") {
  Rng rng(52);
  for (std::size_t bits : kModulusSizes) {
    for (const Combo& combo : combos(bits)) {
      const auto m = random_moduli<8>(rng, bits);
      const auto ctx = context_new<8>(m, bits, combo.flavor, combo.truncated);
      CAPTURE(bits);
      CAPTURE(flavor_name(combo.flavor));
      for (int trial = 0; trial < 6; ++trial) {
        const auto av = below_twice<8>(rng, m);
        const auto bv = below_twice<8>(rng, m);
        const auto a = make_batch<8>(av, ctx.limbs);
        const auto b = make_batch<8>(bv, ctx.limbs);
        const SlicedBatch<8> t = product(a, b, ctx);
        const SlicedBatch<8> c = mont_reduce(t, ctx);
        REQUIRE(mont_mul_cios(a, b, ctx) == c);
        if (combo.truncated || combo.flavor == Flavor::schoolbook) {
          REQUIRE(mont_reduce_truncated(t, ctx) == c);
        }
        REQUIRE(mont_reduce(square(a, ctx), ctx) == mont_reduce(product(a, a, ctx), ctx));
        const auto cv = lane_values(c);
        const auto qv = lane_values(mont_quotient(t, ctx));
        const auto np = lane_values(ctx.n_prime);
        for (std::size_t k = 0; k < 8; ++k) {
          const RefInt n = to_ref(m[k]);
          const RefInt tk = o::ref_mul(av[k], bv[k]);
          REQUIRE(cv[k] < o::ref_shl(n, 1));
          REQUIRE(cv[k] == o::ref_montred(tk, n, np[k], ctx.r_bits));
          REQUIRE(o::ref_mod(o::ref_shl(cv[k], ctx.r_bits), n) == o::ref_mod(tk, n));
          REQUIRE(o::ref_low_bits(o::ref_add(tk, o::ref_mul(qv[k], n)), ctx.r_bits) == RefInt());
        }
      }
    }
  }
}

TEST_CASE("crafted carry cases for the truncated reduction") {
  Rng rng(53);
  for (std::size_t bits : kModulusSizes) {
    for (const Combo& combo : combos(bits)) {
      if (!combo.truncated) continue;
      const auto m = random_moduli<8>(rng, bits);
      const auto ctx = context_new<8>(m, bits, combo.flavor, true);
      for (int carry = 0; carry < 2; ++carry) {
        std::vector<RefInt> tv;
        for (std::size_t k = 0; k < 8; ++k) {
          // T = R * x (+ 2^j): low half zero, or exactly one low bit set.
          RefInt t = o::ref_shl(o::ref_mod(to_ref(random_bits(rng, bits)), to_ref(m[k])), ctx.r_bits);
          if (carry == 1) t = o::ref_add(t, RefInt::pow2(rng() % ctx.r_bits));
          tv.push_back(t);
        }
        const auto t = make_batch<8>(tv, 2 * ctx.limbs);
        const auto detail = mont_reduce_truncated_detail(t, ctx);
        CHECK(detail.c_add == LaneVector8::broadcast(static_cast<std::uint64_t>(carry)));
        CHECK(detail.hi == mont_reduce(t, ctx));
        const auto cv = lane_values(detail.hi);
        for (std::size_t k = 0; k < 8; ++k) {
          REQUIRE(o::ref_mod(o::ref_shl(cv[k], ctx.r_bits), to_ref(m[k])) == o::ref_mod(tv[k], to_ref(m[k])));
        }
      }
    }
  }
}

TEST_CASE("zero reduces to zero") {
  Rng rng(54);
  const auto m = random_moduli<4>(rng, 2048);
  for (const Combo& combo : combos(2048)) {
    const auto ctx = context_new<4>(m, 2048, combo.flavor, combo.truncated);
    const SlicedBatch<4> z(2 * ctx.limbs);
    CHECK(mont_reduce(z, ctx) == SlicedBatch<4>(ctx.limbs));
    CHECK(mont_reduce_truncated(z, ctx) == SlicedBatch<4>(ctx.limbs));
    CHECK(mont_mul_cios(SlicedBatch<4>(ctx.limbs), ctx.r2, ctx) == SlicedBatch<4>(ctx.limbs));
    CHECK(to_mont(SlicedBatch<4>(ctx.limbs), ctx) == SlicedBatch<4>(ctx.limbs));
  }
}

TEST_CASE("Karatsuba contexts at 1024 bits have no truncated reduction") {
  Rng rng(55);
  const auto m = random_moduli<4>(rng, 1024);
  CHECK_THROWS_AS(context_new<4>(m, 1024, Flavor::karatsuba, true), ConfigError);
  const auto ctx = context_new<4>(m, 1024, Flavor::karatsuba, false);
  CHECK_THROWS_AS(mont_reduce_truncated(SlicedBatch<4>(40), ctx), ConfigError);
  CHECK_THROWS_AS(mont_reduce(SlicedBatch<4>(39), ctx), ShapeError);
}

TEST_CASE("Montgomery domain round trip") {
  Rng rng(56);
  for (std::size_t bits : kModulusSizes) {
    for (const Combo& combo : combos(bits)) {
      const auto m = random_moduli<8>(rng, bits);
      const auto ctx = context_new<8>(m, bits, combo.flavor, combo.truncated);
      for (int trial = 0; trial < 5; ++trial) {
        std::vector<RefInt> xv;
        for (const Words& mk : m) xv.push_back(o::ref_mod(to_ref(random_operand(rng, bits)), to_ref(mk)));
        const auto x = make_batch<8>(xv, ctx.limbs);
        const auto xm = to_mont(x, ctx);
        const auto xmv = lane_values(xm);
        for (std::size_t k = 0; k < 8; ++k) {
          REQUIRE(o::ref_mod(xmv[k], to_ref(m[k])) ==
                  o::ref_mod(o::ref_shl(xv[k], ctx.r_bits), to_ref(m[k])));
        }
        REQUIRE(from_mont(xm, ctx) == x);
      }
      SlicedBatch<8> one(ctx.limbs);
      one[0] = LaneVector8::broadcast(1);
      CHECK(from_mont(to_mont(one, ctx), ctx) == one);
    }
  }
}

TEST_CASE("truncated reduction saves multiply-adds in the fma step") {
  Rng rng(57);
  for (std::size_t bits : kModulusSizes) {
    const auto m = random_moduli<8>(rng, bits);
    const auto ctx = context_new<8>(m, bits, Flavor::schoolbook, true);
    const auto q = make_batch<8>(below_twice<8>(rng, m), ctx.limbs);
    const SlicedBatch<8> t(2 * ctx.limbs);
    OpCounters full, trunc;
    {
      ScopedProbe p(&full);
      static_cast<void>(b_fma(q, ctx.moduli, t));
    }
    {
      ScopedProbe p(&trunc);
      static_cast<void>(trunc_b_fma_hi(q, ctx.moduli, t));
    }
    CHECK(100 * trunc.madd < 55 * full.madd);
  }
}
