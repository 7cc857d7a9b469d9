// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include "doctest.h"
#include "support.hpp"

using namespace batchmp;
using namespace batchmp::test;

namespace {

constexpr std::size_t kSizes[] = {260, 520, 1040, 2080, 4108, 518 + 2, 1038 + 2, 2078 + 2, 4154 + 6};

std::vector<Words> zeros(std::size_t n) { return std::vector<Words>(n, Words{0}); }

}  // namespace

TEST_CASE("expand examples") {
  const SlicedBatch<8> z = expand<8>(zeros(8), 1040);
  CHECK(z.limb_count() == 20);
  for (std::size_t i = 0; i < 20; ++i) CHECK(z[i] == LaneVector8{});

  std::vector<Words> v = zeros(8);
  v[0] = RefInt::pow2(52).words();
  const SlicedBatch<8> b = expand<8>(v, 1040);
  CHECK(b.limb(1, 0) == 1);
  CHECK(b.limb(0, 0) == 0);
  for (std::size_t k = 1; k < 8; ++k) CHECK(b.limb(1, k) == 0);
}

TEST_CASE("expand rejects bad shapes and sizes") {
  CHECK_THROWS_AS(expand<8>(zeros(4), 1040), ShapeError);
  CHECK_THROWS_AS(expand<8>(zeros(8), 1000), ConfigError);
  CHECK_THROWS_AS(expand<8>(zeros(8), 0), ConfigError);
  std::vector<Words> v = zeros(8);
  v[5] = RefInt::pow2(1040).words();
  CHECK_THROWS_AS(expand<8>(v, 1040), SizeError);
  v[5] = RefInt::pow2(1039).words();
  CHECK_NOTHROW(expand<8>(v, 1040));
}

TEST_CASE("contract examples") {
  SlicedBatch<8> b(20);
  b[0].lane[2] = 3;
  b[1].lane[2] = 1;
  const std::vector<Words> out = contract(b);
  CHECK(out.size() == 8);
  CHECK(out[0].size() == 17);
  CHECK(RefInt(out[2]) == oracle::ref_add(RefInt::pow2(52), RefInt(3)));
  CHECK(RefInt(out[1]) == RefInt());
}

TEST_CASE("contract inverts expand at every supported size") {
  Rng rng(21);
  for (std::size_t bits : kSizes) {
    for (int trial = 0; trial < 200; ++trial) {
      const auto v8 = random_lanes<8>(rng, bits);
      const auto back8 = contract(expand<8>(v8, bits));
      for (std::size_t k = 0; k < 8; ++k) REQUIRE(RefInt(back8[k]) == RefInt(v8[k]));
      const auto v4 = random_lanes<4>(rng, bits);
      const auto back4 = contract(expand<4>(v4, bits));
      for (std::size_t k = 0; k < 4; ++k) REQUIRE(RefInt(back4[k]) == RefInt(v4[k]));
    }
  }
}

TEST_CASE("expand is lane independent") {
  Rng rng(22);
  auto v = random_lanes<8>(rng, 1040);
  const SlicedBatch<8> a = expand<8>(v, 1040);
  std::reverse(v.begin(), v.end());
  const SlicedBatch<8> b = expand<8>(v, 1040);
  for (std::size_t i = 0; i < 20; ++i) {
    for (std::size_t k = 0; k < 8; ++k) REQUIRE(a.limb(i, k) == b.limb(i, 7 - k));
  }
}

TEST_CASE("expand64 transposes words") {
  std::vector<Words> e = zeros(8);
  for (auto& x : e) x = Words{1};
  const ExponentBatch<8> one = expand64<8>(e, 1024);
  CHECK(one.words.size() == 16);
  CHECK(one.words[0] == LaneVector8::broadcast(1));
  CHECK(one.words[1] == LaneVector8{});

  e = zeros(8);
  e[3] = RefInt::pow2(64).words();
  const ExponentBatch<8> w = expand64<8>(e, 1024);
  CHECK(w.words[1].lane[3] == 1);
  CHECK(w.words[0].lane[3] == 0);

  e[3] = RefInt::pow2(1024).words();
  CHECK_THROWS_AS(expand64<8>(e, 1024), SizeError);

  Rng rng(23);
  const auto r = random_lanes<8>(rng, 1000);
  const ExponentBatch<8> t = expand64<8>(r, 1000);
  for (std::size_t k = 0; k < 8; ++k) {
    for (std::size_t i = 0; i < t.words.size(); ++i) {
      REQUIRE(t.words[i].lane[k] == (i < r[k].size() ? r[k][i] : 0));
    }
  }
}

TEST_CASE("normalize") {
  SlicedBatch<8> b(4);
  b[0] = LaneVector8::broadcast((std::uint64_t{1} << 52) + 1);
  const SlicedBatch<8> n = normalize(b);
  CHECK(n[0] == LaneVector8::broadcast(1));
  CHECK(n[1] == LaneVector8::broadcast(1));
  CHECK(normalize(n) == n);

  Rng rng(24);
  for (int trial = 0; trial < 200; ++trial) {
    SlicedBatch<8> x(10);
    for (std::size_t i = 0; i + 1 < 10; ++i) {
      for (auto& v : x[i].lane) v = rng() >> 2;
    }
    const SlicedBatch<8> y = normalize(x);
    REQUIRE(y.is_normalized());
    for (std::size_t k = 0; k < 8; ++k) {
      RefInt expect;
      for (std::size_t i = 0; i < 10; ++i) {
        expect = oracle::ref_add(expect, oracle::ref_shl(RefInt(x.limb(i, k)), 52 * i));
      }
      REQUIRE(RefInt(contract(y)[k]) == expect);
    }
  }

  SlicedBatch<8> over(2);
  over[1] = LaneVector8::broadcast(std::uint64_t{1} << 52);
  CHECK_THROWS_AS(normalize(over), OverflowError);
}

TEST_CASE("cond_sub_modulus") {
  Rng rng(25);
  std::vector<Words> m(8);
  for (auto& x : m) x = random_modulus(rng, 1024);
  const SlicedBatch<8> mod = expand<8>(m, 1040);

  CHECK(cond_sub_modulus(mod, mod) == SlicedBatch<8>(20));
  std::vector<Words> below(8);
  for (std::size_t k = 0; k < 8; ++k) below[k] = oracle::ref_sub(to_ref(m[k]), RefInt(1)).words();
  const SlicedBatch<8> b = expand<8>(below, 1040);
  CHECK(cond_sub_modulus(b, mod) == b);

  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Words> v(8);
    for (std::size_t k = 0; k < 8; ++k) {
      v[k] = oracle::ref_mod(to_ref(random_bits(rng, 1025)), oracle::ref_shl(to_ref(m[k]), 1)).words();
    }
    const auto out = contract(cond_sub_modulus(expand<8>(v, 1040), mod));
    for (std::size_t k = 0; k < 8; ++k) {
      REQUIRE(RefInt(out[k]) == oracle::ref_mod(to_ref(v[k]), to_ref(m[k])));
    }
  }
}

TEST_CASE("cond_sub_modulus trace does not depend on the branch taken") {
  Rng rng(26);
  std::vector<Words> m(8);
  for (auto& x : m) x = random_modulus(rng, 1024);
  const SlicedBatch<8> mod = expand<8>(m, 1040);
  std::vector<Words> twice_minus(8);
  for (std::size_t k = 0; k < 8; ++k) {
    twice_minus[k] = oracle::ref_sub(oracle::ref_shl(to_ref(m[k]), 1), RefInt(1)).words();
  }
  auto trace_of = [&](const SlicedBatch<8>& x) {
    OpCounters c;
    OpTrace t;
    ScopedProbe probe(&c, &t);
    static_cast<void>(cond_sub_modulus(x, mod));
    return std::pair{c, t.digest()};
  };
  const auto taken = trace_of(expand<8>(twice_minus, 1040));
  const auto kept = trace_of(SlicedBatch<8>(20));
  CHECK(taken.first == kept.first);
  CHECK(taken.second == kept.second);
}

TEST_CASE("hex parsing and formatting") {
  CHECK(parse_hex("0") == Words{0});
  CHECK(parse_hex("0000000000000000000001") == Words{1});
  CHECK(parse_hex("1FFFFFFFFFFFFFFFF") == (Words{~std::uint64_t{0}, 1}));
  CHECK_THROWS_AS(parse_hex(""), ParseError);
  CHECK_THROWS_AS(parse_hex("0x12"), ParseError);
  CHECK_THROWS_AS(parse_hex("12 "), ParseError);
  CHECK(to_hex(Words{255}, 16) == "00ff");
  CHECK(to_hex(Words{0}, 1) == "0");
  CHECK(to_hex(Words{1, 1}, 68) == "10000000000000001");
  CHECK_THROWS_AS(to_hex(Words{256}, 8), SizeError);
  CHECK(to_hex(parse_hex("abcdef0123456789abcdef"), 88) == "abcdef0123456789abcdef");
  CHECK(bit_length(Words{0, 0}) == 0);
  CHECK(bit_length(Words{0, 1}) == 65);
  CHECK(trimmed(Words{5, 0, 0}) == Words{5});
  CHECK(trimmed(Words{}) == Words{0});
}
