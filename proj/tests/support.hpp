// SPDX-License-Identifier: Apache-2.0
//
// Shared helpers for the test binaries: seeded random operands and
// conversions between batch values and the reference integers.

#ifndef BATCHMP_TESTS_SUPPORT_HPP
#define BATCHMP_TESTS_SUPPORT_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "batchmp/batchmp.hpp"
#include "batchmp/oracle.hpp"

namespace batchmp::test {

using Rng = std::mt19937_64;
using oracle::RefInt;

/// Uniform value below 2^bits.
inline Words random_bits(Rng& rng, std::size_t bits) {
  Words w(words_for_bits(bits) == 0 ? 1 : words_for_bits(bits));
  for (auto& x : w) x = rng();
  if (bits % 64 != 0) w.back() &= (std::uint64_t{1} << (bits % 64)) - 1;
  if (bits == 0) w.back() = 0;
  return trimmed(std::move(w));
}

/// Mix of uniform values and structured edge values (all ones, single
/// bits, long zero runs), all below 2^bits.
inline Words random_operand(Rng& rng, std::size_t bits) {
  switch (rng() % 8) {
    case 0: {
      Words w(words_for_bits(bits), ~std::uint64_t{0});
      if (bits % 64 != 0) w.back() &= (std::uint64_t{1} << (bits % 64)) - 1;
      return trimmed(std::move(w));
    }
    case 1:
      return RefInt::pow2(rng() % bits).words();
    case 2:
      return random_bits(rng, 1 + rng() % bits);
    default:
      return random_bits(rng, bits);
  }
}

/// Odd modulus with its top bit set, exactly `bits` long.
inline Words random_modulus(Rng& rng, std::size_t bits) {
  Words w = random_bits(rng, bits);
  w.resize(words_for_bits(bits), 0);
  w[0] |= 1;
  w[(bits - 1) / 64] |= std::uint64_t{1} << ((bits - 1) % 64);
  return w;
}

inline RefInt to_ref(const Words& w) { return RefInt(w); }

template <std::size_t L>
std::vector<RefInt> lane_values(const SlicedBatch<L>& batch) {
  std::vector<RefInt> out;
  for (Words& w : contract(batch)) out.emplace_back(std::move(w));
  return out;
}

template <std::size_t L>
SlicedBatch<L> make_batch(const std::vector<RefInt>& values, std::size_t limbs) {
  std::vector<Words> w;
  for (const RefInt& v : values) w.push_back(v.words());
  return expand<L>(w, kLimbBits * limbs);
}

template <std::size_t L>
std::vector<Words> random_lanes(Rng& rng, std::size_t bits) {
  std::vector<Words> v(L);
  for (auto& x : v) x = random_operand(rng, bits);
  return v;
}

}  // namespace batchmp::test

#endif  // BATCHMP_TESTS_SUPPORT_HPP
