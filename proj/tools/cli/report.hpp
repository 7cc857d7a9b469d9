// SPDX-License-Identifier: Apache-2.0
//
// Helpers shared by the subcommands: lane-count dispatch, seeded operand
// generation and the common report header.

#ifndef BATCHMP_CLI_REPORT_HPP
#define BATCHMP_CLI_REPORT_HPP

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

#include "batchmp/batchmp.hpp"
#include "batchmp/oracle.hpp"
#include "job.hpp"

namespace batchmp::cli {

using Rng = std::mt19937_64;

/// Calls f(std::integral_constant<std::size_t, L>{}) for the spec's lanes.
template <typename F>
decltype(auto) with_lanes(unsigned lanes, F&& f) {
  if (lanes == 4) return f(std::integral_constant<std::size_t, 4>{});
  return f(std::integral_constant<std::size_t, 8>{});
}

/// Uniform value below 2^bits.
inline Words uniform_bits(Rng& rng, std::size_t bits) {
  if (bits == 0) return Words{0};
  Words w(words_for_bits(bits));
  for (auto& x : w) x = rng();
  if (bits % 64 != 0) w.back() &= (std::uint64_t{1} << (bits % 64)) - 1;
  return trimmed(std::move(w));
}

/// Uniform values mixed with all-ones, powers of two and short values.
inline Words test_operand(Rng& rng, std::size_t bits) {
  switch (rng() % 8) {
    case 0:
      return oracle::ref_sub(oracle::RefInt::pow2(bits), 1).words();
    case 1:
      return oracle::RefInt::pow2(rng() % bits).words();
    case 2:
      return uniform_bits(rng, 1 + rng() % bits);
    default:
      return uniform_bits(rng, bits);
  }
}

/// Odd modulus of exactly `bits` bits.
inline Words random_modulus(Rng& rng, std::size_t bits) {
  Words w = uniform_bits(rng, bits);
  w.resize(words_for_bits(bits), 0);
  w[0] |= 1;
  w[(bits - 1) / 64] |= std::uint64_t{1} << ((bits - 1) % 64);
  return w;
}

/// Uniform value below m (m > 0), by rejection on bit_length(m) bits.
inline Words below(Rng& rng, const Words& m) {
  const oracle::RefInt bound(m);
  for (;;) {
    oracle::RefInt v(uniform_bits(rng, bound.bit_length()));
    if (v < bound) return v.words();
  }
}

inline std::string hex_of(const Words& w) { return oracle::RefInt(w).to_hex(); }

inline void print_header(std::ostream& out, const JobSpec& spec, Backend backend) {
  out << "# batchmp " << spec.command << "\n";
  out << "rng: " << kRngName << "  seed: " << spec.seed << "\n";
  out << "size: " << spec.size_bits << " bits  flavor: " << flavor_name(spec.flavor)
      << "  truncated: " << (spec.truncated ? "yes" : "no") << "  lanes: " << spec.lanes
      << "  backend: " << backend_name(backend) << "\n";
}

}  // namespace batchmp::cli

#endif  // BATCHMP_CLI_REPORT_HPP
