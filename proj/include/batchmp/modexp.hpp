// SPDX-License-Identifier: Apache-2.0

#ifndef BATCHMP_MODEXP_HPP
#define BATCHMP_MODEXP_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "batchmp/montgomery.hpp"
#include "batchmp/sliced_batch.hpp"

namespace batchmp {

/// How the main loop is scheduled. `leaky` skips the multiplication when
/// every lane's window is zero; it exists only as a negative control for
/// the trace checker and must not be used on secrets.
enum class ExpSchedule : std::uint8_t { constant_time, leaky };

struct ExpConfig {
  unsigned window = 0;           // 1..5; 0 picks default_window()
  std::size_t exponent_bits = 0; // common length s; 0 uses the longest exponent
  bool cios = false;             // window multiplications via mont_mul_cios
  ExpSchedule schedule = ExpSchedule::constant_time;
};

/// 4 for 1024-bit moduli, 5 otherwise.
unsigned default_window(std::size_t modulus_bits) noexcept;

/// Bits [bit_pos, bit_pos + w) of every exponent, w in [1, 5]. Windows may
/// straddle a 64-bit word boundary; bits past the top word read as zero.
template <std::size_t L>
LaneVector<L> extract_window(const ExponentBatch<L>& e, std::size_t bit_pos, unsigned w);

/// Per lane, table[indices[k]] in lane k. Scans every entry with
/// eq_mask/select, so the operation sequence is independent of the indices.
template <std::size_t L>
SlicedBatch<L> ct_table_select(std::span<const SlicedBatch<L>> table, const LaneVector<L>& indices);

/// a_k^e_k mod N_k per lane, canonical, as trimmed word arrays.
///
/// Exponents are zero-padded to a common length s, rounded up to a multiple
/// of the window; every window costs w squarings, one full table scan and
/// one multiplication whatever its value. Bases must be below
/// 2^modulus_bits. Throws ShapeError, SizeError, ConfigError.
template <std::size_t L>
std::vector<Words> fixed_window_exp(std::span<const Words> bases, std::span<const Words> exponents,
                                    const MontgomeryContext<L>& ctx, const ExpConfig& cfg = {});

}  // namespace batchmp

#endif  // BATCHMP_MODEXP_HPP
