// SPDX-License-Identifier: Apache-2.0

#ifndef BATCHMP_SCHOOLBOOK_HPP
#define BATCHMP_SCHOOLBOOK_HPP

#include <cstddef>
#include <span>

#include "batchmp/lane.hpp"
#include "batchmp/sliced_batch.hpp"

namespace batchmp {

/// High half of a truncated fused multiply-add, plus the predicted carry
/// out of the discarded low half (1 or 0 per lane).
template <std::size_t L>
struct TruncatedHigh {
  SlicedBatch<L> hi;
  LaneVector<L> c_add;
};

/// a * b with 2n limbs, normalized. a and b must have the same limb count n.
/// Performs exactly 2n^2 madd operations. Throws ShapeError.
template <std::size_t L>
SlicedBatch<L> b_mul(const SlicedBatch<L>& a, const SlicedBatch<L>& b);

/// a^2 with 2n limbs, normalized; n(n+1) madd operations.
template <std::size_t L>
SlicedBatch<L> b_square(const SlicedBatch<L>& a);

/// t + q * n with 2k limbs for k-limb q and n and 2k-limb t. The addend
/// seeds the accumulators, so the cost is that of b_mul.
/// Throws ShapeError, OverflowError if the sum needs more than 2k limbs.
template <std::size_t L>
SlicedBatch<L> b_fma(const SlicedBatch<L>& q, const SlicedBatch<L>& n, const SlicedBatch<L>& t);

/// (t + q * n) / 2^(52k) for k-limb q and n, assuming t + q * n is
/// divisible by 2^(52k) in every lane (not checked). Only partial products
/// of column k-1 and above are formed; the carry out of the discarded
/// columns is recovered from c_add = OR of the low k limbs of t.
/// Uses k^2 + 2k - 1 madd operations.
template <std::size_t L>
TruncatedHigh<L> trunc_b_fma_hi(const SlicedBatch<L>& q, const SlicedBatch<L>& n,
                                const SlicedBatch<L>& t);

/// 1 in lanes where any of the given limbs is nonzero, else 0.
/// Limbs must be normalized.
template <std::size_t L>
LaneVector<L> compute_c_add(std::span<const LaneVector<L>> t_low);

/// a * b mod 2^(52 * out_limbs), normalized. Operands may have any
/// (equal) limb count; only products below the cut are formed.
template <std::size_t L>
SlicedBatch<L> b_mul_low(const SlicedBatch<L>& a, const SlicedBatch<L>& b, std::size_t out_limbs);

/// Lower bound for a * b that skips every partial-product piece landing
/// below limb column `first_column`. The result has 2n limbs, normalized,
/// and falls short of a * b by less than 4n * 2^(52 * first_column).
template <std::size_t L>
SlicedBatch<L> b_mul_upper(const SlicedBatch<L>& a, const SlicedBatch<L>& b,
                           std::size_t first_column);

}  // namespace batchmp

#endif  // BATCHMP_SCHOOLBOOK_HPP
