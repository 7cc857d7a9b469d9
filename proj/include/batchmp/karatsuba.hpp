// SPDX-License-Identifier: Apache-2.0

#ifndef BATCHMP_KARATSUBA_HPP
#define BATCHMP_KARATSUBA_HPP

#include <cstddef>
#include <optional>

#include "batchmp/schoolbook.hpp"
#include "batchmp/sliced_batch.hpp"

namespace batchmp {

/// Split geometry for one of the supported Karatsuba operand sizes.
struct KaratsubaPlan {
  std::size_t total_bits = 0;       // t: operands are below 2^t
  std::size_t half_bits = 0;        // h = t / 2, the split position
  unsigned stages = 1;              // 2 for the 4154-bit double Karatsuba
  std::size_t elementary_bits = 0;  // size of each of the three sub-products
  std::size_t operand_limbs = 0;    // ceil(t / 52)
  std::size_t share_limbs = 0;      // limbs holding h + 1 bits

  friend bool operator==(const KaratsubaPlan&, const KaratsubaPlan&) = default;
};

inline constexpr std::size_t kKaratsubaSizes[] = {518, 1038, 2078, 4154};

/// Plan for t in {518, 1038, 2078, 4154}; throws ConfigError otherwise.
KaratsubaPlan karatsuba_plan(std::size_t total_bits);

/// Plan for the sub-products of a two-stage plan; nullopt for one stage.
std::optional<KaratsubaPlan> inner_plan(const KaratsubaPlan& plan);

/// Exact a * b with 2 * operand_limbs limbs, normalized. Operands must have
/// operand_limbs limbs and be below 2^t. Two-stage plans recurse, giving
/// nine schoolbook products. Throws ShapeError, SizeError.
template <std::size_t L>
SlicedBatch<L> k_mul(const SlicedBatch<L>& a, const SlicedBatch<L>& b, const KaratsubaPlan& plan);

/// Exact a^2; the sub-products are squarings.
template <std::size_t L>
SlicedBatch<L> k_square(const SlicedBatch<L>& a, const KaratsubaPlan& plan);

/// k_mul with the 4154-bit two-stage plan.
template <std::size_t L>
SlicedBatch<L> k_mul_double(const SlicedBatch<L>& a, const SlicedBatch<L>& b);

/// (t + q * n) / 2^T for T = plan.total_bits, assuming the sum is divisible
/// by 2^T in every lane (not checked). q and n have operand_limbs limbs and
/// are below 2^T; t has twice as many limbs.
///
/// The low sub-products are only approximated, from their upper columns,
/// with a total error below 2^(T-1); adding 2^(T-1) before the shift turns
/// that into an exact quotient. c_add is the OR of the low T bits of t, as
/// in the schoolbook variant, and is informational here.
template <std::size_t L>
TruncatedHigh<L> trunc_k_fma_hi(const SlicedBatch<L>& q, const SlicedBatch<L>& n,
                                const SlicedBatch<L>& t, const KaratsubaPlan& plan);

}  // namespace batchmp

#endif  // BATCHMP_KARATSUBA_HPP
