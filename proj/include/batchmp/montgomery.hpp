// SPDX-License-Identifier: Apache-2.0

#ifndef BATCHMP_MONTGOMERY_HPP
#define BATCHMP_MONTGOMERY_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "batchmp/karatsuba.hpp"
#include "batchmp/schoolbook.hpp"
#include "batchmp/sliced_batch.hpp"

namespace batchmp {

enum class Flavor : std::uint8_t { schoolbook, karatsuba };

std::string_view flavor_name(Flavor flavor) noexcept;

/// Throws ConfigError for anything but "schoolbook" or "karatsuba".
Flavor parse_flavor(std::string_view text);

inline constexpr std::size_t kModulusSizes[] = {1024, 2048, 4096};

/// Limb count and log2(R) for a modulus size and flavor.
/// Schoolbook: ceil(t / 52) limbs and R = 2^(52 * limbs).
/// Karatsuba: the 1038/2078/4154-bit plan, with R = 2^(plan bits).
struct MontgomeryShape {
  std::size_t limbs = 0;
  std::size_t r_bits = 0;
  std::optional<KaratsubaPlan> plan;
};

/// Throws ConfigError for unsupported sizes, or for the truncated
/// Karatsuba variant at 1024 bits, which does not exist.
MontgomeryShape montgomery_shape(std::size_t modulus_bits, Flavor flavor, bool truncated);

/// Per-batch moduli and precomputed constants. Immutable once built.
template <std::size_t L>
struct MontgomeryContext {
  std::size_t modulus_bits = 0;
  std::size_t limbs = 0;
  std::size_t r_bits = 0;
  Flavor flavor = Flavor::schoolbook;
  bool truncated = false;
  std::optional<KaratsubaPlan> plan;

  SlicedBatch<L> moduli;   // N
  SlicedBatch<L> n_prime;  // (-N)^-1 mod R
  LaneVector<L> n0_prime;  // N' mod 2^52
  SlicedBatch<L> r2;       // R^2 mod N
  SlicedBatch<L> one;      // R mod N, Montgomery form of 1
};

/// Builds a context for L odd moduli in (1, 2^modulus_bits).
/// Throws ShapeError, ConfigError, InvalidModulusError, SizeError.
template <std::size_t L>
MontgomeryContext<L> context_new(std::span<const Words> moduli, std::size_t modulus_bits,
                                 Flavor flavor, bool truncated);

/// q = T * N' mod R, the quotient every reduction variant uses.
template <std::size_t L>
SlicedBatch<L> mont_quotient(const SlicedBatch<L>& t, const MontgomeryContext<L>& ctx);

/// (T + qN) / R for a 2 * limbs-limb T < R * N; the result is below 2N and
/// congruent to T * R^-1 mod N.
template <std::size_t L>
SlicedBatch<L> mont_reduce(const SlicedBatch<L>& t, const MontgomeryContext<L>& ctx);

/// Same value as mont_reduce, from the high half of qN only.
/// Throws ConfigError for Karatsuba contexts at 1024 bits.
template <std::size_t L>
SlicedBatch<L> mont_reduce_truncated(const SlicedBatch<L>& t, const MontgomeryContext<L>& ctx);

/// mont_reduce_truncated together with the carry flag it used.
template <std::size_t L>
TruncatedHigh<L> mont_reduce_truncated_detail(const SlicedBatch<L>& t,
                                              const MontgomeryContext<L>& ctx);

/// The reduction the context is configured for.
template <std::size_t L>
SlicedBatch<L> reduce(const SlicedBatch<L>& t, const MontgomeryContext<L>& ctx);

/// Full product / square with the context's flavor.
template <std::size_t L>
SlicedBatch<L> product(const SlicedBatch<L>& a, const SlicedBatch<L>& b,
                       const MontgomeryContext<L>& ctx);
template <std::size_t L>
SlicedBatch<L> square(const SlicedBatch<L>& a, const MontgomeryContext<L>& ctx);

/// reduce(product(a, b)) and reduce(square(a)), for operands below 2N.
template <std::size_t L>
SlicedBatch<L> mont_mul(const SlicedBatch<L>& a, const SlicedBatch<L>& b,
                        const MontgomeryContext<L>& ctx);
template <std::size_t L>
SlicedBatch<L> mont_square(const SlicedBatch<L>& a, const MontgomeryContext<L>& ctx);

/// Word-interleaved Montgomery multiplication; bit-identical to
/// mont_reduce(b_mul(a, b)). Karatsuba contexts use mont_reduce(k_mul(a, b)).
template <std::size_t L>
SlicedBatch<L> mont_mul_cios(const SlicedBatch<L>& a, const SlicedBatch<L>& b,
                             const MontgomeryContext<L>& ctx);

/// a * R mod N, as a representative below 2N.
template <std::size_t L>
SlicedBatch<L> to_mont(const SlicedBatch<L>& a, const MontgomeryContext<L>& ctx);

/// a * R^-1 mod N, canonical (below N).
template <std::size_t L>
SlicedBatch<L> from_mont(const SlicedBatch<L>& a, const MontgomeryContext<L>& ctx);

}  // namespace batchmp

#endif  // BATCHMP_MONTGOMERY_HPP
