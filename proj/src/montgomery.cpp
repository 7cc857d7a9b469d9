// SPDX-License-Identifier: Apache-2.0

#include "batchmp/montgomery.hpp"

#include <string>

#include "batchmp/errors.hpp"
#include "wide_ops.hpp"

namespace batchmp {

std::string_view flavor_name(Flavor flavor) noexcept {
  return flavor == Flavor::karatsuba ? "karatsuba" : "schoolbook";
}

Flavor parse_flavor(std::string_view text) {
  if (text == "schoolbook") return Flavor::schoolbook;
  if (text == "karatsuba") return Flavor::karatsuba;
  throw ConfigError("unknown flavor '" + std::string(text) + "' (expected schoolbook or karatsuba)");
}

MontgomeryShape montgomery_shape(std::size_t modulus_bits, Flavor flavor, bool truncated) {
  std::size_t plan_bits = 0;
  switch (modulus_bits) {
    case 1024: plan_bits = 1038; break;
    case 2048: plan_bits = 2078; break;
    case 4096: plan_bits = 4154; break;
    default:
      throw ConfigError("unsupported modulus size " + std::to_string(modulus_bits) +
                        " (supported: 1024, 2048, 4096)");
  }
  MontgomeryShape s;
  if (flavor == Flavor::schoolbook) {
    s.limbs = limbs_for_bits(modulus_bits);
    s.r_bits = kLimbBits * s.limbs;
    return s;
  }
  if (truncated && modulus_bits == 1024) {
    throw ConfigError("truncated Karatsuba reduction is not available for 1024-bit moduli");
  }
  s.plan = karatsuba_plan(plan_bits);
  s.limbs = s.plan->operand_limbs;
  s.r_bits = s.plan->total_bits;
  return s;
}

namespace {

template <std::size_t L>
void require_wide(const SlicedBatch<L>& t, const MontgomeryContext<L>& ctx, const char* what) {
  if (t.limb_count() != 2 * ctx.limbs) {
    throw ShapeError(std::string(what) + ": input has " + std::to_string(t.limb_count()) +
                     " limbs, expected " + std::to_string(2 * ctx.limbs));
  }
}

template <std::size_t L>
void require_narrow(const SlicedBatch<L>& a, const MontgomeryContext<L>& ctx, const char* what) {
  if (a.limb_count() != ctx.limbs) {
    throw ShapeError(std::string(what) + ": operand has " + std::to_string(a.limb_count()) +
                     " limbs, expected " + std::to_string(ctx.limbs));
  }
}

// Inverse of an odd n modulo 2^64; each step doubles the correct low bits.
std::uint64_t inverse_mod_2_64(std::uint64_t n) noexcept {
  std::uint64_t x = n;  // n * n == 1 mod 8
  for (int i = 0; i < 5; ++i) x *= 2 - n * x;
  return x;
}

// N^-1 mod 2^(52 * limbs) by Newton iteration x <- 2x - x(Nx), doubling the
// number of correct limbs per step.
template <std::size_t L>
SlicedBatch<L> inverse_mod_r(const SlicedBatch<L>& n, std::size_t limbs) {
  SlicedBatch<L> x(1);
  for (std::size_t k = 0; k < L; ++k) x[0].lane[k] = inverse_mod_2_64(n.limb(0, k)) & kMask52;
  std::size_t have = 1;
  while (have < limbs) {
    const std::size_t next = std::min(2 * have, limbs);
    x = x.resized(next);
    const SlicedBatch<L> nk = n.resized(next);
    const SlicedBatch<L> nx = b_mul_low(nk, x, next);
    const SlicedBatch<L> xnx = b_mul_low(x, nx, next);
    SlicedBatch<L> twice(next);
    for (std::size_t i = 0; i < next; ++i) twice[i] = lane_add(x[i], x[i]);
    detail::carry_pass<L>(twice.limbs());
    twice[next - 1] = lane_and(twice[next - 1], detail::kMaskLane<L>);
    static_cast<void>(detail::sub_in_place<L>(twice.limbs(), xnx.limbs()));
    x = twice;
    have = next;
  }
  return x;
}

// x <- 2x mod N for x < N.
template <std::size_t L>
SlicedBatch<L> double_mod(const SlicedBatch<L>& x, const SlicedBatch<L>& n) {
  SlicedBatch<L> y(x.limb_count());
  for (std::size_t i = 0; i < x.limb_count(); ++i) y[i] = lane_add(x[i], x[i]);
  detail::carry_pass<L>(y.limbs());
  return cond_sub_modulus(y, n);
}

}  // namespace

template <std::size_t L>
MontgomeryContext<L> context_new(std::span<const Words> moduli, std::size_t modulus_bits,
                                 Flavor flavor, bool truncated) {
  const MontgomeryShape shape = montgomery_shape(modulus_bits, flavor, truncated);
  if (moduli.size() != L) {
    throw ShapeError("context_new: expected " + std::to_string(L) + " moduli, got " +
                     std::to_string(moduli.size()));
  }
  for (std::size_t k = 0; k < L; ++k) {
    const Words& m = moduli[k];
    if (m.empty() || (m[0] & 1) == 0) {
      throw InvalidModulusError("modulus in lane " + std::to_string(k) + " is even");
    }
    if (bit_length(m) < 2) {
      throw InvalidModulusError("modulus in lane " + std::to_string(k) + " must exceed 1");
    }
    if (bit_length(m) > modulus_bits) {
      throw SizeError("modulus in lane " + std::to_string(k) + " has " +
                      std::to_string(bit_length(m)) + " bits, limit is " +
                      std::to_string(modulus_bits));
    }
  }

  MontgomeryContext<L> ctx;
  ctx.modulus_bits = modulus_bits;
  ctx.limbs = shape.limbs;
  ctx.r_bits = shape.r_bits;
  ctx.flavor = flavor;
  ctx.truncated = truncated;
  ctx.plan = shape.plan;
  ctx.moduli = expand<L>(moduli, kLimbBits * ctx.limbs);

  SlicedBatch<L> inv = inverse_mod_r(ctx.moduli, ctx.limbs);
  detail::keep_low_bits<L>(inv.limbs(), ctx.r_bits);
  ctx.n_prime = SlicedBatch<L>(ctx.limbs);
  static_cast<void>(detail::sub_in_place<L>(ctx.n_prime.limbs(), inv.limbs()));
  detail::keep_low_bits<L>(ctx.n_prime.limbs(), ctx.r_bits);
  ctx.n0_prime = ctx.n_prime[0];

  // 2^i mod N for i up to 2 * r_bits, by modular doubling from 1.
  SlicedBatch<L> x(ctx.limbs);
  x[0] = LaneVector<L>::broadcast(1);
  for (std::size_t i = 0; i < 2 * ctx.r_bits; ++i) {
    x = double_mod(x, ctx.moduli);
    if (i + 1 == ctx.r_bits) ctx.one = x;
  }
  ctx.r2 = x;
  return ctx;
}

template <std::size_t L>
SlicedBatch<L> mont_quotient(const SlicedBatch<L>& t, const MontgomeryContext<L>& ctx) {
  require_wide(t, ctx, "mont_quotient");
  SlicedBatch<L> q = b_mul_low(t.resized(ctx.limbs), ctx.n_prime, ctx.limbs);
  detail::keep_low_bits<L>(q.limbs(), ctx.r_bits);
  return q;
}

template <std::size_t L>
SlicedBatch<L> mont_reduce(const SlicedBatch<L>& t, const MontgomeryContext<L>& ctx) {
  const SlicedBatch<L> q = mont_quotient(t, ctx);
  if (ctx.flavor == Flavor::schoolbook) {
    const SlicedBatch<L> full = b_fma(q, ctx.moduli, t);
    return detail::shift_right<L>(full.limbs(), ctx.r_bits, ctx.limbs);
  }
  SlicedBatch<L> full = k_mul(q, ctx.moduli, *ctx.plan);
  for (std::size_t i = 0; i < full.limb_count(); ++i) full[i] = lane_add(full[i], t[i]);
  detail::carry_pass<L>(full.limbs());
  detail::require_fits(full[full.limb_count() - 1], "mont_reduce");
  return detail::shift_right<L>(full.limbs(), ctx.r_bits, ctx.limbs);
}

template <std::size_t L>
TruncatedHigh<L> mont_reduce_truncated_detail(const SlicedBatch<L>& t,
                                              const MontgomeryContext<L>& ctx) {
  if (ctx.flavor == Flavor::karatsuba && ctx.modulus_bits == 1024) {
    throw ConfigError("truncated Karatsuba reduction is not available for 1024-bit moduli");
  }
  const SlicedBatch<L> q = mont_quotient(t, ctx);
  if (ctx.flavor == Flavor::schoolbook) return trunc_b_fma_hi(q, ctx.moduli, t);
  return trunc_k_fma_hi(q, ctx.moduli, t, *ctx.plan);
}

template <std::size_t L>
SlicedBatch<L> mont_reduce_truncated(const SlicedBatch<L>& t, const MontgomeryContext<L>& ctx) {
  return mont_reduce_truncated_detail(t, ctx).hi;
}

template <std::size_t L>
SlicedBatch<L> reduce(const SlicedBatch<L>& t, const MontgomeryContext<L>& ctx) {
  return ctx.truncated ? mont_reduce_truncated(t, ctx) : mont_reduce(t, ctx);
}

template <std::size_t L>
SlicedBatch<L> product(const SlicedBatch<L>& a, const SlicedBatch<L>& b,
                       const MontgomeryContext<L>& ctx) {
  require_narrow(a, ctx, "product");
  require_narrow(b, ctx, "product");
  return ctx.flavor == Flavor::schoolbook ? b_mul(a, b) : k_mul(a, b, *ctx.plan);
}

template <std::size_t L>
SlicedBatch<L> square(const SlicedBatch<L>& a, const MontgomeryContext<L>& ctx) {
  require_narrow(a, ctx, "square");
  return ctx.flavor == Flavor::schoolbook ? b_square(a) : k_square(a, *ctx.plan);
}

template <std::size_t L>
SlicedBatch<L> mont_mul(const SlicedBatch<L>& a, const SlicedBatch<L>& b,
                        const MontgomeryContext<L>& ctx) {
  return reduce(product(a, b, ctx), ctx);
}

template <std::size_t L>
SlicedBatch<L> mont_square(const SlicedBatch<L>& a, const MontgomeryContext<L>& ctx) {
  return reduce(square(a, ctx), ctx);
}

template <std::size_t L>
SlicedBatch<L> mont_mul_cios(const SlicedBatch<L>& a, const SlicedBatch<L>& b,
                             const MontgomeryContext<L>& ctx) {
  require_narrow(a, ctx, "mont_mul_cios");
  require_narrow(b, ctx, "mont_mul_cios");
  if (ctx.flavor == Flavor::karatsuba) return mont_reduce(k_mul(a, b, *ctx.plan), ctx);

  const std::size_t n = ctx.limbs;
  const SlicedBatch<L>& m = ctx.moduli;
  // Lazy accumulator: limbs may exceed 2^52 until the final carry pass.
  std::vector<LaneVector<L>> y(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      y[j] = madd52lo(y[j], a[i], b[j]);
      y[j + 1] = madd52hi(y[j + 1], a[i], b[j]);
    }
    const LaneVector<L> q = madd52lo(detail::kZeroLane<L>, y[0], ctx.n0_prime);
    for (std::size_t j = 0; j < n; ++j) {
      y[j] = madd52lo(y[j], q, m[j]);
      y[j + 1] = madd52hi(y[j + 1], q, m[j]);
    }
    // The low 52 bits of y[0] are now zero; drop one limb.
    y[1] = lane_add(y[1], lane_shr(y[0], kLimbBits));
    for (std::size_t j = 0; j < n; ++j) y[j] = y[j + 1];
    y[n] = LaneVector<L>{};
  }
  SlicedBatch<L> out(n);
  std::copy_n(y.begin(), n, out.limbs().begin());
  detail::carry_pass<L>(out.limbs());
  detail::require_fits(out[n - 1], "mont_mul_cios");
  return out;
}

template <std::size_t L>
SlicedBatch<L> to_mont(const SlicedBatch<L>& a, const MontgomeryContext<L>& ctx) {
  return mont_mul(a, ctx.r2, ctx);
}

template <std::size_t L>
SlicedBatch<L> from_mont(const SlicedBatch<L>& a, const MontgomeryContext<L>& ctx) {
  require_narrow(a, ctx, "from_mont");
  return cond_sub_modulus(reduce(a.resized(2 * ctx.limbs), ctx), ctx.moduli);
}

#define BATCHMP_INSTANTIATE(L)                                                                   \
  template struct MontgomeryContext<L>;                                                          \
  template MontgomeryContext<L> context_new<L>(std::span<const Words>, std::size_t, Flavor,      \
                                               bool);                                            \
  template SlicedBatch<L> mont_quotient<L>(const SlicedBatch<L>&, const MontgomeryContext<L>&);  \
  template SlicedBatch<L> mont_reduce<L>(const SlicedBatch<L>&, const MontgomeryContext<L>&);    \
  template SlicedBatch<L> mont_reduce_truncated<L>(const SlicedBatch<L>&,                        \
                                                   const MontgomeryContext<L>&);                 \
  template TruncatedHigh<L> mont_reduce_truncated_detail<L>(const SlicedBatch<L>&,               \
                                                            const MontgomeryContext<L>&);        \
  template SlicedBatch<L> reduce<L>(const SlicedBatch<L>&, const MontgomeryContext<L>&);         \
  template SlicedBatch<L> product<L>(const SlicedBatch<L>&, const SlicedBatch<L>&,               \
                                     const MontgomeryContext<L>&);                               \
  template SlicedBatch<L> square<L>(const SlicedBatch<L>&, const MontgomeryContext<L>&);         \
  template SlicedBatch<L> mont_mul<L>(const SlicedBatch<L>&, const SlicedBatch<L>&,              \
                                      const MontgomeryContext<L>&);                              \
  template SlicedBatch<L> mont_square<L>(const SlicedBatch<L>&, const MontgomeryContext<L>&);    \
  template SlicedBatch<L> mont_mul_cios<L>(const SlicedBatch<L>&, const SlicedBatch<L>&,         \
                                           const MontgomeryContext<L>&);                         \
  template SlicedBatch<L> to_mont<L>(const SlicedBatch<L>&, const MontgomeryContext<L>&);        \
  template SlicedBatch<L> from_mont<L>(const SlicedBatch<L>&, const MontgomeryContext<L>&);

BATCHMP_INSTANTIATE(8)
BATCHMP_INSTANTIATE(4)

#undef BATCHMP_INSTANTIATE

}  // namespace batchmp
