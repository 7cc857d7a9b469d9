// SPDX-License-Identifier: Apache-2.0

#include "batchmp/karatsuba.hpp"

#include <bit>
#include <string>

#include "batchmp/errors.hpp"
#include "wide_ops.hpp"

namespace batchmp {

KaratsubaPlan karatsuba_plan(std::size_t total_bits) {
  KaratsubaPlan p;
  p.total_bits = total_bits;
  p.half_bits = total_bits / 2;
  p.operand_limbs = limbs_for_bits(total_bits);
  p.share_limbs = limbs_for_bits(p.half_bits + 1);
  switch (total_bits) {
    case 518:
    case 1038:
    case 2078:
      p.stages = 1;
      p.elementary_bits = kLimbBits * p.share_limbs;
      break;
    case 4154:
      p.stages = 2;
      p.elementary_bits = p.half_bits + 1;
      break;
    default:
      throw ConfigError("no Karatsuba plan for " + std::to_string(total_bits) +
                        "-bit operands (supported: 518, 1038, 2078, 4154)");
  }
  return p;
}

std::optional<KaratsubaPlan> inner_plan(const KaratsubaPlan& plan) {
  if (plan.stages < 2) return std::nullopt;
  return karatsuba_plan(plan.elementary_bits);
}

namespace {

template <std::size_t L>
void require_operand(const SlicedBatch<L>& x, const KaratsubaPlan& plan, const char* what) {
  if (x.limb_count() != plan.operand_limbs) {
    throw ShapeError(std::string(what) + ": operand has " + std::to_string(x.limb_count()) +
                     " limbs, plan expects " + std::to_string(plan.operand_limbs));
  }
  // Scalar range check; not part of the lane operation stream.
  const std::size_t top = plan.total_bits % kLimbBits;
  if (top == 0) return;
  for (std::size_t k = 0; k < L; ++k) {
    if (x.limb(plan.operand_limbs - 1, k) >> top != 0) {
      throw SizeError(std::string(what) + ": lane " + std::to_string(k) + " exceeds " +
                      std::to_string(plan.total_bits) + " bits");
    }
  }
}

template <std::size_t L>
struct Shares {
  SlicedBatch<L> lo;
  SlicedBatch<L> hi;
  SlicedBatch<L> sum;
};

// x = lo + 2^h * hi; sum = lo + hi < 2^(h+1).
template <std::size_t L>
Shares<L> split(const SlicedBatch<L>& x, const KaratsubaPlan& plan) {
  const std::size_t e = plan.share_limbs;
  Shares<L> s{x.resized(e), detail::shift_right<L>(x.limbs(), plan.half_bits, e), SlicedBatch<L>(e)};
  detail::keep_low_bits<L>(s.lo.limbs(), plan.half_bits);
  for (std::size_t i = 0; i < e; ++i) s.sum[i] = lane_add(s.lo[i], s.hi[i]);
  detail::carry_pass<L>(s.sum.limbs());
  return s;
}

template <std::size_t L>
SlicedBatch<L> elementary(const SlicedBatch<L>& x, const SlicedBatch<L>& y, bool square,
                          const std::optional<KaratsubaPlan>& inner) {
  if (inner) return square ? k_square(x, *inner) : k_mul(x, y, *inner);
  return square ? b_square(x) : b_mul(x, y);
}

// D0 + 2^h (D1 - D0 - D2) + 2^2h D2, positives first.
template <std::size_t L, typename Part>
void recombine(detail::SplitSum<L>& acc, Part& d0, Part& d1, Part& d2, std::size_t h) {
  acc.add(d0, 0, false);
  acc.add(d1, h, false);
  acc.add(d2, 2 * h, false);
  acc.add(d0, h, true);
  acc.add(d2, h, true);
}

template <std::size_t L>
SlicedBatch<L> karatsuba(const SlicedBatch<L>& a, const SlicedBatch<L>& b, bool square,
                         const KaratsubaPlan& plan) {
  const Shares<L> sa = split(a, plan);
  const Shares<L> sb = square ? Shares<L>{} : split(b, plan);
  const Shares<L>& rb = square ? sa : sb;
  const std::optional<KaratsubaPlan> inner = inner_plan(plan);
  SlicedBatch<L> d0 = elementary(sa.lo, rb.lo, square, inner);
  SlicedBatch<L> d1 = elementary(sa.sum, rb.sum, square, inner);
  SlicedBatch<L> d2 = elementary(sa.hi, rb.hi, square, inner);
  detail::SplitSum<L> acc(2 * plan.operand_limbs);
  std::span<const LaneVector<L>> v0 = d0.limbs(), v1 = d1.limbs(), v2 = d2.limbs();
  recombine<L>(acc, v0, v1, v2, plan.half_bits);
  return acc.resolve("k_mul");
}

// Largest column c with 4e * 2^(52c) <= 2^budget, or 0 if none.
std::size_t first_kept_column(std::size_t e, long budget) {
  const long slack = static_cast<long>(std::bit_width(4 * e - 1));
  if (budget < slack + static_cast<long>(kLimbBits)) return 0;
  return static_cast<std::size_t>((budget - slack) / static_cast<long>(kLimbBits));
}

// Approximates x * y with absolute error below 2^budget (exact when the
// budget is too small to drop anything).
template <std::size_t L>
detail::SplitSum<L> approx_product(const SlicedBatch<L>& x, const SlicedBatch<L>& y,
                                   const std::optional<KaratsubaPlan>& plan, long budget) {
  if (!plan) {
    const std::size_t c = first_kept_column(x.limb_count(), budget);
    detail::SplitSum<L> leaf(2 * x.limb_count());
    const SlicedBatch<L> p = c == 0 ? b_mul(x, y) : b_mul_upper(x, y, c);
    leaf.add(p.limbs(), 0, false);
    return leaf;
  }
  const long h = static_cast<long>(plan->half_bits);
  const Shares<L> sx = split(x, *plan);
  const Shares<L> sy = split(y, *plan);
  const std::optional<KaratsubaPlan> inner = inner_plan(*plan);
  // |err| <= |e0|(2^h + 1) + |e1| 2^h + |e2|(2^2h + 2^h), each term < 2^(budget-2).
  detail::SplitSum<L> d2 = approx_product(sx.hi, sy.hi, inner, budget - 2 * h - 2);
  detail::SplitSum<L> d1 = approx_product(sx.sum, sy.sum, inner, budget - h - 2);
  detail::SplitSum<L> d0 = approx_product(sx.lo, sy.lo, inner, budget - h - 2);
  detail::SplitSum<L> acc(2 * plan->operand_limbs);
  recombine<L>(acc, d0, d1, d2, plan->half_bits);
  return acc;
}

}  // namespace

template <std::size_t L>
SlicedBatch<L> k_mul(const SlicedBatch<L>& a, const SlicedBatch<L>& b, const KaratsubaPlan& plan) {
  require_operand(a, plan, "k_mul");
  require_operand(b, plan, "k_mul");
  return karatsuba(a, b, false, plan);
}

template <std::size_t L>
SlicedBatch<L> k_square(const SlicedBatch<L>& a, const KaratsubaPlan& plan) {
  require_operand(a, plan, "k_square");
  return karatsuba(a, a, true, plan);
}

template <std::size_t L>
SlicedBatch<L> k_mul_double(const SlicedBatch<L>& a, const SlicedBatch<L>& b) {
  return k_mul(a, b, karatsuba_plan(4154));
}

template <std::size_t L>
TruncatedHigh<L> trunc_k_fma_hi(const SlicedBatch<L>& q, const SlicedBatch<L>& n,
                                const SlicedBatch<L>& t, const KaratsubaPlan& plan) {
  require_operand(q, plan, "trunc_k_fma_hi");
  require_operand(n, plan, "trunc_k_fma_hi");
  const std::size_t wide = 2 * plan.operand_limbs;
  if (t.limb_count() != wide) {
    throw ShapeError("trunc_k_fma_hi: addend has " + std::to_string(t.limb_count()) +
                     " limbs, expected " + std::to_string(wide));
  }
  const std::size_t bits = plan.total_bits;

  TruncatedHigh<L> out;
  SlicedBatch<L> low = t.resized(limbs_for_bits(bits));
  detail::keep_low_bits<L>(low.limbs(), bits);
  out.c_add = compute_c_add<L>(low.limbs());

  SlicedBatch<L> offset(wide);
  offset[(bits - 1) / kLimbBits] = LaneVector<L>::broadcast(std::uint64_t{1} << ((bits - 1) % kLimbBits));

  detail::SplitSum<L> x(wide);
  x.add(t.limbs(), 0, false);
  x.add(offset.limbs(), 0, false);
  detail::SplitSum<L> qn = approx_product(q, n, std::optional<KaratsubaPlan>(plan),
                                          static_cast<long>(bits) - 1);
  x.add(qn, 0, false);
  const SlicedBatch<L> sum = x.resolve("trunc_k_fma_hi");
  out.hi = detail::shift_right<L>(sum.limbs(), bits, plan.operand_limbs);
  return out;
}

#define BATCHMP_INSTANTIATE(L)                                                                   \
  template SlicedBatch<L> k_mul<L>(const SlicedBatch<L>&, const SlicedBatch<L>&,                 \
                                   const KaratsubaPlan&);                                        \
  template SlicedBatch<L> k_square<L>(const SlicedBatch<L>&, const KaratsubaPlan&);              \
  template SlicedBatch<L> k_mul_double<L>(const SlicedBatch<L>&, const SlicedBatch<L>&);         \
  template TruncatedHigh<L> trunc_k_fma_hi<L>(const SlicedBatch<L>&, const SlicedBatch<L>&,      \
                                              const SlicedBatch<L>&, const KaratsubaPlan&);

BATCHMP_INSTANTIATE(8)
BATCHMP_INSTANTIATE(4)

#undef BATCHMP_INSTANTIATE

}  // namespace batchmp
