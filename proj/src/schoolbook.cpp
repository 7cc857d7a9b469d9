// SPDX-License-Identifier: Apache-2.0

#include "batchmp/schoolbook.hpp"

#include <string>

#include "batchmp/errors.hpp"
#include "batchmp/instrumentation.hpp"
#include "wide_ops.hpp"

namespace batchmp {

namespace {

template <std::size_t L>
void require_shape(const SlicedBatch<L>& q, const SlicedBatch<L>& n, const SlicedBatch<L>& t,
                   const char* what) {
  detail::require_same_limbs(q, n, what);
  if (t.limb_count() != 2 * q.limb_count()) {
    throw ShapeError(std::string(what) + ": addend has " + std::to_string(t.limb_count()) +
                     " limbs, expected " + std::to_string(2 * q.limb_count()));
  }
}

// Row-major product accumulation into c: lo pieces at i+j, hi pieces at i+j+1.
template <std::size_t L>
void accumulate_products(std::span<LaneVector<L>> c, const SlicedBatch<L>& a,
                         const SlicedBatch<L>& b) {
  const std::size_t n = a.limb_count();
  for (std::size_t i = 0; i < n; ++i) {
    const LaneVector<L>& ai = a[i];
    for (std::size_t j = 0; j < n; ++j) {
      c[i + j] = madd52lo(c[i + j], ai, b[j]);
      c[i + j + 1] = madd52hi(c[i + j + 1], ai, b[j]);
    }
  }
}

}  // namespace

template <std::size_t L>
SlicedBatch<L> b_mul(const SlicedBatch<L>& a, const SlicedBatch<L>& b) {
  detail::require_same_limbs(a, b, "b_mul");
  detail::count_product();
  const std::size_t n = a.limb_count();
  SlicedBatch<L> c(2 * n);
  if (n == 0) return c;
  accumulate_products<L>(c.limbs(), a, b);
  // Column 0 only holds a single low piece, so carries start at column 1.
  detail::carry_pass<L>(c.limbs(), 1);
  return c;
}

template <std::size_t L>
SlicedBatch<L> b_square(const SlicedBatch<L>& a) {
  detail::count_product();
  const std::size_t n = a.limb_count();
  SlicedBatch<L> c(2 * n);
  if (n == 0) return c;
  LaneVector<L> carry{};
  for (std::size_t col = 0; col < 2 * n; ++col) {
    LaneVector<L> acc{};
    bool any_cross = false;
    for (std::size_t j = 0; 2 * j < col; ++j) {
      const std::size_t i = col - j;
      if (i >= n) continue;
      acc = madd52lo(acc, a[i], a[j]);
      any_cross = true;
    }
    for (std::size_t j = 0; 2 * j + 1 < col; ++j) {
      const std::size_t i = col - 1 - j;
      if (i >= n) continue;
      acc = madd52hi(acc, a[i], a[j]);
      any_cross = true;
    }
    if (any_cross) acc = lane_shl(acc, 1);
    const std::size_t d = col / 2;
    if (col % 2 == 0) {
      acc = madd52lo(acc, a[d], a[d]);
    } else {
      acc = madd52hi(acc, a[d], a[d]);
    }
    if (col > 0) acc = lane_add(acc, carry);
    if (col + 1 < 2 * n) {
      carry = lane_shr(acc, kLimbBits);
      acc = lane_and(acc, detail::kMaskLane<L>);
    }
    c[col] = acc;
  }
  return c;
}

template <std::size_t L>
SlicedBatch<L> b_fma(const SlicedBatch<L>& q, const SlicedBatch<L>& n, const SlicedBatch<L>& t) {
  require_shape(q, n, t, "b_fma");
  detail::count_product();
  SlicedBatch<L> c = t;
  if (q.limb_count() == 0) return c;
  accumulate_products<L>(c.limbs(), q, n);
  detail::carry_pass<L>(c.limbs());
  detail::require_fits(c[c.limb_count() - 1], "b_fma");
  return c;
}

template <std::size_t L>
LaneVector<L> compute_c_add(std::span<const LaneVector<L>> t_low) {
  if (t_low.empty()) return LaneVector<L>{};
  LaneVector<L> any = t_low[0];
  for (std::size_t i = 1; i < t_low.size(); ++i) any = lane_or(any, t_low[i]);
  // Normalized limbs are below 2^52, so 0 - x has its top bit set iff x != 0.
  return lane_shr(lane_sub(detail::kZeroLane<L>, any), 63);
}

template <std::size_t L>
TruncatedHigh<L> trunc_b_fma_hi(const SlicedBatch<L>& q, const SlicedBatch<L>& n,
                                const SlicedBatch<L>& t) {
  require_shape(q, n, t, "trunc_b_fma_hi");
  detail::count_product();
  const std::size_t m = q.limb_count();
  TruncatedHigh<L> out{SlicedBatch<L>(m), LaneVector<L>{}};
  if (m == 0) return out;

  out.c_add = compute_c_add<L>(t.limbs().first(m));

  // Column m-1 in full: its low 52 bits are discarded, its top bits carry.
  LaneVector<L> up = t[m - 1];
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = m - 1 - i;
    up = madd52lo(up, q[i], n[j]);
  }
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const std::size_t j = m - 2 - i;
    up = madd52hi(up, q[i], n[j]);
  }
  // The columns below m-1 carry c in [0, 2^52) into column m-1, and
  // up + c is a multiple of 2^52. c is 0 exactly when c_add is 0, so adding
  // c_add * (2^52 - 1) before the shift yields (up + c) / 2^52.
  const LaneVector<L> fill = lane_sub(lane_shl(out.c_add, kLimbBits), out.c_add);
  const LaneVector<L> carry = lane_shr(lane_add(up, fill), kLimbBits);

  std::span<LaneVector<L>> hi = out.hi.limbs();
  for (std::size_t k = 0; k < m; ++k) hi[k] = t[m + k];
  hi[0] = lane_add(hi[0], carry);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = (i + 1 >= m ? 0 : m - 1 - i); j < m; ++j) {
      if (i + j >= m) hi[i + j - m] = madd52lo(hi[i + j - m], q[i], n[j]);
      if (i + j + 1 < 2 * m) hi[i + j + 1 - m] = madd52hi(hi[i + j + 1 - m], q[i], n[j]);
    }
  }
  detail::carry_pass<L>(hi);
  detail::require_fits(hi[m - 1], "trunc_b_fma_hi");
  return out;
}

template <std::size_t L>
SlicedBatch<L> b_mul_low(const SlicedBatch<L>& a, const SlicedBatch<L>& b, std::size_t out_limbs) {
  detail::require_same_limbs(a, b, "b_mul_low");
  detail::count_product();
  const std::size_t n = a.limb_count();
  SlicedBatch<L> c(out_limbs);
  if (out_limbs == 0) return c;
  for (std::size_t i = 0; i < n && i < out_limbs; ++i) {
    for (std::size_t j = 0; j < n && i + j < out_limbs; ++j) {
      c[i + j] = madd52lo(c[i + j], a[i], b[j]);
      if (i + j + 1 < out_limbs) c[i + j + 1] = madd52hi(c[i + j + 1], a[i], b[j]);
    }
  }
  detail::carry_pass<L>(c.limbs());
  c[out_limbs - 1] = lane_and(c[out_limbs - 1], detail::kMaskLane<L>);
  return c;
}

template <std::size_t L>
SlicedBatch<L> b_mul_upper(const SlicedBatch<L>& a, const SlicedBatch<L>& b,
                           std::size_t first_column) {
  detail::require_same_limbs(a, b, "b_mul_upper");
  detail::count_product();
  const std::size_t n = a.limb_count();
  SlicedBatch<L> c(2 * n);
  if (n == 0) return c;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i + j >= first_column) c[i + j] = madd52lo(c[i + j], a[i], b[j]);
      if (i + j + 1 >= first_column) c[i + j + 1] = madd52hi(c[i + j + 1], a[i], b[j]);
    }
  }
  detail::carry_pass<L>(c.limbs(), first_column);
  return c;
}

#define BATCHMP_INSTANTIATE(L)                                                                   \
  template SlicedBatch<L> b_mul<L>(const SlicedBatch<L>&, const SlicedBatch<L>&);                \
  template SlicedBatch<L> b_square<L>(const SlicedBatch<L>&);                                    \
  template SlicedBatch<L> b_fma<L>(const SlicedBatch<L>&, const SlicedBatch<L>&,                 \
                                   const SlicedBatch<L>&);                                       \
  template TruncatedHigh<L> trunc_b_fma_hi<L>(const SlicedBatch<L>&, const SlicedBatch<L>&,      \
                                              const SlicedBatch<L>&);                            \
  template LaneVector<L> compute_c_add<L>(std::span<const LaneVector<L>>);                       \
  template SlicedBatch<L> b_mul_low<L>(const SlicedBatch<L>&, const SlicedBatch<L>&,             \
                                       std::size_t);                                             \
  template SlicedBatch<L> b_mul_upper<L>(const SlicedBatch<L>&, const SlicedBatch<L>&,           \
                                         std::size_t);

BATCHMP_INSTANTIATE(8)
BATCHMP_INSTANTIATE(4)

#undef BATCHMP_INSTANTIATE

}  // namespace batchmp
