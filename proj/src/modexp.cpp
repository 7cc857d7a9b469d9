// SPDX-License-Identifier: Apache-2.0

#include "batchmp/modexp.hpp"

#include <algorithm>
#include <string>

#include "batchmp/errors.hpp"
#include "wide_ops.hpp"

namespace batchmp {

unsigned default_window(std::size_t modulus_bits) noexcept { return modulus_bits <= 1024 ? 4 : 5; }

template <std::size_t L>
LaneVector<L> extract_window(const ExponentBatch<L>& e, std::size_t bit_pos, unsigned w) {
  const std::size_t word = bit_pos / 64;
  const unsigned off = static_cast<unsigned>(bit_pos % 64);
  if (word >= e.words.size()) return LaneVector<L>{};
  LaneVector<L> v = lane_shr(e.words[word], off);
  if (off + w > 64 && word + 1 < e.words.size()) {
    v = lane_or(v, lane_shl(e.words[word + 1], 64 - off));
  }
  return lane_and(v, LaneVector<L>::broadcast((std::uint64_t{1} << w) - 1));
}

template <std::size_t L>
SlicedBatch<L> ct_table_select(std::span<const SlicedBatch<L>> table, const LaneVector<L>& indices) {
  if (table.empty()) throw ShapeError("ct_table_select: empty table");
  const std::size_t n = table[0].limb_count();
  SlicedBatch<L> out(n);
  for (std::size_t idx = 0; idx < table.size(); ++idx) {
    if (table[idx].limb_count() != n) throw ShapeError("ct_table_select: ragged table");
    const LaneVector<L> hit = lane_eq_mask(indices, LaneVector<L>::broadcast(idx));
    for (std::size_t i = 0; i < n; ++i) out[i] = lane_select(hit, table[idx][i], out[i]);
  }
  return out;
}

template <std::size_t L>
std::vector<Words> fixed_window_exp(std::span<const Words> bases, std::span<const Words> exponents,
                                    const MontgomeryContext<L>& ctx, const ExpConfig& cfg) {
  const unsigned w = cfg.window == 0 ? default_window(ctx.modulus_bits) : cfg.window;
  if (w < 1 || w > 5) {
    throw ConfigError("window width " + std::to_string(w) + " is outside [1, 5]");
  }
  if (bases.size() != L || exponents.size() != L) {
    throw ShapeError("fixed_window_exp: expected " + std::to_string(L) + " bases and exponents");
  }
  std::size_t s = cfg.exponent_bits;
  if (s == 0) {
    for (const Words& e : exponents) s = std::max(s, bit_length(e));
  }
  s = std::max<std::size_t>(s, 1);
  const std::size_t padded = (s + w - 1) / w * w;
  const ExponentBatch<L> e = expand64<L>(exponents, s);

  for (std::size_t k = 0; k < L; ++k) {
    if (bit_length(bases[k]) > ctx.modulus_bits) {
      throw SizeError("base in lane " + std::to_string(k) + " exceeds " +
                      std::to_string(ctx.modulus_bits) + " bits");
    }
  }
  const SlicedBatch<L> a = expand<L>(bases, kLimbBits * ctx.limbs);

  std::vector<SlicedBatch<L>> table(std::size_t{1} << w);
  table[0] = ctx.one;
  table[1] = to_mont(a, ctx);
  for (std::size_t i = 2; i < table.size(); ++i) table[i] = mont_mul(table[i - 1], table[1], ctx);

  const auto multiply = [&](const SlicedBatch<L>& x, const SlicedBatch<L>& y) {
    return cfg.cios ? mont_mul_cios(x, y, ctx) : mont_mul(x, y, ctx);
  };

  SlicedBatch<L> y = ctx.one;
  for (std::size_t pos = padded; pos >= w;) {
    pos -= w;
    for (unsigned i = 0; i < w; ++i) y = mont_square(y, ctx);
    const LaneVector<L> idx = extract_window(e, pos, w);
    // Negative control: a data-dependent branch on the window value.
    if (cfg.schedule == ExpSchedule::leaky && idx == LaneVector<L>{}) continue;
    y = multiply(y, ct_table_select<L>(table, idx));
  }
  std::vector<Words> out = contract(from_mont(y, ctx));
  for (Words& v : out) v = trimmed(std::move(v));
  return out;
}

#define BATCHMP_INSTANTIATE(L)                                                                    \
  template LaneVector<L> extract_window<L>(const ExponentBatch<L>&, std::size_t, unsigned);       \
  template SlicedBatch<L> ct_table_select<L>(std::span<const SlicedBatch<L>>,                     \
                                             const LaneVector<L>&);                               \
  template std::vector<Words> fixed_window_exp<L>(std::span<const Words>, std::span<const Words>, \
                                                  const MontgomeryContext<L>&, const ExpConfig&);

BATCHMP_INSTANTIATE(8)
BATCHMP_INSTANTIATE(4)

#undef BATCHMP_INSTANTIATE

}  // namespace batchmp
