// SPDX-License-Identifier: Apache-2.0
//
// Limb-array helpers shared by the arithmetic modules. Everything here goes
// through the counted lane operations.

#ifndef BATCHMP_SRC_WIDE_OPS_HPP
#define BATCHMP_SRC_WIDE_OPS_HPP

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "batchmp/errors.hpp"
#include "batchmp/lane.hpp"
#include "batchmp/sliced_batch.hpp"

namespace batchmp::detail {

template <std::size_t L>
inline const LaneVector<L> kMaskLane = LaneVector<L>::broadcast(kMask52);

template <std::size_t L>
inline const LaneVector<L> kZeroLane{};

/// Moves the bits above 52 of limbs[start .. n-2] into the next limb.
/// The top limb keeps whatever lands in it.
template <std::size_t L>
void carry_pass(std::span<LaneVector<L>> limbs, std::size_t start = 0) {
  for (std::size_t i = start; i + 1 < limbs.size(); ++i) {
    const LaneVector<L> carry = lane_shr(limbs[i], kLimbBits);
    limbs[i + 1] = lane_add(limbs[i + 1], carry);
    limbs[i] = lane_and(limbs[i], kMaskLane<L>);
  }
}

/// Scalar check (not a lane op) that no lane of `top` reaches 2^52.
template <std::size_t L>
bool fits_limb(const LaneVector<L>& top) noexcept {
  std::uint64_t any = 0;
  for (std::size_t k = 0; k < L; ++k) any |= top.lane[k] >> kLimbBits;
  return any == 0;
}

template <std::size_t L>
void require_fits(const LaneVector<L>& top, const char* what) {
  if (!fits_limb(top)) throw OverflowError(std::string(what) + ": carry out of the top limb");
}

/// acc += x * 2^shift_bits for normalized x. Pieces that would land past
/// the end of acc are dropped; callers size acc so they are zero.
template <std::size_t L>
void add_shifted(std::span<LaneVector<L>> acc, std::span<const LaneVector<L>> x,
                 std::size_t shift_bits) {
  const std::size_t q = shift_bits / kLimbBits;
  const unsigned r = static_cast<unsigned>(shift_bits % kLimbBits);
  if (r == 0) {
    for (std::size_t i = 0; i < x.size() && i + q < acc.size(); ++i) {
      acc[i + q] = lane_add(acc[i + q], x[i]);
    }
    return;
  }
  for (std::size_t i = 0; i < x.size() && i + q < acc.size(); ++i) {
    const LaneVector<L> lo = lane_and(lane_shl(x[i], r), kMaskLane<L>);
    acc[i + q] = lane_add(acc[i + q], lo);
    if (i + q + 1 < acc.size()) {
      acc[i + q + 1] = lane_add(acc[i + q + 1], lane_shr(x[i], kLimbBits - r));
    }
  }
}

/// a -= b over normalized limbs (b may be shorter). Returns the final
/// borrow, 1 in lanes where b > a.
template <std::size_t L>
LaneVector<L> sub_in_place(std::span<LaneVector<L>> a, std::span<const LaneVector<L>> b) {
  LaneVector<L> borrow{};
  for (std::size_t i = 0; i < a.size(); ++i) {
    LaneVector<L> d = i < b.size() ? lane_sub(a[i], b[i]) : a[i];
    if (i > 0) d = lane_sub(d, borrow);
    borrow = lane_shr(d, 63);
    a[i] = lane_and(d, kMaskLane<L>);
  }
  return borrow;
}

/// floor(x / 2^shift_bits), as out_limbs limbs. x normalized.
template <std::size_t L>
SlicedBatch<L> shift_right(std::span<const LaneVector<L>> x, std::size_t shift_bits,
                           std::size_t out_limbs) {
  SlicedBatch<L> out(out_limbs);
  const std::size_t q = shift_bits / kLimbBits;
  const unsigned r = static_cast<unsigned>(shift_bits % kLimbBits);
  for (std::size_t i = 0; i < out_limbs && i + q < x.size(); ++i) {
    if (r == 0) {
      out[i] = x[i + q];
      continue;
    }
    LaneVector<L> v = lane_shr(x[i + q], r);
    if (i + q + 1 < x.size()) {
      v = lane_or(v, lane_and(lane_shl(x[i + q + 1], kLimbBits - r), kMaskLane<L>));
    }
    out[i] = v;
  }
  return out;
}

/// Clears every bit at position >= bits.
template <std::size_t L>
void keep_low_bits(std::span<LaneVector<L>> x, std::size_t bits) {
  const std::size_t full = bits / kLimbBits;
  const unsigned r = static_cast<unsigned>(bits % kLimbBits);
  for (std::size_t i = full; i < x.size(); ++i) {
    if (i == full && r != 0) {
      x[i] = lane_and(x[i], LaneVector<L>::broadcast((std::uint64_t{1} << r) - 1));
    } else {
      x[i] = LaneVector<L>{};
    }
  }
}

/// Value kept as (positive part) - (negative part), both lazily
/// accumulated, so Karatsuba-style recombinations never go through a
/// negative intermediate.
template <std::size_t L>
class SplitSum {
 public:
  explicit SplitSum(std::size_t n_limbs) : pos_(n_limbs), neg_(n_limbs) {}

  [[nodiscard]] std::size_t limb_count() const noexcept { return pos_.size(); }

  void add(std::span<const LaneVector<L>> x, std::size_t shift_bits, bool negative) {
    add_shifted<L>(negative ? std::span<LaneVector<L>>(neg_) : std::span<LaneVector<L>>(pos_), x,
                   shift_bits);
  }

  /// Adds sign * other * 2^shift_bits. `other` is normalized first.
  void add(SplitSum& other, std::size_t shift_bits, bool negative) {
    other.normalize_parts();
    add(other.pos_, shift_bits, negative);
    add(other.neg_, shift_bits, !negative);
  }

  void normalize_parts() {
    carry_pass<L>(pos_);
    carry_pass<L>(neg_);
  }

  /// pos - neg, normalized. Throws std::logic_error if any lane is negative
  /// or overflows the limb count; both are internal invariant violations.
  [[nodiscard]] SlicedBatch<L> resolve(const char* what) {
    normalize_parts();
    SlicedBatch<L> out(pos_.size());
    std::copy(pos_.begin(), pos_.end(), out.limbs().begin());
    if (!fits_limb(pos_.back()) || !fits_limb(neg_.back())) {
      throw std::logic_error(std::string(what) + ": accumulator overflow");
    }
    const LaneVector<L> borrow = sub_in_place<L>(out.limbs(), neg_);
    if (!(borrow == LaneVector<L>{})) {
      throw std::logic_error(std::string(what) + ": negative recombination");
    }
    return out;
  }

 private:
  std::vector<LaneVector<L>> pos_;
  std::vector<LaneVector<L>> neg_;
};

template <std::size_t L>
void require_same_limbs(const SlicedBatch<L>& a, const SlicedBatch<L>& b, const char* what) {
  if (a.limb_count() != b.limb_count()) {
    throw ShapeError(std::string(what) + ": operands have " + std::to_string(a.limb_count()) +
                     " and " + std::to_string(b.limb_count()) + " limbs");
  }
}

}  // namespace batchmp::detail

#endif  // BATCHMP_SRC_WIDE_OPS_HPP
