// SPDX-License-Identifier: Apache-2.0

#ifndef BATCHMP_LANE_HPP
#define BATCHMP_LANE_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

#include "batchmp/instrumentation.hpp"

namespace batchmp {

inline constexpr unsigned kLimbBits = 52;
inline constexpr std::uint64_t kMask52 = (std::uint64_t{1} << kLimbBits) - 1;

/// Lane counts of the 512-bit and 256-bit register variants.
template <std::size_t L>
concept SupportedLanes = (L == 8 || L == 4);

/// L independent 64-bit lanes; the unit every batch operation works on.
/// Lanes may hold any 64-bit value (accumulators run past 2^52). Only
/// natural alignment is assumed; the vector backend uses unaligned moves.
template <std::size_t L>
  requires SupportedLanes<L>
struct LaneVector {
  static constexpr std::size_t kLanes = L;

  std::array<std::uint64_t, L> lane{};

  static constexpr LaneVector broadcast(std::uint64_t value) noexcept {
    LaneVector v;
    v.lane.fill(value);
    return v;
  }

  constexpr std::uint64_t operator[](std::size_t i) const noexcept { return lane[i]; }
  constexpr std::uint64_t& operator[](std::size_t i) noexcept { return lane[i]; }

  friend bool operator==(const LaneVector&, const LaneVector&) = default;
};

using LaneVector8 = LaneVector<8>;
using LaneVector4 = LaneVector<4>;

/// Implementation behind the lane operations. The portable backend is
/// always present; `ifma` uses VPMADD52LUQ/HUQ when compiled in and
/// supported by the running CPU.
enum class Backend : std::uint8_t { portable, ifma };

std::string_view backend_name(Backend backend) noexcept;

/// True when the backend was compiled in and the CPU can execute it.
bool backend_available(Backend backend) noexcept;

namespace detail {
inline thread_local Backend tl_backend = Backend::portable;
}  // namespace detail

inline Backend active_backend() noexcept { return detail::tl_backend; }

/// Selects the calling thread's backend until destroyed.
/// Throws ConfigError if the backend is unavailable.
class ScopedBackend {
 public:
  explicit ScopedBackend(Backend backend);
  ~ScopedBackend() { detail::tl_backend = previous_; }

  ScopedBackend(const ScopedBackend&) = delete;
  ScopedBackend& operator=(const ScopedBackend&) = delete;

 private:
  Backend previous_;
};

// ---------------------------------------------------------------------------
// Portable backend.

namespace portable {

template <std::size_t L>
inline LaneVector<L> madd52lo(const LaneVector<L>& acc, const LaneVector<L>& b,
                              const LaneVector<L>& c) noexcept {
  LaneVector<L> r;
  for (std::size_t i = 0; i < L; ++i) {
    const unsigned __int128 p =
        static_cast<unsigned __int128>(b.lane[i] & kMask52) * (c.lane[i] & kMask52);
    r.lane[i] = acc.lane[i] + (static_cast<std::uint64_t>(p) & kMask52);
  }
  return r;
}

template <std::size_t L>
inline LaneVector<L> madd52hi(const LaneVector<L>& acc, const LaneVector<L>& b,
                              const LaneVector<L>& c) noexcept {
  LaneVector<L> r;
  for (std::size_t i = 0; i < L; ++i) {
    const unsigned __int128 p =
        static_cast<unsigned __int128>(b.lane[i] & kMask52) * (c.lane[i] & kMask52);
    r.lane[i] = acc.lane[i] + static_cast<std::uint64_t>(p >> kLimbBits);
  }
  return r;
}

#define BATCHMP_PORTABLE_BINARY(name, expr)                                          \
  template <std::size_t L>                                                           \
  inline LaneVector<L> name(const LaneVector<L>& a, const LaneVector<L>& b) noexcept { \
    LaneVector<L> r;                                                                 \
    for (std::size_t i = 0; i < L; ++i) {                                            \
      const std::uint64_t x = a.lane[i];                                             \
      const std::uint64_t y = b.lane[i];                                             \
      r.lane[i] = (expr);                                                            \
    }                                                                                \
    return r;                                                                        \
  }

BATCHMP_PORTABLE_BINARY(lane_add, x + y)
BATCHMP_PORTABLE_BINARY(lane_sub, x - y)
BATCHMP_PORTABLE_BINARY(lane_and, x & y)
BATCHMP_PORTABLE_BINARY(lane_or, x | y)
BATCHMP_PORTABLE_BINARY(lane_eq_mask, x == y ? ~std::uint64_t{0} : std::uint64_t{0})

#undef BATCHMP_PORTABLE_BINARY

template <std::size_t L>
inline LaneVector<L> lane_shr(const LaneVector<L>& a, unsigned count) noexcept {
  LaneVector<L> r;
  for (std::size_t i = 0; i < L; ++i) r.lane[i] = a.lane[i] >> count;
  return r;
}

template <std::size_t L>
inline LaneVector<L> lane_shl(const LaneVector<L>& a, unsigned count) noexcept {
  LaneVector<L> r;
  for (std::size_t i = 0; i < L; ++i) r.lane[i] = a.lane[i] << count;
  return r;
}

template <std::size_t L>
inline LaneVector<L> lane_select(const LaneVector<L>& mask, const LaneVector<L>& a,
                                 const LaneVector<L>& b) noexcept {
  LaneVector<L> r;
  for (std::size_t i = 0; i < L; ++i) {
    r.lane[i] = (a.lane[i] & mask.lane[i]) | (b.lane[i] & ~mask.lane[i]);
  }
  return r;
}

}  // namespace portable

// ---------------------------------------------------------------------------
// Accelerated backend, defined in lane_ifma.cpp.

namespace ifma {

#define BATCHMP_IFMA_DECLARE(L)                                                             \
  LaneVector<L> madd52lo(const LaneVector<L>&, const LaneVector<L>&, const LaneVector<L>&) noexcept; \
  LaneVector<L> madd52hi(const LaneVector<L>&, const LaneVector<L>&, const LaneVector<L>&) noexcept; \
  LaneVector<L> lane_add(const LaneVector<L>&, const LaneVector<L>&) noexcept;                \
  LaneVector<L> lane_sub(const LaneVector<L>&, const LaneVector<L>&) noexcept;                \
  LaneVector<L> lane_and(const LaneVector<L>&, const LaneVector<L>&) noexcept;                \
  LaneVector<L> lane_or(const LaneVector<L>&, const LaneVector<L>&) noexcept;                 \
  LaneVector<L> lane_eq_mask(const LaneVector<L>&, const LaneVector<L>&) noexcept;            \
  LaneVector<L> lane_shr(const LaneVector<L>&, unsigned) noexcept;                            \
  LaneVector<L> lane_shl(const LaneVector<L>&, unsigned) noexcept;                            \
  LaneVector<L> lane_select(const LaneVector<L>&, const LaneVector<L>&, const LaneVector<L>&) noexcept;

BATCHMP_IFMA_DECLARE(8)
BATCHMP_IFMA_DECLARE(4)

#undef BATCHMP_IFMA_DECLARE

}  // namespace ifma

// ---------------------------------------------------------------------------
// Dispatching, counted operations. These are what the rest of the library
// calls.

#if defined(BATCHMP_HAVE_IFMA)
#define BATCHMP_DISPATCH(call)                                   \
  do {                                                           \
    if (detail::tl_backend == Backend::ifma) return ifma::call;  \
    return portable::call;                                       \
  } while (0)
#else
#define BATCHMP_DISPATCH(call) return portable::call
#endif

/// acc + low 52 bits of (b mod 2^52) * (c mod 2^52), per lane.
template <std::size_t L>
inline LaneVector<L> madd52lo(const LaneVector<L>& acc, const LaneVector<L>& b,
                              const LaneVector<L>& c) {
  detail::record(OpKind::madd_lo);
  BATCHMP_DISPATCH(madd52lo(acc, b, c));
}

/// acc + high 52 bits of (b mod 2^52) * (c mod 2^52), per lane.
template <std::size_t L>
inline LaneVector<L> madd52hi(const LaneVector<L>& acc, const LaneVector<L>& b,
                              const LaneVector<L>& c) {
  detail::record(OpKind::madd_hi);
  BATCHMP_DISPATCH(madd52hi(acc, b, c));
}

template <std::size_t L>
inline LaneVector<L> lane_add(const LaneVector<L>& a, const LaneVector<L>& b) {
  detail::record(OpKind::add);
  BATCHMP_DISPATCH(lane_add(a, b));
}

template <std::size_t L>
inline LaneVector<L> lane_sub(const LaneVector<L>& a, const LaneVector<L>& b) {
  detail::record(OpKind::sub);
  BATCHMP_DISPATCH(lane_sub(a, b));
}

template <std::size_t L>
inline LaneVector<L> lane_and(const LaneVector<L>& a, const LaneVector<L>& b) {
  detail::record(OpKind::bit_and);
  BATCHMP_DISPATCH(lane_and(a, b));
}

template <std::size_t L>
inline LaneVector<L> lane_or(const LaneVector<L>& a, const LaneVector<L>& b) {
  detail::record(OpKind::bit_or);
  BATCHMP_DISPATCH(lane_or(a, b));
}

/// All-ones where a == b, zero elsewhere.
template <std::size_t L>
inline LaneVector<L> lane_eq_mask(const LaneVector<L>& a, const LaneVector<L>& b) {
  detail::record(OpKind::eq_mask);
  BATCHMP_DISPATCH(lane_eq_mask(a, b));
}

/// Logical shift; count must be in [0, 63].
template <std::size_t L>
inline LaneVector<L> lane_shr(const LaneVector<L>& a, unsigned count) {
  detail::record(OpKind::shr);
  BATCHMP_DISPATCH(lane_shr(a, count));
}

template <std::size_t L>
inline LaneVector<L> lane_shl(const LaneVector<L>& a, unsigned count) {
  detail::record(OpKind::shl);
  BATCHMP_DISPATCH(lane_shl(a, count));
}

/// a where mask is all-ones, b where it is zero.
template <std::size_t L>
inline LaneVector<L> lane_select(const LaneVector<L>& mask, const LaneVector<L>& a,
                                 const LaneVector<L>& b) {
  detail::record(OpKind::select);
  BATCHMP_DISPATCH(lane_select(mask, a, b));
}

#undef BATCHMP_DISPATCH

}  // namespace batchmp

#endif  // BATCHMP_LANE_HPP
