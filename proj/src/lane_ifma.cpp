// SPDX-License-Identifier: Apache-2.0
//
// AVX-512 IFMA lane backend. Compiled with -mavx512f -mavx512ifma -mavx512vl;
// only reached when backend_available(Backend::ifma) holds.

#include "batchmp/lane.hpp"

#include <immintrin.h>

namespace batchmp::ifma {

namespace {

inline __m512i load(const LaneVector<8>& v) noexcept { return _mm512_loadu_si512(v.lane.data()); }
inline LaneVector<8> store(__m512i x) noexcept {
  LaneVector<8> r;
  _mm512_storeu_si512(r.lane.data(), x);
  return r;
}

inline __m256i load(const LaneVector<4>& v) noexcept {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(v.lane.data()));
}
inline LaneVector<4> store(__m256i x) noexcept {
  LaneVector<4> r;
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(r.lane.data()), x);
  return r;
}

}  // namespace

// 512-bit registers, eight lanes.

LaneVector<8> madd52lo(const LaneVector<8>& acc, const LaneVector<8>& b,
                       const LaneVector<8>& c) noexcept {
  return store(_mm512_madd52lo_epu64(load(acc), load(b), load(c)));
}

LaneVector<8> madd52hi(const LaneVector<8>& acc, const LaneVector<8>& b,
                       const LaneVector<8>& c) noexcept {
  return store(_mm512_madd52hi_epu64(load(acc), load(b), load(c)));
}

LaneVector<8> lane_add(const LaneVector<8>& a, const LaneVector<8>& b) noexcept {
  return store(_mm512_add_epi64(load(a), load(b)));
}

LaneVector<8> lane_sub(const LaneVector<8>& a, const LaneVector<8>& b) noexcept {
  return store(_mm512_sub_epi64(load(a), load(b)));
}

LaneVector<8> lane_and(const LaneVector<8>& a, const LaneVector<8>& b) noexcept {
  return store(_mm512_and_si512(load(a), load(b)));
}

LaneVector<8> lane_or(const LaneVector<8>& a, const LaneVector<8>& b) noexcept {
  return store(_mm512_or_si512(load(a), load(b)));
}

LaneVector<8> lane_eq_mask(const LaneVector<8>& a, const LaneVector<8>& b) noexcept {
  const __mmask8 k = _mm512_cmpeq_epi64_mask(load(a), load(b));
  return store(_mm512_maskz_mov_epi64(k, _mm512_set1_epi64(-1)));
}

LaneVector<8> lane_shr(const LaneVector<8>& a, unsigned count) noexcept {
  return store(_mm512_srl_epi64(load(a), _mm_cvtsi32_si128(static_cast<int>(count))));
}

LaneVector<8> lane_shl(const LaneVector<8>& a, unsigned count) noexcept {
  return store(_mm512_sll_epi64(load(a), _mm_cvtsi32_si128(static_cast<int>(count))));
}

LaneVector<8> lane_select(const LaneVector<8>& mask, const LaneVector<8>& a,
                          const LaneVector<8>& b) noexcept {
  // (mask & a) | (~mask & b)
  return store(_mm512_ternarylogic_epi64(load(mask), load(a), load(b), 0xCA));
}

// 256-bit registers, four lanes.

LaneVector<4> madd52lo(const LaneVector<4>& acc, const LaneVector<4>& b,
                       const LaneVector<4>& c) noexcept {
  return store(_mm256_madd52lo_epu64(load(acc), load(b), load(c)));
}

LaneVector<4> madd52hi(const LaneVector<4>& acc, const LaneVector<4>& b,
                       const LaneVector<4>& c) noexcept {
  return store(_mm256_madd52hi_epu64(load(acc), load(b), load(c)));
}

LaneVector<4> lane_add(const LaneVector<4>& a, const LaneVector<4>& b) noexcept {
  return store(_mm256_add_epi64(load(a), load(b)));
}

LaneVector<4> lane_sub(const LaneVector<4>& a, const LaneVector<4>& b) noexcept {
  return store(_mm256_sub_epi64(load(a), load(b)));
}

LaneVector<4> lane_and(const LaneVector<4>& a, const LaneVector<4>& b) noexcept {
  return store(_mm256_and_si256(load(a), load(b)));
}

LaneVector<4> lane_or(const LaneVector<4>& a, const LaneVector<4>& b) noexcept {
  return store(_mm256_or_si256(load(a), load(b)));
}

LaneVector<4> lane_eq_mask(const LaneVector<4>& a, const LaneVector<4>& b) noexcept {
  return store(_mm256_cmpeq_epi64(load(a), load(b)));
}

LaneVector<4> lane_shr(const LaneVector<4>& a, unsigned count) noexcept {
  return store(_mm256_srl_epi64(load(a), _mm_cvtsi32_si128(static_cast<int>(count))));
}

LaneVector<4> lane_shl(const LaneVector<4>& a, unsigned count) noexcept {
  return store(_mm256_sll_epi64(load(a), _mm_cvtsi32_si128(static_cast<int>(count))));
}

LaneVector<4> lane_select(const LaneVector<4>& mask, const LaneVector<4>& a,
                          const LaneVector<4>& b) noexcept {
  return store(_mm256_ternarylogic_epi64(load(mask), load(a), load(b), 0xCA));
}

}  // namespace batchmp::ifma
