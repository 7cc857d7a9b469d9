// SPDX-License-Identifier: Apache-2.0

#ifndef BATCHMP_INSTRUMENTATION_HPP
#define BATCHMP_INSTRUMENTATION_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace batchmp {

/// Kinds of lane-vector operations, as seen by an operation trace.
enum class OpKind : std::uint8_t {
  madd_lo = 1,
  madd_hi,
  add,
  sub,
  shr,
  shl,
  bit_and,
  bit_or,
  eq_mask,
  select,
};

/// Per-category count of lane-vector operations. One call over L lanes
/// counts once, whatever L is.
struct OpCounters {
  std::uint64_t madd = 0;
  std::uint64_t shift = 0;
  std::uint64_t add_sub = 0;
  std::uint64_t mask = 0;
  std::uint64_t logic_or = 0;
  std::uint64_t compare = 0;
  std::uint64_t select = 0;
  // Schoolbook product kernels entered (b_mul, b_square, b_fma and their
  // truncated forms); the Karatsuba layer's elementary products show up here.
  std::uint64_t products = 0;

  void reset() noexcept { *this = OpCounters{}; }
  [[nodiscard]] std::uint64_t lane_ops() const noexcept {
    return madd + shift + add_sub + mask + logic_or + compare + select;
  }

  friend bool operator==(const OpCounters&, const OpCounters&) = default;
};

/// Running digest of the exact sequence of lane operation kinds.
///
/// The digest is FNV-1a over the kind bytes. Every kBlockLength operations
/// the running digest is snapshotted, which lets two traces be compared
/// block by block; an optional capture window records raw kinds so the
/// first diverging operation can be pinned down on a second run.
class OpTrace {
 public:
  static constexpr std::uint64_t kBlockLength = 4096;

  OpTrace() = default;

  /// Record raw kinds for operation indices [first, first + count).
  void capture_window(std::uint64_t first, std::uint64_t count);

  void record(OpKind kind);
  void reset();

  [[nodiscard]] std::uint64_t length() const noexcept { return length_; }
  [[nodiscard]] std::uint64_t digest() const noexcept { return digest_; }
  [[nodiscard]] std::span<const std::uint64_t> block_digests() const noexcept { return blocks_; }
  [[nodiscard]] std::span<const OpKind> captured() const noexcept { return captured_; }
  [[nodiscard]] std::uint64_t capture_first() const noexcept { return capture_first_; }

 private:
  static constexpr std::uint64_t kOffsetBasis = 0xcbf29ce484222325ULL;
  static constexpr std::uint64_t kPrime = 0x100000001b3ULL;

  std::uint64_t length_ = 0;
  std::uint64_t digest_ = kOffsetBasis;
  std::vector<std::uint64_t> blocks_;
  std::uint64_t capture_first_ = 0;
  std::uint64_t capture_count_ = 0;
  std::vector<OpKind> captured_;
};

namespace detail {

struct ProbeState {
  OpCounters* counters = nullptr;
  OpTrace* trace = nullptr;
};

inline thread_local ProbeState* tl_probe = nullptr;

void record_slow(ProbeState& probe, OpKind kind);
void count_product_slow(ProbeState& probe) noexcept;

inline void record(OpKind kind) {
  if (ProbeState* p = tl_probe) [[unlikely]] {
    record_slow(*p, kind);
  }
}

inline void count_product() noexcept {
  if (ProbeState* p = tl_probe) [[unlikely]] {
    count_product_slow(*p);
  }
}

}  // namespace detail

/// Routes the calling thread's lane operations into `counters` and/or
/// `trace` for the lifetime of the object. Probes nest; the innermost wins.
class ScopedProbe {
 public:
  explicit ScopedProbe(OpCounters* counters, OpTrace* trace = nullptr) noexcept;
  ~ScopedProbe();

  ScopedProbe(const ScopedProbe&) = delete;
  ScopedProbe& operator=(const ScopedProbe&) = delete;

 private:
  detail::ProbeState state_;
  detail::ProbeState* previous_;
};

}  // namespace batchmp

#endif  // BATCHMP_INSTRUMENTATION_HPP
