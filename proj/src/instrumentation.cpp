// SPDX-License-Identifier: Apache-2.0

#include "batchmp/instrumentation.hpp"

namespace batchmp {

void OpTrace::capture_window(std::uint64_t first, std::uint64_t count) {
  capture_first_ = first;
  capture_count_ = count;
  captured_.clear();
  captured_.reserve(static_cast<std::size_t>(count));
}

void OpTrace::record(OpKind kind) {
  if (length_ - capture_first_ < capture_count_ && length_ >= capture_first_) {
    captured_.push_back(kind);
  }
  digest_ = (digest_ ^ static_cast<std::uint64_t>(kind)) * kPrime;
  ++length_;
  if (length_ % kBlockLength == 0) blocks_.push_back(digest_);
}

void OpTrace::reset() {
  length_ = 0;
  digest_ = kOffsetBasis;
  blocks_.clear();
  captured_.clear();
}

namespace detail {

void record_slow(ProbeState& probe, OpKind kind) {
  if (OpCounters* c = probe.counters) {
    switch (kind) {
      case OpKind::madd_lo:
      case OpKind::madd_hi:
        ++c->madd;
        break;
      case OpKind::add:
      case OpKind::sub:
        ++c->add_sub;
        break;
      case OpKind::shr:
      case OpKind::shl:
        ++c->shift;
        break;
      case OpKind::bit_and:
        ++c->mask;
        break;
      case OpKind::bit_or:
        ++c->logic_or;
        break;
      case OpKind::eq_mask:
        ++c->compare;
        break;
      case OpKind::select:
        ++c->select;
        break;
    }
  }
  if (OpTrace* t = probe.trace) t->record(kind);
}

void count_product_slow(ProbeState& probe) noexcept {
  if (OpCounters* c = probe.counters) ++c->products;
}

}  // namespace detail

ScopedProbe::ScopedProbe(OpCounters* counters, OpTrace* trace) noexcept
    : state_{counters, trace}, previous_(detail::tl_probe) {
  detail::tl_probe = &state_;
}

ScopedProbe::~ScopedProbe() { detail::tl_probe = previous_; }

}  // namespace batchmp
