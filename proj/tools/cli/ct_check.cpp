// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <vector>

#include "commands.hpp"
#include "report.hpp"

namespace batchmp::cli {
namespace {

const char* kind_name(OpKind kind) {
  switch (kind) {
    case OpKind::madd_lo: return "madd52lo";
    case OpKind::madd_hi: return "madd52hi";
    case OpKind::add: return "add";
    case OpKind::sub: return "sub";
    case OpKind::shr: return "shr";
    case OpKind::shl: return "shl";
    case OpKind::bit_and: return "and";
    case OpKind::bit_or: return "or";
    case OpKind::eq_mask: return "eq_mask";
    case OpKind::select: return "select";
  }
  return "?";
}

struct Inputs {
  std::vector<Words> moduli;
  std::vector<Words> bases;
  std::vector<Words> zeros;
  std::vector<Words> ones;
  std::size_t s = 0;
};

Inputs make_inputs(const JobSpec& spec, std::size_t lanes) {
  Rng rng(spec.seed);
  Inputs in;
  in.s = spec.exponent_bits.value_or(spec.size_bits);
  const Words all_ones = oracle::ref_sub(oracle::RefInt::pow2(in.s), 1).words();
  for (std::size_t k = 0; k < lanes; ++k) {
    in.moduli.push_back(random_modulus(rng, spec.size_bits));
    in.bases.push_back(below(rng, in.moduli.back()));
    in.zeros.push_back(Words{0});
    in.ones.push_back(all_ones);
  }
  return in;
}

template <std::size_t L>
void run_traced(const JobSpec& spec, const Inputs& in, const MontgomeryContext<L>& ctx,
                const std::vector<Words>& exps, OpCounters& counters, OpTrace& trace) {
  ExpConfig cfg;
  cfg.window = spec.window.value_or(0);
  cfg.exponent_bits = in.s;
  cfg.schedule = spec.negative_control ? ExpSchedule::leaky : ExpSchedule::constant_time;
  ScopedProbe probe(&counters, &trace);
  (void)fixed_window_exp<L>(in.bases, exps, ctx, cfg);
}

template <std::size_t L>
TraceComparison compare(const JobSpec& spec) {
  const Inputs in = make_inputs(spec, L);
  const MontgomeryContext<L> ctx = context_new<L>(in.moduli, spec.size_bits, spec.flavor, spec.truncated);

  TraceComparison cmp;
  OpTrace ta, tb;
  run_traced<L>(spec, in, ctx, in.zeros, cmp.counters_a, ta);
  run_traced<L>(spec, in, ctx, in.ones, cmp.counters_b, tb);
  cmp.digest_a = ta.digest();
  cmp.digest_b = tb.digest();
  cmp.length_a = ta.length();
  cmp.length_b = tb.length();
  if (cmp.digest_a == cmp.digest_b && cmp.length_a == cmp.length_b) return cmp;

  // The first differing block digest bounds the divergence; a second pair
  // of runs captures that block and finds the exact operation.
  const auto ba = ta.block_digests();
  const auto bb = tb.block_digests();
  std::size_t block = 0;
  while (block < ba.size() && block < bb.size() && ba[block] == bb[block]) ++block;
  const std::uint64_t first = block * OpTrace::kBlockLength;

  OpCounters scratch;
  OpTrace ca, cb;
  ca.capture_window(first, OpTrace::kBlockLength);
  cb.capture_window(first, OpTrace::kBlockLength);
  run_traced<L>(spec, in, ctx, in.zeros, scratch, ca);
  run_traced<L>(spec, in, ctx, in.ones, scratch, cb);
  const auto ka = ca.captured();
  const auto kb = cb.captured();
  std::size_t i = 0;
  while (i < ka.size() && i < kb.size() && ka[i] == kb[i]) ++i;
  cmp.first_divergence = first + i;
  return cmp;
}

template <std::size_t L>
void describe_divergence(const JobSpec& spec, std::uint64_t index, std::ostream& out) {
  const Inputs in = make_inputs(spec, L);
  const MontgomeryContext<L> ctx = context_new<L>(in.moduli, spec.size_bits, spec.flavor, spec.truncated);
  OpCounters scratch;
  OpTrace ca, cb;
  ca.capture_window(index, 1);
  cb.capture_window(index, 1);
  run_traced<L>(spec, in, ctx, in.zeros, scratch, ca);
  run_traced<L>(spec, in, ctx, in.ones, scratch, cb);
  out << "  zero windows: " << (ca.captured().empty() ? "end of trace" : kind_name(ca.captured()[0]))
      << "\n  ones windows: " << (cb.captured().empty() ? "end of trace" : kind_name(cb.captured()[0]))
      << "\n";
}

void print_trace(std::ostream& out, const char* label, const OpCounters& c, std::uint64_t digest,
                 std::uint64_t length) {
  out << label << ": ops=" << length << " madd=" << c.madd << " shift=" << c.shift
      << " add_sub=" << c.add_sub << " mask=" << c.mask << " or=" << c.logic_or << " compare=" << c.compare
      << " select=" << c.select << " digest=0x" << std::hex << digest << std::dec << "\n";
}

}  // namespace

TraceComparison compare_exp_traces(const JobSpec& spec) {
  validate(spec);
  return with_lanes(spec.lanes, [&](auto lanes) { return compare<decltype(lanes)::value>(spec); });
}

int cmd_ct_check(const JobSpec& spec, std::ostream& out) {
  validate(spec);
  const Backend backend = resolve_backend(spec.backend);
  ScopedBackend use(backend);
  print_header(out, spec, backend);
  const std::size_t s = spec.exponent_bits.value_or(spec.size_bits);
  out << "window: " << spec.window.value_or(default_window(spec.size_bits)) << "  exponent bits: " << s
      << "\n";
  out << "schedule: " << (spec.negative_control ? "leaky (negative control)" : "constant-time") << "\n";

  const TraceComparison cmp = compare_exp_traces(spec);
  print_trace(out, "zero windows", cmp.counters_a, cmp.digest_a, cmp.length_a);
  print_trace(out, "ones windows", cmp.counters_b, cmp.digest_b, cmp.length_b);
  if (cmp.identical()) {
    out << "result: PASS (identical operation traces)\n";
    return kExitPass;
  }
  out << "result: FAIL (traces diverge";
  if (cmp.first_divergence) {
    out << " at operation " << *cmp.first_divergence << ")\n";
    with_lanes(spec.lanes, [&](auto lanes) {
      describe_divergence<decltype(lanes)::value>(spec, *cmp.first_divergence, out);
    });
  } else {
    out << ")\n";
  }
  return kExitCheckFailed;
}

}  // namespace batchmp::cli
