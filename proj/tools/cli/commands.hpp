// SPDX-License-Identifier: Apache-2.0

#ifndef BATCHMP_CLI_COMMANDS_HPP
#define BATCHMP_CLI_COMMANDS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "batchmp/instrumentation.hpp"
#include "job.hpp"

namespace batchmp::cli {

// Each command writes a text report to `out` and returns an exit status:
// kExitPass, kExitCheckFailed, or kExitUsage. Library errors raised by bad
// input propagate as exceptions; run_cli maps them to kExitUsage.

int cmd_verify(const JobSpec& spec, std::ostream& out);
int cmd_counts(const JobSpec& spec, std::ostream& out);
int cmd_ct_check(const JobSpec& spec, std::ostream& out);
int cmd_exp(const JobSpec& spec, std::ostream& out);
/// As above, with the cross-check summary sent to `diag` so that `out`
/// carries only result lines.
int cmd_exp(const JobSpec& spec, std::ostream& out, std::ostream& diag);
int cmd_bench(const JobSpec& spec, std::ostream& out);

/// Outcome of one trace comparison between two exponent batches.
struct TraceComparison {
  OpCounters counters_a;
  OpCounters counters_b;
  std::uint64_t digest_a = 0;
  std::uint64_t digest_b = 0;
  std::uint64_t length_a = 0;
  std::uint64_t length_b = 0;
  std::optional<std::uint64_t> first_divergence;  // operation index

  [[nodiscard]] bool identical() const noexcept {
    return counters_a == counters_b && digest_a == digest_b && length_a == length_b;
  }
};

/// Runs the all-zero and all-ones exponent batches of `spec` and compares
/// their operation traces.
TraceComparison compare_exp_traces(const JobSpec& spec);

/// Parses argv with CLI11 and dispatches. Never throws.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace batchmp::cli

#endif  // BATCHMP_CLI_COMMANDS_HPP
