// SPDX-License-Identifier: Apache-2.0

#ifndef BATCHMP_CLI_JOB_HPP
#define BATCHMP_CLI_JOB_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "batchmp/lane.hpp"
#include "batchmp/montgomery.hpp"

namespace batchmp::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

enum class BackendChoice : std::uint8_t { automatic, portable, ifma };

/// Everything a subcommand needs, filled from the command line.
struct JobSpec {
  std::string command;
  std::size_t size_bits = 1024;
  Flavor flavor = Flavor::schoolbook;
  bool truncated = false;
  unsigned lanes = 8;
  std::optional<unsigned> window;
  std::uint64_t trials = 100;
  std::uint64_t seed = 1;
  BackendChoice backend = BackendChoice::automatic;

  // ct-check
  std::optional<std::size_t> exponent_bits;
  bool negative_control = false;

  // exp
  std::string input_path;
  std::string output_path;
  bool cross_check = false;
  bool size_given = false;

  // bench
  std::string bench_op = "mul";
  std::uint64_t datasets = 5;
  std::uint64_t warmup = 2;
};

/// Sizes accepted by verify and counts besides the modulus sizes.
inline constexpr std::size_t kRawSizes[] = {260, 520, 1040, 2080, 4108, 518, 1038, 2078, 4154};

bool is_modulus_size(std::size_t bits) noexcept;
bool is_raw_size(std::size_t bits) noexcept;

/// Rejects inconsistent combinations up front; throws ConfigError.
void validate(const JobSpec& spec);

/// Resolves `automatic` to the accelerated backend when available.
Backend resolve_backend(BackendChoice choice);

/// Random generator shared by every command, named in report headers.
inline constexpr const char* kRngName = "mt19937_64";

}  // namespace batchmp::cli

#endif  // BATCHMP_CLI_JOB_HPP
