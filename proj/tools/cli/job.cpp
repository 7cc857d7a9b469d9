// SPDX-License-Identifier: Apache-2.0

#include "job.hpp"

#include <algorithm>
#include <iterator>
#include <string>

#include "batchmp/errors.hpp"
#include "batchmp/karatsuba.hpp"

namespace batchmp::cli {

bool is_modulus_size(std::size_t bits) noexcept {
  return std::find(std::begin(kModulusSizes), std::end(kModulusSizes), bits) != std::end(kModulusSizes);
}

bool is_raw_size(std::size_t bits) noexcept {
  return std::find(std::begin(kRawSizes), std::end(kRawSizes), bits) != std::end(kRawSizes);
}

namespace {

bool is_karatsuba_size(std::size_t bits) noexcept {
  return std::find(std::begin(kKaratsubaSizes), std::end(kKaratsubaSizes), bits) !=
         std::end(kKaratsubaSizes);
}

}  // namespace

void validate(const JobSpec& spec) {
  if (spec.lanes != 4 && spec.lanes != 8) {
    throw ConfigError("--lanes must be 4 or 8, got " + std::to_string(spec.lanes));
  }
  if (spec.window && (*spec.window < 1 || *spec.window > 5)) {
    throw ConfigError("--window must be in [1, 5], got " + std::to_string(*spec.window));
  }
  const bool multiply_only = spec.command == "verify" || spec.command == "counts" ||
                             (spec.command == "bench" && (spec.bench_op == "mul" || spec.bench_op == "square"));
  const bool size_required = spec.command != "exp" || spec.size_given;
  if (size_required) {
    if (multiply_only) {
      if (!is_modulus_size(spec.size_bits) && !is_raw_size(spec.size_bits)) {
        throw ConfigError("unsupported size " + std::to_string(spec.size_bits) +
                          " (moduli: 1024, 2048, 4096; products: 260, 520, 1040, 2080, 4108, "
                          "518, 1038, 2078, 4154)");
      }
    } else if (!is_modulus_size(spec.size_bits)) {
      throw ConfigError("unsupported modulus size " + std::to_string(spec.size_bits) +
                        " (supported: 1024, 2048, 4096)");
    }
  }
  if (spec.flavor == Flavor::karatsuba && size_required && !is_modulus_size(spec.size_bits) &&
      !is_karatsuba_size(spec.size_bits)) {
    throw ConfigError("no Karatsuba variant at " + std::to_string(spec.size_bits) +
                      " bits (supported: 518, 1038, 2078, 4154 and the modulus sizes)");
  }
  if (spec.flavor == Flavor::karatsuba && spec.truncated && size_required && spec.size_bits == 1024) {
    throw ConfigError("truncated Karatsuba reduction is not available for 1024-bit moduli");
  }
  if (spec.command == "exp" && spec.input_path.empty()) throw ConfigError("exp needs --input");
  if (spec.command == "bench" && spec.bench_op != "mul" && spec.bench_op != "square" &&
      spec.bench_op != "mont" && spec.bench_op != "exp") {
    throw ConfigError("unknown bench operation '" + spec.bench_op + "' (mul, square, mont, exp)");
  }
  if (spec.exponent_bits && *spec.exponent_bits == 0) throw ConfigError("--exp-bits must be positive");
}

Backend resolve_backend(BackendChoice choice) {
  switch (choice) {
    case BackendChoice::portable:
      return Backend::portable;
    case BackendChoice::ifma:
      if (!backend_available(Backend::ifma)) {
        throw ConfigError("the ifma backend is not available on this build or CPU");
      }
      return Backend::ifma;
    case BackendChoice::automatic:
      break;
  }
  return backend_available(Backend::ifma) ? Backend::ifma : Backend::portable;
}

}  // namespace batchmp::cli
