// SPDX-License-Identifier: Apache-2.0

#include "batchmp/lane.hpp"

#include "batchmp/errors.hpp"

#include <string>

namespace batchmp {

std::string_view backend_name(Backend backend) noexcept {
  switch (backend) {
    case Backend::portable:
      return "portable";
    case Backend::ifma:
      return "ifma";
  }
  return "unknown";
}

bool backend_available(Backend backend) noexcept {
  switch (backend) {
    case Backend::portable:
      return true;
    case Backend::ifma:
#if defined(BATCHMP_HAVE_IFMA)
      __builtin_cpu_init();
      return __builtin_cpu_supports("avx512f") && __builtin_cpu_supports("avx512ifma") &&
             __builtin_cpu_supports("avx512vl");
#else
      return false;
#endif
  }
  return false;
}

ScopedBackend::ScopedBackend(Backend backend) : previous_(detail::tl_backend) {
  if (!backend_available(backend)) {
    throw ConfigError("lane backend '" + std::string(backend_name(backend)) +
                      "' is not available on this build or CPU");
  }
  detail::tl_backend = backend;
}

}  // namespace batchmp
