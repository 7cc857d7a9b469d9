// SPDX-License-Identifier: Apache-2.0

#ifndef BATCHMP_BATCHMP_HPP
#define BATCHMP_BATCHMP_HPP

#include "batchmp/errors.hpp"
#include "batchmp/instrumentation.hpp"
#include "batchmp/karatsuba.hpp"
#include "batchmp/lane.hpp"
#include "batchmp/modexp.hpp"
#include "batchmp/montgomery.hpp"
#include "batchmp/schoolbook.hpp"
#include "batchmp/sliced_batch.hpp"

#endif  // BATCHMP_BATCHMP_HPP
