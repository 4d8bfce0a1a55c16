// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace nfsg {

// Worker count: NFSG_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
int worker_count();

// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index
// runs exactly once; callers write into slot i and reduce in index order, so
// results do not depend on the number of workers. The first exception thrown
// by any body is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace nfsg
