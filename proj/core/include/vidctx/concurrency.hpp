#pragma once

#include <cstddef>
#include <functional>

namespace vidctx {

// Runs fn(i) for every i in [0, count) on at most `limit` worker threads and
// blocks until all complete. limit <= 1 runs inline. If any invocation throws,
// the exception with the lowest index is rethrown after all workers finish.
void parallel_for(std::size_t count, int limit,
                  const std::function<void(std::size_t)>& fn);

}  // namespace vidctx
