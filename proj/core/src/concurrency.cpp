#include "vidctx/concurrency.hpp"

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace vidctx {

void parallel_for(std::size_t count, int limit,
                  const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;

    std::size_t workers = limit < 1 ? 1 : static_cast<std::size_t>(limit);
    workers = std::min(workers, count);

    std::vector<std::exception_ptr> errors(count);

    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
                break;  // lowest-index error wins; later work is moot
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&]() {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= count) return;
                    try {
                        fn(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    for (const auto& error : errors) {
        if (error) std::rethrow_exception(error);
    }
}

}  // namespace vidctx
