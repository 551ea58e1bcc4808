#include "odl/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace odl {

long thread_budget() {
    if (const char* env = std::getenv("ODL_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return v;
        return 1;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<long>(hw) : 1;
}

void parallel_for(long n, const std::function<void(long)>& fn) {
    if (n <= 0) return;
    const long workers = std::min(thread_budget(), n);
    if (workers == 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }

    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (long w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (long i = w; i < n; i += workers) {
                try {
                    fn(i);
                } catch (...) {
                    errors[static_cast<std::size_t>(i)] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace odl
