#include "trapsnet/threads.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace trapsnet {

void run_units(int count, int threads, const std::function<void(int)>& unit) {
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) unit(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        int i;
        while ((i = next.fetch_add(1)) < count) {
            try {
                unit(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    int n = std::min(threads, count);
    pool.reserve(n);
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace trapsnet
