#include "failsim/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace failsim
{

std::size_t resolve_thread_count(std::size_t requested)
{
    if (requested > 0)
        return requested;
    if (const char* env = std::getenv("FAILSIM_THREADS"))
    {
        try
        {
            const long value = std::stol(env);
            if (value > 0)
                return static_cast<std::size_t>(value);
        }
        catch (const std::exception&)
        {
            // unparsable value: fall through to the hardware default
        }
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body)
{
    if (count == 0)
        return;
    threads = std::min(std::max<std::size_t>(threads, 1), count);
    if (threads == 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed))
        {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count)
                return;
            try
            {
                body(i);
            }
            catch (...)
            {
                std::lock_guard lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                failed = true;
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(threads - 1);
    for (std::size_t w = 1; w < threads; ++w)
        pool.emplace_back(worker);
    worker();
    pool.clear();

    if (first_error)
        std::rethrow_exception(first_error);
}

} // namespace failsim
