#include "normkam/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace normkam {

namespace {

int initial_count()
{
    if (const char* env = std::getenv("NORMKAM_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) {
                return n;
            }
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::atomic<int>& count()
{
    static std::atomic<int> c{initial_count()};
    return c;
}

}  // namespace

int thread_count() { return count().load(); }

void set_thread_count(int n) { count().store(std::max(1, n)); }

}  // namespace normkam
