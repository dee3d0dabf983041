#include "segalis/parallel.hpp"

namespace segalis {

namespace {
std::atomic<int> g_threads{1};
}

int thread_count() noexcept { return g_threads.load(); }
void set_thread_count(int n) noexcept { g_threads = n < 1 ? 1 : n; }

}  // namespace segalis
