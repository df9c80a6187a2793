#include "piml/threads.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace piml {

namespace {
std::atomic<int> g_limit{0};  // 0 = not yet resolved

int resolve_default() {
  int hw = int(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv("PIML_THREADS")) {
    int v = std::atoi(env);
    if (v > 0 && v < hw) hw = v;
  }
  return hw;
}
}  // namespace

int thread_limit() {
  int v = g_limit.load(std::memory_order_relaxed);
  if (v > 0) return v;
  v = resolve_default();
  g_limit.store(v, std::memory_order_relaxed);
  return v;
}

void set_thread_limit(int n) {
  g_limit.store(n > 0 ? n : resolve_default(), std::memory_order_relaxed);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(std::size_t(thread_limit()), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto body = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace piml
