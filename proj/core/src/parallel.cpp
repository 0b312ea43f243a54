#include "spl/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <thread>
#include <vector>

namespace spl {

namespace {

std::atomic<int> g_thread_override{0};

int default_threads() {
  if (const char* env = std::getenv("SPL_THREADS")) {
    int value = 0;
    const char* end = env + std::strlen(env);
    const auto [ptr, ec] = std::from_chars(env, end, value);
    if (ec == std::errc() && ptr == end && value > 0) return value;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

int max_threads() {
  const int forced = g_thread_override.load(std::memory_order_relaxed);
  if (forced > 0) return forced;
  static const int fallback = default_threads();
  return fallback;
}

void set_max_threads(int n) { g_thread_override.store(std::max(n, 0), std::memory_order_relaxed); }

void parallel_for(std::size_t n, std::size_t min_items_per_thread,
                  const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  const std::size_t grain = std::max<std::size_t>(min_items_per_thread, 1);
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(max_threads()), (n + grain - 1) / grain);
  if (workers <= 1) {
    body(0, n);
    return;
  }

  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  threads.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&, w, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  try {
    body(0, std::min(n, chunk));
  } catch (...) {
    errors[0] = std::current_exception();
  }
  for (auto& t : threads) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace spl
