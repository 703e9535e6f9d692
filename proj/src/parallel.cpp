#include "rcfpi/parallel.hpp"

#include <cstdlib>
#include <mutex>

namespace rcfpi {

int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("IDV_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1 && cap < n) n = cap;
  }
  return n;
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& f) {
  if (n <= 0) return;
  const int workers = static_cast<int>(std::min<std::int64_t>(worker_count(), n));
  if (workers == 1) {
    for (std::int64_t i = 0; i < n; ++i) f(i);
    return;
  }

  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) threads.emplace_back(body);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace rcfpi
