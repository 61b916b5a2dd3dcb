#include "spca/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace spca {

int worker_count() {
  static const int count = [] {
    if (const char* env = std::getenv("SPCA_THREADS")) {
      const long v = std::strtol(env, nullptr, 10);
      if (v >= 1) return static_cast<int>(std::min(v, 256L));
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
  }();
  return count;
}

void parallel_for(int n, const std::function<void(int, int)>& body,
                  std::size_t work_per_item) {
  if (n <= 0) return;
  const int workers = worker_count();
  const std::size_t total_work = static_cast<std::size_t>(n) * work_per_item;
  constexpr std::size_t kSerialThreshold = 1 << 15;
  if (workers == 1 || n == 1 || total_work < kSerialThreshold) {
    body(0, n);
    return;
  }
  const int chunks = std::min(workers, n);
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(chunks) - 1);
  const int base = n / chunks;
  const int extra = n % chunks;
  int begin = 0;
  for (int c = 0; c < chunks; ++c) {
    const int len = base + (c < extra ? 1 : 0);
    const int end = begin + len;
    if (c + 1 == chunks) {
      body(begin, end);
    } else {
      threads.emplace_back(body, begin, end);
    }
    begin = end;
  }
  for (auto& t : threads) t.join();
}

}  // namespace spca
