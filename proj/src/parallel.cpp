#include "qex/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace qex {

int default_workers() {
  const char* env = std::getenv("QEX_WORKERS");
  if (!env) return 1;
  try {
    return std::clamp(std::stoi(env), 1, 256);
  } catch (const std::exception&) {
    return 1;
  }
}

void parallel_for(std::uint64_t n, int workers,
                  const std::function<void(std::uint64_t, std::uint64_t, int)>& body) {
  workers = std::max(1, workers);
  if (workers == 1 || n < 2) {
    body(0, n, 0);
    return;
  }
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::uint64_t b = std::min<std::uint64_t>(n, chunk * w);
    const std::uint64_t e = std::min<std::uint64_t>(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back(body, b, e, w);
  }
  for (auto& t : pool) t.join();
}

}  // namespace qex
