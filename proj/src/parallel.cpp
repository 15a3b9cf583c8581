#include "declab/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace declab {

int thread_count() {
  const char* env = std::getenv("DECLAB_THREADS");
  if (!env || !*env) return 1;
  try {
    return std::clamp(std::stoi(env), 1, 256);
  } catch (...) {
    return 1;
  }
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body) {
  const int t = static_cast<int>(std::min<std::int64_t>(thread_count(), std::max<std::int64_t>(n, 1)));
  if (t <= 1) {
    for (std::int64_t k = 0; k < n; ++k) body(k);
    return;
  }
  std::vector<std::exception_ptr> errors(t);
  std::vector<std::thread> pool;
  for (int w = 0; w < t; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::int64_t k = w; k < n; k += t) body(k);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace declab
