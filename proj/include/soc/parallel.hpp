#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace soc {

/* Runs fn(begin,end) over [0,n) split into contiguous chunks, one worker
 * thread per chunk. Workers write to disjoint preallocated slots, so the
 * result does not depend on the thread count. */
inline void parallel_for(std::uint64_t n, int threads,
                         const std::function<void(std::uint64_t, std::uint64_t)>& fn) {
  const int nt = std::max(1, std::min<int>(threads, static_cast<int>(n ? n : 1)));
  if (nt == 1 || n < 2) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  const std::uint64_t chunk = (n + nt - 1) / nt;
  for (int t = 0; t < nt; ++t) {
    const std::uint64_t b = chunk * t;
    const std::uint64_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& th : pool) th.join();
}

inline int hardware_threads() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

}  // namespace soc
