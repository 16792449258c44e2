#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace vdp {

/// Chunked parallel loop over [0, count). The body receives the index; any
/// cross-iteration state must be index-addressed so results do not depend on
/// the thread schedule.
inline void parallel_for(uint64_t count, const std::function<void(uint64_t)>& body,
                         unsigned max_threads = 0) {
  unsigned hw = max_threads ? max_threads : std::thread::hardware_concurrency();
  if (hw == 0) hw = 4;
  if (count < 2 || hw == 1) {
    for (uint64_t i = 0; i < count; i++) body(i);
    return;
  }
  const unsigned workers = static_cast<unsigned>(std::min<uint64_t>(hw, count));
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; w++) {
    threads.emplace_back([&, w] {
      for (uint64_t i = w; i < count; i += workers) body(i);
    });
  }
  for (auto& t : threads) t.join();
}

}  // namespace vdp
