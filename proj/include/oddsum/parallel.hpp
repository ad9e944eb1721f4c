#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace oddsum {

inline constexpr const char* kWorkersEnv = "ODDSUM_WORKERS";

/// Worker count: an explicit hint wins, then ODDSUM_WORKERS, then 1.
inline unsigned resolve_workers(unsigned hint = 0) {
  if (hint > 0) return hint;
  if (const char* env = std::getenv(kWorkersEnv)) {
    try {
      int v = std::stoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return 1;
}

/// Splits [0, n) into fixed chunks (independent of the worker count) and
/// returns one partial result per chunk, in chunk order. Callers reduce the
/// vector sequentially, so exact results are identical for any worker count.
template <typename T, typename Fn>
std::vector<T> parallel_chunks(std::size_t n, unsigned workers, Fn&& fn,
                               std::size_t chunks_hint = 64) {
  std::size_t chunks = std::max<std::size_t>(1, std::min(n, chunks_hint));
  std::vector<T> out(chunks);
  if (n == 0) return out;
  auto bounds = [&](std::size_t c) { return std::pair{c * n / chunks, (c + 1) * n / chunks}; };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(chunks)));
  if (workers == 1) {
    for (std::size_t c = 0; c < chunks; ++c) {
      auto [b, e] = bounds(c);
      out[c] = fn(b, e);
    }
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t c = w; c < chunks; c += workers) {
          auto [b, e] = bounds(c);
          out[c] = fn(b, e);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace oddsum
