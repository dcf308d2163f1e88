#include "steklov/util.hpp"

#include <atomic>
#include <charconv>
#include <cstdio>
#include <thread>
#include <vector>

namespace steklov {

std::uint64_t fnv1a64(const void* data, std::size_t n_bytes, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < n_bytes; ++i) {
    h ^= static_cast<std::uint64_t>(p[i]);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a64(const Eigen::VectorXd& v, std::uint64_t seed) {
  return fnv1a64(v.data(), static_cast<std::size_t>(v.size()) * sizeof(double), seed);
}

std::uint64_t fnv1a64(const Eigen::MatrixXd& m, std::uint64_t seed) {
  // Hash column by column so the result does not depend on padding/stride.
  std::uint64_t h = seed;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    h = fnv1a64(m.col(c).data(), static_cast<std::size_t>(m.rows()) * sizeof(double), h);
  }
  return h;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

std::string to_hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf);
}

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  int n_threads = workers;
  if (n_threads <= 0) n_threads = static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads <= 0) n_threads = 1;
  if (n_threads > n) n_threads = n;
  if (n_threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        const int i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace steklov
