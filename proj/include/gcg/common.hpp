#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace gcg {

// Error taxonomy. The CLI maps these onto process exit codes, so every
// throw site should pick the category deliberately.
struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnsupportedConfig : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResourceLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Runs fn(i) for i in [0, count). Work is chunked contiguously so results
// written to preallocated slots are independent of thread count.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                         unsigned max_threads = 0) {
  if (count == 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (max_threads == 0) max_threads = hw;
  unsigned nthreads = static_cast<unsigned>(std::min<std::size_t>(max_threads, count));
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(nthreads);
  std::size_t chunk = (count + nthreads - 1) / nthreads;
  for (unsigned t = 0; t < nthreads; ++t) {
    std::size_t lo = static_cast<std::size_t>(t) * chunk;
    std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    workers.emplace_back([&fn, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& w : workers) w.join();
}

// FNV-1a, used for config hashes embedded in output files.
inline std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string to_hex_float(double v);
double from_hex_float(const std::string& s);
std::string format_double(double v);  // shortest round-trip decimal

}  // namespace gcg
