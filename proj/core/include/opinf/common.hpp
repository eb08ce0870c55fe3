#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>

namespace opinf {

// FNV-1a 64-bit hash, used for run manifests and strategy fingerprints.
inline std::uint64_t fnv1a64(const void* data, std::size_t len,
                             std::uint64_t seed = 14695981039346656037ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::string& s,
                             std::uint64_t seed = 14695981039346656037ull) {
  return fnv1a64(s.data(), s.size(), seed);
}

// Worker-thread count: explicit request > OPINF_THREADS env var > hardware.
inline int thread_count(int requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("OPINF_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

} // namespace opinf
