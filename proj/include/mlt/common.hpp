#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mlt {

// Raised for problems in user-supplied inputs (paths, file contents, config
// values). The CLI maps this to exit code 2; everything else is exit 1.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::uint64_t fnv1a64(const void* data, std::size_t n,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; i++) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::string& s,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
  return fnv1a64(s.data(), s.size(), h);
}

template <class T>
std::uint64_t fnv1a64_values(const T* data, std::size_t n,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
  return fnv1a64(data, n * sizeof(T), h);
}

std::string hex64(std::uint64_t v);

}  // namespace mlt
