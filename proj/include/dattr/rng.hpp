#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace dattr {

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

// FNV-1a over raw bytes. Used for sub-seed labels and config hashing.
struct Fnv1a64 {
  std::uint64_t state = kFnvOffset;

  void update(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      state ^= p[i];
      state *= kFnvPrime;
    }
  }
  void update(std::string_view s) { update(s.data(), s.size()); }
  std::uint64_t digest() const { return state; }
};

inline std::uint64_t fnv1a64(std::string_view s) {
  Fnv1a64 h;
  h.update(s);
  return h.digest();
}

// SplitMix64. Hand-rolled so that seeded runs are reproducible across
// compilers and standard libraries; std:: distributions are not.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform in [0, n). Lemire multiply-shift; bias is < 2^-64 per draw.
  std::size_t uniform_index(std::size_t n) {
    using u128 = unsigned __int128;
    return static_cast<std::size_t>((static_cast<u128>(next_u64()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

// Named sub-seed so components (sme, svc, bootstrap) can be reproduced in
// isolation from the single run seed.
inline std::uint64_t sub_seed(std::uint64_t seed, std::string_view label) {
  SplitMix64 mix(seed ^ fnv1a64(label));
  return mix.next_u64();
}

}  // namespace dattr
