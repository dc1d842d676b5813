#pragma once

#include <cstdint>
#include <string_view>

namespace fraclab {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a over the bytes of `text`.
constexpr std::uint64_t hash_text(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seed for a named sub-computation of a run with master seed `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view name) {
  return mix64(master ^ mix64(hash_text(name)));
}

/// Counter-based random numbers: the value for (index, slot) is a pure
/// function of (seed, stream, index, slot), so any partition of sample
/// indices over workers draws the same numbers.
class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL)) {}

  constexpr std::uint64_t bits(std::uint64_t index, std::uint32_t slot) const {
    return mix64(key_ ^ mix64(index * 0x9e3779b97f4a7c15ULL + slot));
  }

  /// Uniform in [0, 1).
  constexpr double uniform(std::uint64_t index, std::uint32_t slot) const {
    return static_cast<double>(bits(index, slot) >> 11) * 0x1.0p-53;
  }

  /// Uniform in (0, 1].
  constexpr double uniform_open0(std::uint64_t index, std::uint32_t slot) const {
    return static_cast<double>((bits(index, slot) >> 11) + 1) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
};

}  // namespace fraclab
