#pragma once

#include <cstdint>
#include <random>

namespace ipnet {

/// SplitMix64 step; used to hash seed material into engine seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent substream seed from a master seed and up to two
/// stream coordinates (e.g. experiment cell and trial index).  Used so that
/// parallel trial execution reproduces serial results.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t a,
                                    std::uint64_t b = 0) {
  std::uint64_t s = master;
  std::uint64_t h = splitmix64(s);
  s ^= a + 0x632be59bd9b4e019ULL;
  h ^= splitmix64(s);
  s ^= b + 0x9e3779b97f4a7c15ULL;
  h ^= splitmix64(s);
  return h;
}

/// Seedable deterministic generator.  mt19937_64 is fully specified by the
/// standard, so identical seeds give identical streams on every platform.
/// Variates are derived from raw 64-bit output rather than std distributions,
/// whose results are implementation-defined.
class rng {
 public:
  explicit rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound).  Modulo bias is negligible for the small
  /// bounds used here and keeps the mapping platform-stable.
  std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ipnet
