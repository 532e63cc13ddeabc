#pragma once

#include <cstdint>

namespace virtperm {

// Counter-based splittable generator built on the splitmix64 finalizer.
//
// A stream is identified by a 64-bit key; draw number i of a stream is
// mix(key + GAMMA * i).  Consuming a stream never affects its children, and
// split() can be called at any time on a const generator, so derived
// substreams are independent of evaluation order and of how work is divided
// across threads.  Statistical quality is that of splitmix64, which is ample
// for Monte Carlo use here.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : key_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t next_u64() { return mix(key_ + kGamma * ++counter_); }

  // 53-bit uniform in [0,1).
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in {0,...,bound-1} via the fast-range mapping (bias < bound/2^64).
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

  // Child stream for a purpose or index; does not depend on how much of this
  // stream has been consumed.
  SplitRng split(std::uint64_t stream) const {
    return SplitRng(mix(key_ + kGamma * mix(stream + kSalt)));
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
  static constexpr std::uint64_t kSalt = 0xD1B54A32D192ED03ull;
};

}  // namespace virtperm
