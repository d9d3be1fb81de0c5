// Copyright 2026 The Arena Audit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ARENA_AUDIT_CORE_RNG_HPP_
#define ARENA_AUDIT_CORE_RNG_HPP_

#include <cstdint>
#include <vector>

// Self-contained PRNG (xoshiro256++ seeded through splitmix64). The standard
// <random> distributions are implementation-defined, which would break the
// bit-exact reproducibility contract across toolchains; everything stochastic
// in this project draws from this engine instead.

namespace arena {

// splitmix64 finalizer; also used as the fixed seed-mixing function.
inline uint64_t SplitMix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministically derives an independent stream seed from (master, index).
// Used for per-trial / per-resample seeding so that results do not depend on
// execution order or parallelism.
inline uint64_t DeriveSeed(uint64_t master, uint64_t index) {
  uint64_t state = master ^ (0xd1b54a32d192ed03ull * (index + 1));
  return SplitMix64(state);
}

inline uint64_t DeriveSeed(uint64_t master, uint64_t a, uint64_t b) {
  return DeriveSeed(DeriveSeed(master, a), b);
}

class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& word : state_) word = SplitMix64(sm);
  }

  uint64_t NextU64() {
    const uint64_t result = Rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = Rotl(state_[3], 45);
    return result;
  }

  // Uniform double in [0, 1) with 53 bits of precision.
  double NextDouble() { return (NextU64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). Unbiased (Lemire's method).
  uint64_t NextIndex(uint64_t n) {
    using U128 = unsigned __int128;
    uint64_t x = NextU64();
    U128 m = static_cast<U128>(x) * static_cast<U128>(n);
    uint64_t low = static_cast<uint64_t>(m);
    if (low < n) {
      uint64_t threshold = -n % n;
      while (low < threshold) {
        x = NextU64();
        m = static_cast<U128>(x) * static_cast<U128>(n);
        low = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  bool NextBernoulli(double p) { return NextDouble() < p; }

  // Partial Fisher-Yates: a uniformly random size-m subset of {0, ..., n-1},
  // returned in ascending order.
  std::vector<size_t> SampleIndices(size_t n, size_t m);

 private:
  static uint64_t Rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  uint64_t state_[4];
};

}  // namespace arena

#endif  // ARENA_AUDIT_CORE_RNG_HPP_
