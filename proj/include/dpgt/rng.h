// Copyright 2026 The DPGT Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPGT_RNG_H_
#define DPGT_RNG_H_

#include <cmath>
#include <cstdint>
#include <limits>

namespace dpgt {

// Stream roles, part of every noise key.
enum class Role : uint64_t {
  kZeta = 1,
  kEta = 2,
  kSample = 3,
  kInit = 4,
  kData = 5,
  kMisc = 6,
};

inline uint64_t SplitMix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t HashKey(uint64_t seed, uint64_t agent, uint64_t k, Role role) {
  uint64_t h = SplitMix64(seed);
  h = SplitMix64(h ^ agent);
  h = SplitMix64(h ^ k);
  return SplitMix64(h ^ static_cast<uint64_t>(role));
}

// Counter-based generator: draw c of the stream keyed (seed, agent, k, role)
// is a pure function of the key and c, so results never depend on the order
// in which agents or iterations are evaluated. Satisfies
// UniformRandomBitGenerator.
class KeyedStream {
 public:
  using result_type = uint64_t;

  KeyedStream(uint64_t seed, uint64_t agent, uint64_t k, Role role)
      : key_(HashKey(seed, agent, k, role)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return SplitMix64(key_ + 0x632be59bd9b4e019ULL * ++counter_); }

  // Uniform on the open interval (0, 1).
  double Uniform() { return ((*this)() >> 11) * 0x1.0p-53 + 0x1.0p-54; }

  // Laplace(0, b): density exp(-|x|/b)/(2b). b == 0 yields exactly 0.
  double Laplace(double b) {
    const double u = Uniform() - 0.5;
    if (b == 0.0) return 0.0;
    return -b * std::copysign(1.0, u) * std::log1p(-2.0 * std::abs(u));
  }

  // Uniform integer in [0, bound).
  uint64_t Below(uint64_t bound) {
    // Lemire's multiply-shift with rejection for exact uniformity.
    uint64_t x = (*this)();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    uint64_t low = static_cast<uint64_t>(m);
    if (low < bound) {
      const uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        x = (*this)();
        m = static_cast<__uint128_t>(x) * bound;
        low = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace dpgt

#endif  // DPGT_RNG_H_
