// Copyright 2026 The PlusDC Authors.
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

#ifndef PLUSDC_CORE_RNG_H_
#define PLUSDC_CORE_RNG_H_

#include <array>
#include <cstdint>
#include <limits>

namespace plusdc {

// Philox4x64-10 counter-based generator (Salmon et al., SC'11).
//
// The key is (seed, stream); the 256-bit counter starts at zero and is
// incremented once per 4-word block. Independent sub-streams for parallel
// work are obtained with Substream(i), which keeps the seed and replaces the
// stream word by a mix of the parent stream and i, so a replicate's draws do
// not depend on how many workers exist or the order in which they run.
class Philox {
 public:
  using result_type = std::uint64_t;
  static constexpr const char* kName = "philox4x64-10";

  explicit Philox(std::uint64_t seed = 0, std::uint64_t stream = 0)
      : key_{seed, stream} {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  // Raw block function, exposed for known-answer tests.
  static std::array<std::uint64_t, 4> Block(
      const std::array<std::uint64_t, 4>& counter,
      const std::array<std::uint64_t, 2>& key);

  Philox Substream(std::uint64_t index) const;

  std::uint64_t seed() const { return key_[0]; }
  std::uint64_t stream() const { return key_[1]; }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  // Uniform integer on [0, bound), bound > 0 (Lemire's nearly divisionless).
  std::uint64_t UniformInt(std::uint64_t bound);
  // Standard normal via Box-Muller; the second variate is cached.
  double Normal();

 private:
  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> counter_{0, 0, 0, 0};
  std::array<std::uint64_t, 4> buffer_{};
  int buffered_ = 0;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

// Deterministic seed mixing (SplitMix64 finalizer).
std::uint64_t MixSeed(std::uint64_t a, std::uint64_t b);

}  // namespace plusdc

#endif  // PLUSDC_CORE_RNG_H_
