// Copyright 2026 The qconformal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QCONFORMAL_RNG_H_
#define QCONFORMAL_RNG_H_

#include <array>
#include <cstdint>
#include <limits>

namespace qconformal {

// Seed derivation and random streams.
//
// Everything random in the pipeline is a pure function of 64-bit seeds:
//   * splitmix64 derives child seeds (per sample, per basis, per tree);
//   * xoshiro256** produces the stream consumed by one generator call.
// Both algorithms are fully specified here, so a dataset can be rebuilt
// bit-for-bit from its manifest in any language.

// Advances `state` by the golden-ratio increment and returns the mixed value.
std::uint64_t splitmix64_next(std::uint64_t& state);

// Child seed number `index` of `parent`: element index+1 of the splitmix64
// sequence started at `parent`.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index);

class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  // State words are the first four splitmix64 outputs from `seed`.
  explicit Xoshiro256(std::uint64_t seed);

  result_type operator()();

  // Uniform double in [0, 1) built from the top 53 bits.
  double uniform();

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

 private:
  std::array<std::uint64_t, 4> s_;
};

}  // namespace qconformal

#endif  // QCONFORMAL_RNG_H_
