// Copyright 2026 The ludeq Authors
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

#ifndef LUDEQ_RNG_H_
#define LUDEQ_RNG_H_

#include <cstdint>
#include <random>

namespace ludeq {

// The library's only source of randomness. The sequence is fixed across
// platforms: std::mt19937_64 seeded with the 64-bit seed, and bounded draws
// by rejection on the raw 64-bit output (values at or above
// 2^64 - (2^64 mod n) are discarded, then reduced mod n). No
// std::*_distribution is used since their outputs are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t UniformBelow(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

}  // namespace ludeq

#endif  // LUDEQ_RNG_H_
