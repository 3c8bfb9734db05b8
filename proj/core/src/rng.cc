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

#include "ludeq/rng.h"

#include <limits>
#include <stdexcept>

namespace ludeq {

std::uint64_t Rng::UniformBelow(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("UniformBelow(0)");
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  // Largest multiple of bound representable, expressed as a threshold.
  const std::uint64_t excess = (kMax % bound + 1) % bound;
  const std::uint64_t limit = kMax - excess;
  std::uint64_t draw;
  do {
    draw = engine_();
  } while (excess != 0 && draw > limit);
  return draw % bound;
}

}  // namespace ludeq
