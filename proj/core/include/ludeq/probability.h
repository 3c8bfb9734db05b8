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

#ifndef LUDEQ_PROBABILITY_H_
#define LUDEQ_PROBABILITY_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace ludeq {

// An exact non-negative rational, always held in lowest terms. Arithmetic
// that would overflow 64-bit numerators or denominators throws
// std::overflow_error rather than rounding.
class Probability {
 public:
  constexpr Probability() : num_(0), den_(1) {}
  Probability(std::uint64_t numerator, std::uint64_t denominator);

  static Probability One() { return Probability(1, 1); }
  static Probability Zero() { return Probability(); }

  // Parses "n/d" or "n". Throws std::invalid_argument on malformed text or a
  // zero denominator.
  static Probability Parse(std::string_view text);

  std::uint64_t numerator() const { return num_; }
  std::uint64_t denominator() const { return den_; }

  bool IsZero() const { return num_ == 0; }
  bool IsOne() const { return num_ == den_; }
  // True for values in (0, 1].
  bool IsValidMass() const { return num_ > 0 && num_ <= den_; }

  std::string ToString() const;

  Probability operator+(const Probability& other) const;
  Probability operator-(const Probability& other) const;
  Probability operator*(const Probability& other) const;
  Probability& operator+=(const Probability& other) {
    return *this = *this + other;
  }
  Probability& operator*=(const Probability& other) {
    return *this = *this * other;
  }

  bool operator==(const Probability& other) const = default;
  std::strong_ordering operator<=>(const Probability& other) const;

 private:
  std::uint64_t num_;
  std::uint64_t den_;
};

std::ostream& operator<<(std::ostream& os, const Probability& p);

}  // namespace ludeq

template <>
struct std::hash<ludeq::Probability> {
  std::size_t operator()(const ludeq::Probability& p) const noexcept {
    return std::hash<std::uint64_t>()(p.numerator() * 0x9e3779b97f4a7c15ULL ^
                                      p.denominator());
  }
};

#endif  // LUDEQ_PROBABILITY_H_
