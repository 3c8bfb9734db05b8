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

#include "ludeq/probability.h"

#include <charconv>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ludeq {
namespace {

using u128 = unsigned __int128;

std::uint64_t Narrow(u128 value) {
  if (value > std::numeric_limits<std::uint64_t>::max()) {
    throw std::overflow_error("probability arithmetic overflows 64 bits");
  }
  return static_cast<std::uint64_t>(value);
}

u128 Gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Probability FromWide(u128 num, u128 den) {
  u128 g = Gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Probability(Narrow(num), Narrow(den));
}

std::uint64_t ParseUnsigned(std::string_view text) {
  std::uint64_t value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw std::invalid_argument("malformed probability component '" +
                                std::string(text) + "'");
  }
  return value;
}

}  // namespace

Probability::Probability(std::uint64_t numerator, std::uint64_t denominator)
    : num_(numerator), den_(denominator) {
  if (den_ == 0) throw std::invalid_argument("zero denominator");
  std::uint64_t g = std::gcd(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
  if (num_ == 0) den_ = 1;
}

Probability Probability::Parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  std::size_t slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Probability(ParseUnsigned(text), 1);
  }
  return Probability(ParseUnsigned(trim(text.substr(0, slash))),
                     ParseUnsigned(trim(text.substr(slash + 1))));
}

std::string Probability::ToString() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Probability Probability::operator+(const Probability& other) const {
  u128 g = std::gcd(den_, other.den_);
  u128 lhs_scale = other.den_ / g;
  u128 rhs_scale = den_ / g;
  return FromWide(u128(num_) * lhs_scale + u128(other.num_) * rhs_scale,
                  u128(den_) * lhs_scale);
}

Probability Probability::operator-(const Probability& other) const {
  if (*this < other) throw std::domain_error("negative probability");
  u128 g = std::gcd(den_, other.den_);
  u128 lhs_scale = other.den_ / g;
  u128 rhs_scale = den_ / g;
  return FromWide(u128(num_) * lhs_scale - u128(other.num_) * rhs_scale,
                  u128(den_) * lhs_scale);
}

Probability Probability::operator*(const Probability& other) const {
  return FromWide(u128(num_) * other.num_, u128(den_) * other.den_);
}

std::strong_ordering Probability::operator<=>(const Probability& other) const {
  return u128(num_) * other.den_ <=> u128(other.num_) * den_;
}

std::ostream& operator<<(std::ostream& os, const Probability& p) {
  return os << p.ToString();
}

}  // namespace ludeq
