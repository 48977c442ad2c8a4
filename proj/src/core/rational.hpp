// Copyright 2026 The Seedsmith Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEEDSMITH_CORE_RATIONAL_HPP
#define SEEDSMITH_CORE_RATIONAL_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace seedsmith {

// Exact rational arithmetic for coverage percentages and efficiency metrics.
// Values like "coverage == 100%" are compared exactly; rounding happens only
// when a number is rendered for humans.
class Rational {
 public:
  enum class Round { half_even, trunc };

  Rational() : num_(0), den_(1) {}
  Rational(int64_t value) : num_(value), den_(1) {}  // NOLINT: implicit by design
  Rational(int64_t num, int64_t den);                // normalizes; den must be nonzero

  /// Parses "78.08", "-3", "0.5" into an exact value.
  static Rational from_decimal(std::string_view text);

  int64_t num() const { return num_; }
  int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool negative() const { return num_ < 0; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;  // throws Error on divide by zero

  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const;
  bool operator<=(const Rational& o) const { return *this < o || *this == o; }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator>=(const Rational& o) const { return o <= *this; }

  /// Fixed-point rendering with the requested number of decimal places.
  std::string to_decimal(int places, Round mode = Round::half_even) const;

  /// Shortest exact decimal if the denominator divides a power of ten,
  /// otherwise "num/den".
  std::string to_plain_string() const;

 private:
  int64_t num_;
  int64_t den_;  // always > 0
};

/// Renders at `places` decimals (half-even) and trims trailing zeros, so
/// 1/6 -> "0.167", 1/20 -> "0.05", 0 -> "0".
std::string render_rounded(const Rational& value, int places = 3);

}  // namespace seedsmith

#endif  // SEEDSMITH_CORE_RATIONAL_HPP
