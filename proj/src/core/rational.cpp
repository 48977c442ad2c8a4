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

#include "core/rational.hpp"

#include <cstdlib>
#include <numeric>

#include "core/errors.hpp"

namespace seedsmith {

namespace {

using int128 = __int128;

int64_t checked_narrow(int128 v, const char* what) {
  if (v > INT64_MAX || v < INT64_MIN) throw Error(std::string("rational overflow in ") + what);
  return static_cast<int64_t>(v);
}

int128 gcd128(int128 a, int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    int128 t = a % b;
    a = b;
    b = t;
  }
  return a == 0 ? 1 : a;
}

}  // namespace

Rational::Rational(int64_t num, int64_t den) {
  if (den == 0) throw Error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g == 0) g = 1;
  num_ = num / g;
  den_ = den / g;
}

Rational Rational::from_decimal(std::string_view text) {
  if (text.empty()) throw Error("empty decimal literal");
  bool neg = false;
  size_t i = 0;
  if (text[0] == '+' || text[0] == '-') {
    neg = text[0] == '-';
    i = 1;
  }
  int128 num = 0;
  int64_t den = 1;
  bool seen_digit = false, seen_dot = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (seen_dot) throw Error("malformed decimal literal");
      seen_dot = true;
      continue;
    }
    if (c < '0' || c > '9') throw Error("malformed decimal literal");
    seen_digit = true;
    num = num * 10 + (c - '0');
    if (seen_dot) {
      if (den > INT64_MAX / 10) throw Error("decimal literal too precise");
      den *= 10;
    }
  }
  if (!seen_digit) throw Error("malformed decimal literal");
  if (neg) num = -num;
  return Rational(checked_narrow(num, "from_decimal"), den);
}

Rational Rational::operator+(const Rational& o) const {
  int128 n = int128(num_) * o.den_ + int128(o.num_) * den_;
  int128 d = int128(den_) * o.den_;
  int128 g = gcd128(n, d);
  return Rational(checked_narrow(n / g, "add"), checked_narrow(d / g, "add"));
}

Rational Rational::operator-(const Rational& o) const {
  return *this + Rational(-o.num_, o.den_);
}

Rational Rational::operator*(const Rational& o) const {
  int128 n = int128(num_) * o.num_;
  int128 d = int128(den_) * o.den_;
  int128 g = gcd128(n, d);
  return Rational(checked_narrow(n / g, "mul"), checked_narrow(d / g, "mul"));
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num_ == 0) throw Error("rational division by zero");
  return *this * Rational(o.den_, o.num_);
}

bool Rational::operator<(const Rational& o) const {
  return int128(num_) * o.den_ < int128(o.num_) * den_;
}

std::string Rational::to_decimal(int places, Round mode) const {
  int128 scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;

  int128 n = num_;
  bool neg = n < 0;
  if (neg) n = -n;

  int128 scaled = n * scale;  // fits: |num| < 2^63, scale <= 10^18 would overflow; places <= 9 in practice
  int128 q = scaled / den_;
  int128 r = scaled % den_;
  if (mode == Round::half_even) {
    int128 twice = r * 2;
    if (twice > den_ || (twice == den_ && (q % 2) == 1)) ++q;
  }
  // trunc: drop the remainder.

  int128 whole = q / scale;
  int128 frac = q % scale;

  std::string out;
  if (neg && (whole != 0 || frac != 0)) out += '-';
  // int128 to string for the whole part
  if (whole == 0) {
    out += '0';
  } else {
    std::string w;
    int128 t = whole;
    while (t > 0) {
      w += static_cast<char>('0' + int(t % 10));
      t /= 10;
    }
    out.append(w.rbegin(), w.rend());
  }
  if (places > 0) {
    std::string f(places, '0');
    int128 t = frac;
    for (int i = places - 1; i >= 0 && t > 0; --i) {
      f[i] = static_cast<char>('0' + int(t % 10));
      t /= 10;
    }
    out += '.';
    out += f;
  }
  return out;
}

std::string Rational::to_plain_string() const {
  if (den_ == 1) return std::to_string(num_);
  // Exact finite decimal exists iff den_ = 2^a * 5^b.
  int64_t d = den_;
  int places = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++places;
  }
  int fives = 0;
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) return std::to_string(num_) + "/" + std::to_string(den_);
  if (fives > places) places = fives;
  std::string s = to_decimal(places, Round::trunc);
  // places was chosen exactly, nothing to trim except guaranteed-exactness
  return s;
}

std::string render_rounded(const Rational& value, int places) {
  std::string s = value.to_decimal(places, Rational::Round::half_even);
  if (s.find('.') != std::string::npos) {
    size_t last = s.find_last_not_of('0');
    if (s[last] == '.') last -= 1;
    s.erase(last + 1);
  }
  if (s == "-0") s = "0";
  return s;
}

}  // namespace seedsmith
