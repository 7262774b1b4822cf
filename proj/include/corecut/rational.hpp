// Copyright 2026 The corecut Authors
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

#ifndef CORECUT_RATIONAL_HPP
#define CORECUT_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "corecut/errors.hpp"

namespace corecut {

/// Exact rational scalar on 64-bit numerator/denominator.  Game data
/// (production matrix, endowments, valuations) is stored exactly so that
/// hand-constructed gadgets keep their intended arithmetic identities;
/// all LP solving happens in double precision.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t numerator, std::int64_t denominator) : num_(numerator), den_(denominator) {
    if (den_ == 0) throw Error("rational with zero denominator");
    normalize();
  }
  Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT: implicit by design

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// Parses "p/q", "p", or "-p/q".  Whitespace is not accepted.
  static Rational parse(const std::string& text) {
    const auto slash = text.find('/');
    try {
      if (slash == std::string::npos) {
        return Rational(parse_int(text));
      }
      const std::int64_t p = parse_int(text.substr(0, slash));
      const std::int64_t q = parse_int(text.substr(slash + 1));
      if (q == 0) throw Error("zero denominator");
      return Rational(p, q);
    } catch (const Error& e) {
      throw Error("bad rational '" + text + "': " + e.what());
    }
  }

  /// Nearest rational with the given fixed denominator; used to embed
  /// measured quantities (distances, accessibilities) into exact game data.
  static Rational round_to(double value, std::int64_t denominator) {
    const double scaled = value * static_cast<double>(denominator);
    const auto p = static_cast<std::int64_t>(scaled >= 0 ? scaled + 0.5 : scaled - 0.5);
    return Rational(p, denominator);
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_i128(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_i128(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw Error("rational division by zero");
    return from_i128(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  Rational operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return a < b || a == b; }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  static std::int64_t parse_int(const std::string& s) {
    if (s.empty()) throw Error("empty integer");
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &pos);
    } catch (const std::exception&) {
      throw Error("not an integer");
    }
    if (pos != s.size()) throw Error("trailing characters");
    return v;
  }

  static Rational from_i128(__int128 p, __int128 q) {
    if (q < 0) {
      p = -p;
      q = -q;
    }
    const __int128 g = gcd128(p < 0 ? -p : p, q);
    if (g > 1) {
      p /= g;
      q /= g;
    }
    constexpr __int128 lo = INT64_MIN, hi = INT64_MAX;
    if (p < lo || p > hi || q > hi) throw Error("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(p);
    r.den_ = static_cast<std::int64_t>(q);
    return r;
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace corecut

#endif  // CORECUT_RATIONAL_HPP
