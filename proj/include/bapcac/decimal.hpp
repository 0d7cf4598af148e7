// Copyright 2026 The bapcac Authors
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

#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "bapcac/errors.hpp"

namespace bapcac {

namespace detail {

constexpr std::int64_t pow10(int digits) {
  std::int64_t p = 1;
  for (int k = 0; k < digits; ++k) p *= 10;
  return p;
}

}  // namespace detail

/// Exact fixed-point decimal with `Digits` fractional digits, stored as a
/// scaled 64-bit integer. All model arithmetic goes through this type so
/// that equalities such as the coverage balance hold exactly.
template <int Digits>
class FixedDecimal {
 public:
  static constexpr int kDigits = Digits;
  static constexpr std::int64_t kScale = detail::pow10(Digits);

  constexpr FixedDecimal() = default;

  static constexpr FixedDecimal from_raw(std::int64_t raw) {
    FixedDecimal d;
    d.raw_ = raw;
    return d;
  }
  static constexpr FixedDecimal from_int(std::int64_t v) {
    return from_raw(v * kScale);
  }

  /// Parses "12", "-0.5", "3.125". More than `Digits` fractional digits,
  /// exponents, or stray characters are rejected.
  static FixedDecimal parse(std::string_view text) {
    if (text.empty()) throw InputError("empty decimal");
    std::size_t pos = 0;
    bool negative = false;
    if (text[0] == '-' || text[0] == '+') {
      negative = text[0] == '-';
      pos = 1;
    }
    std::int64_t whole = 0;
    int whole_digits = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (whole > (std::numeric_limits<std::int64_t>::max() / kScale) / 10) {
        throw InputError("decimal out of range: " + std::string(text));
      }
      whole = whole * 10 + (text[pos] - '0');
      ++whole_digits;
      ++pos;
    }
    std::int64_t frac = 0;
    int frac_digits = 0;
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
        if (frac_digits == Digits) {
          throw InputError("decimal has more than " + std::to_string(Digits) +
                           " fractional digits: " + std::string(text));
        }
        frac = frac * 10 + (text[pos] - '0');
        ++frac_digits;
        ++pos;
      }
    }
    if (pos != text.size() || whole_digits + frac_digits == 0) {
      throw InputError("not a decimal: " + std::string(text));
    }
    for (int k = frac_digits; k < Digits; ++k) frac *= 10;
    const std::int64_t raw = whole * kScale + frac;
    return from_raw(negative ? -raw : raw);
  }

  constexpr std::int64_t raw() const { return raw_; }
  constexpr double to_double() const {
    return static_cast<double>(raw_) / static_cast<double>(kScale);
  }

  /// Fixed-width rendering with exactly `Digits` fractional digits.
  std::string to_string() const {
    std::int64_t mag = raw_ < 0 ? -raw_ : raw_;
    std::string out = raw_ < 0 ? "-" : "";
    out += std::to_string(mag / kScale);
    if constexpr (Digits > 0) {
      std::string frac = std::to_string(mag % kScale);
      out += '.';
      out.append(static_cast<std::size_t>(Digits) - frac.size(), '0');
      out += frac;
    }
    return out;
  }

  /// Shortest rendering: trailing fractional zeros (and a bare dot) dropped.
  std::string to_trimmed_string() const {
    std::string s = to_string();
    if (s.find('.') == std::string::npos) return s;
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    return s;
  }

  constexpr bool is_integer() const { return raw_ % kScale == 0; }

  friend constexpr FixedDecimal operator+(FixedDecimal a, FixedDecimal b) {
    return from_raw(a.raw_ + b.raw_);
  }
  friend constexpr FixedDecimal operator-(FixedDecimal a, FixedDecimal b) {
    return from_raw(a.raw_ - b.raw_);
  }
  friend constexpr FixedDecimal operator-(FixedDecimal a) {
    return from_raw(-a.raw_);
  }
  friend constexpr FixedDecimal operator*(FixedDecimal a, std::int64_t k) {
    return from_raw(a.raw_ * k);
  }
  constexpr FixedDecimal& operator+=(FixedDecimal o) {
    raw_ += o.raw_;
    return *this;
  }
  constexpr FixedDecimal& operator-=(FixedDecimal o) {
    raw_ -= o.raw_;
    return *this;
  }

  friend constexpr auto operator<=>(FixedDecimal, FixedDecimal) = default;
  friend constexpr bool operator==(FixedDecimal, FixedDecimal) = default;

 private:
  std::int64_t raw_ = 0;
};

/// Demand, coverage, and weight values: three fractional digits.
using Decimal = FixedDecimal<3>;

/// Objective values: products of two three-digit decimals.
using ObjectiveValue = FixedDecimal<6>;

/// Exact product of two three-digit decimals.
constexpr ObjectiveValue multiply(Decimal a, Decimal b) {
  return ObjectiveValue::from_raw(a.raw() * b.raw());
}

/// Widens a three-digit decimal to objective precision.
constexpr ObjectiveValue widen(Decimal a) {
  return ObjectiveValue::from_raw(a.raw() * Decimal::kScale);
}

/// Rounds half-up (away from zero for the magnitude) to three digits.
inline Decimal round_half_up(double value) {
  const double scaled = value * static_cast<double>(Decimal::kScale);
  const double mag = scaled < 0 ? -scaled : scaled;
  if (mag > 9.0e15) throw InputError("value too large for a decimal");
  const auto rounded = static_cast<std::int64_t>(mag + 0.5);
  return Decimal::from_raw(scaled < 0 ? -rounded : rounded);
}

}  // namespace bapcac
