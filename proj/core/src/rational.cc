// Copyright 2026 The cnnscale Authors
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

#include "cnnscale/rational.h"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <system_error>

namespace cnnscale {
namespace {

bool IsDigit(char c) { return c >= '0' && c <= '9'; }

BigInt ParseInteger(std::string_view text, std::string_view whole) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  if (i == text.size()) {
    throw std::invalid_argument("not a number: '" + std::string(whole) + "'");
  }
  BigInt value = 0;
  for (; i < text.size(); ++i) {
    if (!IsDigit(text[i])) {
      throw std::invalid_argument("not a number: '" + std::string(whole) +
                                  "'");
    }
    value = value * 10 + (text[i] - '0');
  }
  return negative ? BigInt(-value) : value;
}

BigInt Pow10(int exponent) {
  BigInt result = 1;
  for (int i = 0; i < exponent; ++i) result *= 10;
  return result;
}

}  // namespace

Rational ParseRational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = ParseInteger(text.substr(0, slash), text);
    BigInt den = ParseInteger(text.substr(slash + 1), text);
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  }

  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') {
    negative = text[i] == '-';
    ++i;
  }
  BigInt mantissa = 0;
  int scale = 0;
  int digits = 0;
  for (; i < text.size() && IsDigit(text[i]); ++i, ++digits) {
    mantissa = mantissa * 10 + (text[i] - '0');
  }
  if (i < text.size() && text[i] == '.') {
    for (++i; i < text.size() && IsDigit(text[i]); ++i, ++digits) {
      mantissa = mantissa * 10 + (text[i] - '0');
      ++scale;
    }
  }
  if (digits == 0) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  long exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    std::string_view rest = text.substr(i + 1);
    if (!rest.empty() && rest.front() == '+') rest.remove_prefix(1);
    auto [ptr, ec] =
        std::from_chars(rest.data(), rest.data() + rest.size(), exponent);
    if (ec != std::errc() || ptr != rest.data() + rest.size() ||
        std::labs(exponent) > 4096) {
      throw std::invalid_argument("bad exponent in '" + std::string(text) +
                                  "'");
    }
    i = text.size();
  }
  if (i != text.size()) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  long shift = exponent - scale;
  Rational value = shift >= 0
                       ? Rational(mantissa * Pow10(static_cast<int>(shift)))
                       : Rational(mantissa, Pow10(static_cast<int>(-shift)));
  return negative ? Rational(-value) : value;
}

Rational RationalFromDouble(double value) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("non-finite number");
  }
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw std::invalid_argument("unprintable number");
  return ParseRational(std::string_view(buffer, ptr - buffer));
}

BigInt Floor(const Rational& value) {
  BigInt num = boost::multiprecision::numerator(value);
  BigInt den = boost::multiprecision::denominator(value);
  BigInt q = num / den;
  if (num % den != 0 && num < 0) q -= 1;
  return q;
}

BigInt Ceil(const Rational& value) {
  BigInt num = boost::multiprecision::numerator(value);
  BigInt den = boost::multiprecision::denominator(value);
  BigInt q = num / den;
  if (num % den != 0 && num > 0) q += 1;
  return q;
}

Rational RoundToPlaces(const Rational& value, int places) {
  const BigInt scale = Pow10(places);
  Rational scaled = value * scale;
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  BigInt rounded = Floor(scaled + Rational(1, 2));
  if (negative) rounded = -rounded;
  return Rational(rounded, scale);
}

std::string FormatFixed(const Rational& value, int places) {
  const Rational rounded = RoundToPlaces(value, places);
  BigInt scaled = boost::multiprecision::numerator(Rational(rounded * Pow10(places)));
  std::string sign;
  if (scaled < 0) {
    sign = "-";
    scaled = -scaled;
  }
  std::string digits = scaled.str();
  if (places == 0) return sign + digits;
  if (digits.size() <= static_cast<std::size_t>(places)) {
    digits.insert(0, places + 1 - digits.size(), '0');
  }
  digits.insert(digits.size() - places, ".");
  return sign + digits;
}

std::string FormatExact(const Rational& value) {
  BigInt den = boost::multiprecision::denominator(value);
  int twos = 0;
  int fives = 0;
  while (den % 2 == 0) {
    den /= 2;
    ++twos;
  }
  while (den % 5 == 0) {
    den /= 5;
    ++fives;
  }
  if (den != 1) {
    return boost::multiprecision::numerator(value).str() + "/" +
           boost::multiprecision::denominator(value).str();
  }
  return FormatFixed(value, std::max(twos, fives));
}

std::int64_t ToInt64(const BigInt& value) {
  if (value > std::numeric_limits<std::int64_t>::max() ||
      value < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("value does not fit in 64 bits: " +
                              value.str());
  }
  return value.convert_to<std::int64_t>();
}

double ToDouble(const Rational& value) { return value.convert_to<double>(); }

}  // namespace cnnscale
