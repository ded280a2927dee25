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

#ifndef CNNSCALE_RATIONAL_H_
#define CNNSCALE_RATIONAL_H_

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace cnnscale {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Accepts "3", "-2", "0.25", "1e-3", "2.5E2" and "1/4". Throws
// std::invalid_argument on anything else.
Rational ParseRational(std::string_view text);

// Exact conversion of a finite double through its shortest round-trip
// decimal form, so 0.25 becomes 1/4 and 0.1 becomes 1/10.
Rational RationalFromDouble(double value);

// Rounds half away from zero to `places` decimal digits and prints a fixed
// number of digits: FormatFixed(0.265, 2) == "0.27".
std::string FormatFixed(const Rational& value, int places);

// Terminating decimals print exactly ("0.25375"); everything else prints
// as "p/q".
std::string FormatExact(const Rational& value);

Rational RoundToPlaces(const Rational& value, int places);

BigInt Floor(const Rational& value);
BigInt Ceil(const Rational& value);

// Throws std::overflow_error when the value does not fit.
std::int64_t ToInt64(const BigInt& value);

double ToDouble(const Rational& value);

}  // namespace cnnscale

#endif  // CNNSCALE_RATIONAL_H_
