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

#include <stdexcept>

#include "gtest/gtest.h"

namespace cnnscale {
namespace {

TEST(RationalTest, ParsesDecimalsFractionsAndExponents) {
  EXPECT_EQ(ParseRational("0.25"), Rational(1, 4));
  EXPECT_EQ(ParseRational("1/4"), Rational(1, 4));
  EXPECT_EQ(ParseRational("-3"), Rational(-3));
  EXPECT_EQ(ParseRational("2e-3"), Rational(2, 1000));
  EXPECT_EQ(ParseRational("2.5E2"), Rational(250));
  EXPECT_EQ(ParseRational(".5"), Rational(1, 2));
}

TEST(RationalTest, RejectsGarbage) {
  EXPECT_THROW(ParseRational(""), std::invalid_argument);
  EXPECT_THROW(ParseRational("abc"), std::invalid_argument);
  EXPECT_THROW(ParseRational("1/0"), std::invalid_argument);
  EXPECT_THROW(ParseRational("1.2.3"), std::invalid_argument);
  EXPECT_THROW(ParseRational("."), std::invalid_argument);
}

TEST(RationalTest, DoubleConversionUsesShortestDecimal) {
  EXPECT_EQ(RationalFromDouble(0.25), Rational(1, 4));
  EXPECT_EQ(RationalFromDouble(0.1), Rational(1, 10));
  EXPECT_EQ(RationalFromDouble(0.002), Rational(1, 500));
}

TEST(RationalTest, FixedFormattingRoundsHalfAwayFromZero) {
  EXPECT_EQ(FormatFixed(Rational(265, 1000), 2), "0.27");
  EXPECT_EQ(FormatFixed(Rational(2575, 10000), 2), "0.26");
  EXPECT_EQ(FormatFixed(Rational(-265, 1000), 2), "-0.27");
  EXPECT_EQ(FormatFixed(Rational(34848, 1000000), 2), "0.03");
  EXPECT_EQ(FormatFixed(Rational(7), 0), "7");
  EXPECT_EQ(FormatFixed(Rational(1, 3), 4), "0.3333");
}

TEST(RationalTest, ExactFormatting) {
  EXPECT_EQ(FormatExact(Rational(203, 800)), "0.25375");
  EXPECT_EQ(FormatExact(Rational(3)), "3");
  EXPECT_EQ(FormatExact(Rational(1, 3)), "1/3");
}

TEST(RationalTest, FloorAndCeil) {
  EXPECT_EQ(Floor(Rational(7, 2)), 3);
  EXPECT_EQ(Ceil(Rational(7, 2)), 4);
  EXPECT_EQ(Floor(Rational(-7, 2)), -4);
  EXPECT_EQ(Ceil(Rational(-7, 2)), -3);
  EXPECT_EQ(Ceil(Rational(4)), 4);
}

TEST(RationalTest, ToInt64RejectsOverflow) {
  BigInt big = 1;
  big <<= 70;
  EXPECT_THROW(ToInt64(big), std::overflow_error);
  EXPECT_EQ(ToInt64(BigInt(42)), 42);
}

}  // namespace
}  // namespace cnnscale
