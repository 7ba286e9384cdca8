#include <gtest/gtest.h>

#include "tamperlab/rational.hpp"

using namespace tamperlab;

TEST(Rational, Parse) {
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_EQ(parse_rational("-3/4"), make_rational(-3, 4));
  EXPECT_EQ(parse_rational("6/8"), make_rational(3, 4));
  EXPECT_EQ(parse_rational("0.25"), make_rational(1, 4));
  EXPECT_EQ(parse_rational("-1.5"), make_rational(-3, 2));
  EXPECT_THROW(parse_rational(""), std::invalid_argument);
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1."), std::invalid_argument);
  EXPECT_THROW(make_rational(1, 0), std::invalid_argument);
}

TEST(Rational, Render) {
  EXPECT_EQ(to_fraction(make_rational(2, 4)), "1/2");
  EXPECT_EQ(to_fraction(Rational(-3)), "-3");
  EXPECT_EQ(to_fraction(Rational(0)), "0");
  EXPECT_EQ(to_decimal(make_rational(1, 2)), "0.5");
  EXPECT_EQ(to_decimal(make_rational(-1, 4)), "-0.25");
  EXPECT_EQ(to_decimal(make_rational(7, 1)), "7");
  EXPECT_EQ(to_decimal(make_rational(3, 40)), "0.075");
  EXPECT_EQ(to_decimal(make_rational(1, 3)), "0.333333333333");
  EXPECT_EQ(to_decimal(make_rational(-200, 3)), "-66.6666666667");
}

TEST(Rational, Mass) {
  Dist<int> d{{0, make_rational(1, 4)}, {1, make_rational(3, 4)}};
  EXPECT_EQ(total_mass(d), Rational(1));
}
