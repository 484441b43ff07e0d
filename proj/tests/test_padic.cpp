#include <gtest/gtest.h>

#include "support.hpp"

using namespace dwb;
using namespace dwb::testing;

TEST(Padic, FromRationalExamples) {
  auto a = PadicNumber::from_rational(5, 1, 5, 8);
  EXPECT_EQ(a.valuation(), 1);
  EXPECT_EQ(a.unit(), 1);
  auto b = PadicNumber::from_rational(1, 2, 5, 4);
  EXPECT_EQ(b.valuation(), 0);
  EXPECT_EQ(*b.log_norm(), 0);
  auto c = PadicNumber::from_rational(1, -4, 5, 4);
  EXPECT_EQ(c.valuation(), 0);
  EXPECT_EQ(c.unit(), 156);
  // Oracle: 4u = -1 mod 625.
  EXPECT_EQ((4 * c.unit() + 1) % 625, 0);
}

TEST(Padic, FromRationalErrors) {
  EXPECT_THROW(PadicNumber::from_rational(1, 0, 5, 4), std::invalid_argument);
  EXPECT_THROW(PadicNumber::from_rational(1, 3, 6, 4), std::invalid_argument);
}

TEST(Padic, ArithmeticExamples) {
  auto x = PadicNumber::from_rational(2, 1, 5, 4) * PadicNumber::from_rational(3, 1, 5, 4);
  EXPECT_EQ(x.unit(), 6);
  EXPECT_EQ(x.absolute_precision(), 4);

  auto s = PadicNumber::from_rational(1, 1, 5, 4) + PadicNumber::from_rational(4, 1, 5, 4);
  EXPECT_EQ(s.valuation(), 1);
  EXPECT_EQ(s.lift(), 5);
  EXPECT_EQ(s.absolute_precision(), 4);

  auto g = PadicNumber::from_rational(1, 1, 5, 5) / PadicNumber::from_rational(-4, 1, 5, 5);
  EXPECT_EQ(g.unit(), 1 + 5 + 25 + 125 + 625);
  EXPECT_EQ(g.relative_precision(), 5);
}

TEST(Padic, DivisionByZeroAtPrecision) {
  auto z = PadicNumber::from_rational(5, 1, 5, 4) - PadicNumber::from_rational(5, 1, 5, 4);
  EXPECT_TRUE(z.is_zero());
  EXPECT_THROW(PadicNumber::from_rational(1, 1, 5, 4) / z, PrecisionError);
}

TEST(Padic, FactorialValuation) {
  EXPECT_EQ(factorial_valuation(0, 5), 0);
  EXPECT_EQ(factorial_valuation(25, 5), 6);
  for (std::uint64_t p : {2, 3, 5, 7, 11}) EXPECT_EQ(factorial_valuation(static_cast<std::int64_t>(p - 1), p), 0);
  for (int k = 0; k < kCases; ++k) {
    std::uint64_t p = std::vector<std::uint64_t>{2, 3, 5, 7, 13}[static_cast<std::size_t>(uniform(0, 4))];
    std::int64_t s = uniform(0, 100000);
    ASSERT_EQ(factorial_valuation(s, p), legendre(s, p)) << s << " " << p;
  }
}

// Results of every operation agree with exact rational arithmetic on every claimed digit,
// and the claimed precision matches the minimal sound rule.
TEST(Padic, ArithmeticAgainstRationalOracle) {
  for (int k = 0; k < kCases; ++k) {
    std::uint64_t p = std::vector<std::uint64_t>{2, 3, 5, 7}[static_cast<std::size_t>(uniform(0, 3))];
    std::int64_t nx = uniform(1, 30), ny = uniform(1, 30);
    mpq_class a = random_rational(p, true), b = random_rational(p, true);
    auto x = PadicNumber::from_rational(a, p, nx), y = PadicNumber::from_rational(b, p, ny);
    ASSERT_TRUE(claims_consistent(x, a, p));
    auto sum = x + y, diff = x - y, prod = x * y, quot = x / y;
    ASSERT_TRUE(claims_consistent(sum, a + b, p)) << a << " " << b;
    ASSERT_TRUE(claims_consistent(diff, a - b, p)) << a << " " << b;
    ASSERT_TRUE(claims_consistent(prod, a * b, p)) << a << " " << b;
    ASSERT_TRUE(claims_consistent(quot, mpq_class(a / b), p)) << a << " " << b;
    EXPECT_EQ(prod.relative_precision(), std::min(nx, ny));
    EXPECT_EQ(quot.relative_precision(), std::min(nx, ny));
    EXPECT_EQ(sum.absolute_precision(), std::min(x.absolute_precision(), y.absolute_precision()));
  }
}

TEST(Padic, UltrametricNormLaws) {
  for (int k = 0; k < kCases; ++k) {
    std::uint64_t p = std::vector<std::uint64_t>{3, 5, 7}[static_cast<std::size_t>(uniform(0, 2))];
    mpq_class a = random_rational(p, true), b = random_rational(p, true);
    auto x = PadicNumber::from_rational_exact(a, p, 40), y = PadicNumber::from_rational_exact(b, p, 40);
    auto s = x + y;
    // |x + y| <= max(|x|, |y|), with equality when the norms differ.
    if (!s.is_zero()) {
      ASSERT_LE(*s.log_norm(), std::max(*x.log_norm(), *y.log_norm()));
      if (*x.log_norm() != *y.log_norm()) ASSERT_EQ(*s.log_norm(), std::max(*x.log_norm(), *y.log_norm()));
    }
    ASSERT_EQ(*(x * y).log_norm(), *x.log_norm() + *y.log_norm());
    ASSERT_EQ(*x.log_norm(), -v_p(a, p));
  }
}

TEST(Padic, ExactModeStaysExact) {
  auto x = PadicNumber::exact(12, 3, 10) * PadicNumber::exact(-7, 3, 10) + PadicNumber::exact(5, 3, 10);
  EXPECT_TRUE(x.is_exact());
  EXPECT_EQ(x.lift(), -79);
  EXPECT_TRUE((x / PadicNumber::exact(9, 3, 10)).is_exact());
  EXPECT_FALSE((x / PadicNumber::exact(2, 3, 10)).is_exact());
}

TEST(Padic, RationalReconstruction) {
  for (int k = 0; k < kCases; ++k) {
    std::uint64_t p = std::vector<std::uint64_t>{3, 5, 7}[static_cast<std::size_t>(uniform(0, 2))];
    mpq_class a = random_rational(p, true);
    auto x = PadicNumber::from_rational(a, p, 60);
    auto q = reconstruct(x);
    ASSERT_TRUE(q.has_value());
    ASSERT_EQ(*q, a);
  }
}

TEST(Padic, RefinementAgreement) {
  for (int k = 0; k < kCases; ++k) {
    mpq_class a = random_rational(5, true);
    auto lo = PadicNumber::from_rational(a, 5, 8), hi = PadicNumber::from_rational(a, 5, 16);
    ASSERT_TRUE(lo.agrees_with(hi));
    auto off = hi + PadicNumber::exact(mpz_class(1), 5, 16, lo.absolute_precision() - 1);
    ASSERT_FALSE(lo.agrees_with(off));
  }
}
