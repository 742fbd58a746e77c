#include <gtest/gtest.h>

#include <cmath>

#include "riesz/frequency.hpp"

using namespace riesz;

TEST(Frequency, LogIntegerValues) {
  auto f = make_frequency(FrequencyKind::LogInteger);
  EXPECT_EQ(f[1], 0.0);
  EXPECT_NEAR(f[2], 0.6931471805599453, 1e-15);
}

TEST(Frequency, IntegerStartsAtZero) {
  auto f = make_frequency(FrequencyKind::Integer);
  EXPECT_EQ(f[1], 0.0);
  EXPECT_EQ(f[3], 2.0);
  EXPECT_THROW(f[0], DomainError);
}

TEST(Frequency, ExplicitRejectsNonMonotone) {
  EXPECT_THROW(make_frequency(FrequencyKind::Explicit, std::vector<double>{0.0, 0.5, 0.4}), RejectNonMonotone);
  EXPECT_THROW(make_frequency(FrequencyKind::Explicit, std::vector<double>{0.0, 0.5, 0.5}), RejectNonMonotone);
  EXPECT_THROW(make_frequency(FrequencyKind::Explicit, std::vector<double>{-1.0, 0.5}), RejectNonMonotone);
  EXPECT_THROW(make_frequency(FrequencyKind::Explicit, std::vector<double>{}), RejectNonMonotone);
  EXPECT_THROW(make_frequency(FrequencyKind::Explicit), RejectNonMonotone);
  auto f = make_frequency(FrequencyKind::Explicit, std::vector<double>{0.0, 0.5, 2.0});
  EXPECT_EQ(f[3], 2.0);
  EXPECT_THROW(f[4], DomainError);
}

TEST(TermsBelow, LogIntegerAtOne) {
  auto t = terms_below(Frequency::log_integer(), 1.0);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].index, 1u);
  EXPECT_EQ(t[0].lambda, 0.0);
  EXPECT_EQ(t[1].index, 2u);
  EXPECT_NEAR(t[1].lambda, std::log(2.0), 1e-15);
}

TEST(TermsBelow, IntegerStrictCutoff) {
  auto t = terms_below(Frequency::integer(), 2.5);
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[2].lambda, 2.0);
  // lambda = 2 is not below x = 2.
  EXPECT_EQ(terms_below(Frequency::integer(), 2.0).size(), 2u);
}

TEST(TermsBelow, BudgetExceeded) {
  EXPECT_THROW(terms_below(Frequency::log_integer(), 30.0, 10'000'000), TermBudgetExceeded);
  try {
    terms_below(Frequency::log_integer(), 30.0, 10'000'000);
  } catch (const TermBudgetExceeded& e) {
    EXPECT_EQ(e.budget(), 10'000'000u);
    EXPECT_EQ(e.cutoff(), 30.0);
  }
}

TEST(TermsBelow, RejectsBadArguments) {
  EXPECT_THROW(terms_below(Frequency::integer(), 0.0), DomainError);
  EXPECT_THROW(terms_below(Frequency::integer(), 1.0, 0), DomainError);
}

TEST(TermsBelow, ExplicitListRunsOut) {
  auto f = Frequency::explicit_values({0.0, 1.0, 3.0});
  EXPECT_EQ(terms_below(f, 100.0).size(), 3u);
  EXPECT_EQ(terms_below(f, 3.0).size(), 2u);
}

TEST(TermsBelow, LogIntegerCountMatchesExponential) {
  for (double x : {0.5, 1.0, 2.0, 3.7, 7.0, 10.0, 12.5}) {
    auto n = terms_below(Frequency::log_integer(), x).size();
    EXPECT_LE(std::abs(static_cast<double>(n) - std::exp(x)), 1.0) << x;
  }
}

TEST(TermsBelow, ExactBoundaryAtIntegerExponential) {
  // log 20 < log(20) + tiny, but not < log 20 itself.
  double x = std::log(20.0);
  auto t = terms_below(Frequency::log_integer(), x);
  for (const auto& term : t) EXPECT_LT(term.lambda, x);
  EXPECT_EQ(t.size(), 19u);
}
