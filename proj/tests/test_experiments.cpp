#include <gtest/gtest.h>

#include <cmath>

#include "riesz/experiments.hpp"

using namespace riesz;

namespace {

QuadratureSpec spec(double rel, double abs) {
  QuadratureSpec q;
  q.rel_tol = rel;
  q.abs_tol = abs;
  return q;
}

}  // namespace

TEST(FourierCheck, UnitIntegral) {
  QuadratureSpec q = spec(1e-10, 1e-12);
  EXPECT_LT(kernel_fourier_check(1.0, q).deviation, 1e-6);
  EXPECT_LT(kernel_fourier_check(0.6, q).deviation, 1e-5);
  EXPECT_LT(kernel_fourier_check(3.0, q).deviation, 1e-8);
  EXPECT_THROW(kernel_fourier_check(0.0, q), DomainError);
}

TEST(TailMass, FrozenValuesAndReferenceBound) {
  // First calibrated run: 0.33408036 and 0.14547501; mass / reference bound
  // peaks at 0.2582 (x = 5).
  auto r = kernel_tail_mass(0.75, 0.0, 0.5, {5.0, 10.0}, spec(1e-5, 1e-8));
  ASSERT_EQ(r.rows.size(), 2u);
  const double frozen[] = {0.33408036, 0.14547501};
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_GT(r.rows[i].mass, frozen[i] / 2.0);
    EXPECT_LT(r.rows[i].mass, frozen[i] * 2.0);
    EXPECT_LE(r.rows[i].mass, 2.0 * 0.2582 * r.rows[i].reference_bound);
  }
  EXPECT_TRUE(r.strictly_decreasing);
}

TEST(TailMass, VanishesAsDeltaGrows) {
  QuadratureSpec q = spec(1e-5, 1e-8);
  double prev = INFINITY;
  for (double delta : {0.5, 4.0, 32.0}) {
    double m = kernel_tail_mass(1.5, 0.5, delta, {5.0}, q).rows[0].mass;
    EXPECT_LT(m, prev) << delta;
    prev = m;
  }
  EXPECT_LT(prev, 1e-2);
}

TEST(TailMass, Preconditions) {
  QuadratureSpec q;
  EXPECT_THROW(kernel_tail_mass(0.5, 0.5, 0.5, {5.0}, q), DomainError);
  EXPECT_THROW(kernel_tail_mass(1.0, 0.0, 0.0, {5.0}, q), DomainError);
  EXPECT_THROW(kernel_tail_mass(1.0, 0.0, 0.5, {1.0}, q), DomainError);
}

TEST(BoundarySweep, ConstantTargetHasNoError) {
  ExperimentConfig c;
  c.target = "const1";
  c.k = 1.0;
  c.interval_lo = -3.0;
  c.interval_hi = 3.0;
  c.tau_grid_size = 7;
  c.xs = {1.0, 5.0, 25.0};
  auto r = boundary_sweep(c);
  for (const auto& [x, e] : r.sup_error_per_x) EXPECT_EQ(e, 0.0);
  EXPECT_EQ(r.records.size(), 21u);
}

TEST(BoundarySweep, PolynomialWithinWeightDeficitEnvelope) {
  // 1 - (1 - lambda/x)^k <= k lambda / x, so the error is at most
  // k lambda_max sum |c_j| / x; 10 k lambda_max / x is the asserted envelope.
  ExperimentConfig c;
  c.coeffs = {cplx{0.5, 0.1}, cplx{-0.3, 0.2}, cplx{0.2, 0.0}};
  c.freqs = {0.0, 0.8, 1.7};
  c.interval_lo = -2.0;
  c.interval_hi = 2.0;
  c.tau_grid_size = 9;
  for (double k : {0.5, 1.0, 2.5}) {
    c.k = k;
    c.xs = {1.7e3, 1.7e4, 1.7e5};
    auto r = boundary_sweep(c);
    for (const auto& [x, e] : r.sup_error_per_x) EXPECT_LT(e, 10.0 * k * 1.7 / x) << k << " " << x;
    EXPECT_EQ(r.notes.at("decreasing"), "true");
  }
}

TEST(BoundarySweep, TaylorErrorsDecrease) {
  ExperimentConfig c;
  c.target = "taylor-l2";
  c.k = 1.0;
  c.interval_lo = 0.0;
  c.interval_hi = 2.0 * std::numbers::pi;
  c.tau_grid_size = 17;
  c.xs = {10.0, 100.0, 1000.0};
  auto r = boundary_sweep(c);
  ASSERT_EQ(r.sup_error_per_x.size(), 3u);
  EXPECT_TRUE(strictly_decreasing({r.sup_error_per_x[0].second, r.sup_error_per_x[1].second,
                                   r.sup_error_per_x[2].second}));
  EXPECT_LT(r.sup_error_per_x[2].second, 1e-2);
}

TEST(BoundarySweep, ConfigValidation) {
  ExperimentConfig c;
  c.tau_grid_size = 1;
  EXPECT_THROW(boundary_sweep(c), DomainError);
  c.tau_grid_size = 3;
  c.xs = {2.0, 1.0};
  EXPECT_THROW(boundary_sweep(c), DomainError);
  c.xs = {1.0};
  c.coeffs = {1.0};
  EXPECT_THROW(boundary_sweep(c), DomainError);
  c.coeffs.clear();
  c.target = "unknown";
  EXPECT_THROW(boundary_sweep(c), DomainError);
  ExperimentConfig strict;
  strict.target = "eta";
  strict.k = 0.5;
  EXPECT_THROW(strict.validate(), DomainError);
  EXPECT_NO_THROW(strict.validate(false));
}

TEST(DecreaseFlags, AllowOneStep) {
  EXPECT_TRUE(decreasing_except({5, 4, 4.5, 3}));
  EXPECT_FALSE(decreasing_except({5, 6, 4, 4.5}));
  EXPECT_TRUE(strictly_decreasing({3, 2, 1}));
  EXPECT_FALSE(strictly_decreasing({3, 3, 1}));
}

TEST(Dini, ConstantTarget) {
  auto r = dini_check(targets::const1(), 0.0, 0.5, 2.0, 0.75, {4.0, 6.0}, QuadratureSpec{});
  EXPECT_EQ(r.integral, 0.0);
  EXPECT_FALSE(r.divergent);
  for (const auto& [x, e] : r.riesz_errors) EXPECT_EQ(e, 0.0);
}

TEST(Dini, FiniteBelowLipschitzThreshold) {
  // 1 + k - ell = 1.75 < 2: a Lipschitz modulus is enough.
  auto r = dini_check(targets::eta(), 0.0, 0.5, 1.5, 0.75, {4.0, 6.0, 8.0, 10.0, 12.0}, QuadratureSpec{});
  EXPECT_FALSE(r.divergent);
  EXPECT_NEAR(r.integral, 1.51989, 2e-3);
  EXPECT_TRUE(r.errors_decreasing);
}

TEST(Dini, EtaAtOrderTwoIsNotIntegrable) {
  // eta'(0) = log(pi/2)/2 != 0, so the integrand behaves like |y|^-1.25 at 0.
  auto r = dini_check(targets::eta(), 0.0, 0.5, 2.0, 0.75, {4.0, 6.0, 8.0, 10.0, 12.0}, QuadratureSpec{});
  EXPECT_TRUE(r.divergent);
  // The Riesz means still converge at this regular point.
  EXPECT_TRUE(r.errors_decreasing);
}

TEST(Dini, RoughBoundaryDetected) {
  auto rough = targets::with_rough_boundary(targets::eta(), 0.0, 0.5);
  auto r = dini_check(rough, 0.0, 0.5, 2.5, 0.75, {4.0, 6.0}, QuadratureSpec{});
  EXPECT_TRUE(r.divergent);
}

TEST(Dini, ConvergentPowerModulus) {
  // |y|^1.5 against |y|^-2: int_{-d}^{d} |y|^-0.5 dy = 4 sqrt(d).
  auto t = targets::with_rough_boundary(targets::const1(), 0.0, 1.5);
  auto r = dini_check(t, 0.0, 0.5, 1.0, 0.0, {}, QuadratureSpec{});
  EXPECT_FALSE(r.divergent);
  EXPECT_NEAR(r.integral, 4.0 * std::sqrt(0.5), 1e-6);
}

TEST(Localization, ConstantTailIsComplementOfNearMass) {
  QuadratureSpec q = spec(1e-6, 1e-8);
  auto t = targets::const1();
  auto tail = localization_tail(t, 1.25, 0.0, 1.0, {5.0, 10.0}, q);
  for (const auto& row : tail.rows) {
    auto near = localization_near(t, 1.25, 0.0, 1.0, row.x, q);
    EXPECT_LT(std::abs(row.tail + near.value - 1.0), 1e-5) << row.x;
  }
  EXPECT_TRUE(tail.decreasing);
}

TEST(Localization, DifferenceOfMeansIsLinear) {
  // g = f + h: R_x(g)(0) - R_x(f)(0) = R_x(h)(0) = near(h) + tail(h).
  QuadratureSpec q = spec(1e-6, 1e-8);
  auto f = targets::polynomial({1.0, 0.5}, {0.0, 2.0});
  auto g = targets::polynomial({1.0, 0.5, cplx{0.2, -0.1}}, {0.0, 2.0, 3.1});
  auto h = targets::polynomial({cplx{0.2, -0.1}}, {3.1});
  const double k = 1.5, x = 6.0, delta = 1.0;
  cplx diff = riesz_mean(g.series, k, x, 0.0) - riesz_mean(f.series, k, x, 0.0);
  auto tail = localization_tail(h, k, 0.0, delta, {x}, q).rows[0];
  auto near = localization_near(h, k, 0.0, delta, x, q);
  EXPECT_LT(std::abs(diff - (near.value + tail.tail)), 1e-5 + near.err + tail.err);
}

TEST(VerticalMc, ZeroCoefficients) {
  auto r = vertical_limit_mc([](std::size_t) { return cplx{}; }, {0.0, 1.0}, {10, 100, 1000}, 5, 7);
  for (const auto& s : r.osc)
    for (const auto& t : s)
      for (double o : t) EXPECT_EQ(o, 0.0);
}

TEST(VerticalMc, HarmonicTrivialCharacter) {
  auto r = vertical_limit_mc([](std::size_t n) { return cplx{1.0 / static_cast<double>(n), 0.0}; }, {0.0},
                             {100, 10000}, 1, 1);
  // H(10^4) - H(10^2) = log 100 - (1/2)(10^-2 - 10^-4) + O(10^-4).
  double growth = std::abs(r.trivial_sums[0][1] - r.trivial_sums[0][0]);
  EXPECT_NEAR(growth, std::log(100.0) - 0.00495, 1e-4);
  EXPECT_TRUE(r.trivial_divergent[0]);
}

TEST(VerticalMc, DeterministicUnderSeed) {
  auto harmonic = [](std::size_t n) { return cplx{1.0 / static_cast<double>(n), 0.0}; };
  auto a = vertical_limit_mc(harmonic, {0.0, 1.0}, {100, 1000, 10000}, 16, 99);
  auto b = vertical_limit_mc(harmonic, {0.0, 1.0}, {100, 1000, 10000}, 16, 99);
  auto c = vertical_limit_mc(harmonic, {0.0, 1.0}, {100, 1000, 10000}, 16, 100);
  EXPECT_EQ(a.osc, b.osc);
  EXPECT_NE(a.osc, c.osc);
  EXPECT_GE(a.fraction_last_below_first, 0.9);
}

TEST(VerticalMc, Preconditions) {
  auto one = [](std::size_t) { return cplx{1.0, 0.0}; };
  EXPECT_THROW(vertical_limit_mc(one, {0.0}, {10, 100}, 0, 1), DomainError);
  EXPECT_THROW(vertical_limit_mc(one, {0.0}, {100}, 1, 1), DomainError);
  EXPECT_THROW(vertical_limit_mc(one, {0.0}, {100, 10}, 1, 1), DomainError);
  EXPECT_THROW(vertical_limit_mc(one, {}, {10, 100}, 1, 1), DomainError);
}
