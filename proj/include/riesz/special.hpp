#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "riesz/error.hpp"

namespace riesz::special {

inline double gamma_pos(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("gamma_pos requires a finite positive argument");
  return std::tgamma(a);
}

namespace detail {

// B_2, B_4, ..., B_30.
inline constexpr std::array<double, 15> kBernoulliEven = {
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0};

// The accelerated alternating series loses accuracy like e^{pi |t| / 2}
// against (3 + sqrt 8)^-64; beyond this height Euler-Maclaurin is used.
inline constexpr double kAcceleratedHeight = 40.0;
inline constexpr int kEulerTransformDepth = 64;

inline cplx neg_power(double n, cplx s) { return std::exp(-s * std::log(n)); }

}  // namespace detail

/// zeta(s) by Euler-Maclaurin summation, valid for every s != 1.
inline cplx zeta_euler_maclaurin(cplx s) {
  if (s == cplx{1.0, 0.0}) throw NearPole("zeta has a pole at s = 1");
  const double big = std::abs(s);
  const int N = 20 + static_cast<int>(std::ceil(0.5 * big));
  cplx head{};
  for (int n = 1; n < N; ++n) head += detail::neg_power(n, s);
  const double dn = N;
  const cplx n_pow = detail::neg_power(dn, s);  // N^{-s}
  cplx sum = head + n_pow * dn / (s - 1.0) + 0.5 * n_pow;
  cplx rising = s;        // s (s+1) ... (s+2j-2)
  double factorial = 2.0;  // (2j)!
  cplx tail_pow = n_pow / dn;
  for (std::size_t j = 1; j <= detail::kBernoulliEven.size(); ++j) {
    cplx term = detail::kBernoulliEven[j - 1] / factorial * rising * tail_pow;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    double jj = static_cast<double>(j);
    rising *= (s + 2.0 * jj - 1.0) * (s + 2.0 * jj);
    factorial *= (2.0 * jj + 1.0) * (2.0 * jj + 2.0);
    tail_pow /= dn * dn;
  }
  return sum;
}

/// Dirichlet eta, sum_{n>=1} (-1)^{n+1} n^{-s}, continued to the plane.
///
/// Near the real axis the alternating series is summed with the
/// Cohen-Villegas-Zagier acceleration (64 terms); higher up it is
/// (1 - 2^{1-s}) zeta(s) with zeta from Euler-Maclaurin.
inline cplx eta(cplx s) {
  if (std::abs(s.imag()) > detail::kAcceleratedHeight || s.real() <= -1.0)
    return (1.0 - std::pow(cplx{2.0, 0.0}, 1.0 - s)) * zeta_euler_maclaurin(s);
  const int n = detail::kEulerTransformDepth;
  double d = std::pow(3.0 + std::sqrt(8.0), n);
  d = 0.5 * (d + 1.0 / d);
  double b = -1.0;
  double c = -d;
  cplx sum{};
  for (int k = 0; k < n; ++k) {
    c = b - c;
    sum += c * detail::neg_power(k + 1.0, s);
    b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0));
  }
  return sum / d;
}

/// zeta(s) = eta(s) / (1 - 2^{1-s}); throws where the denominator vanishes.
inline cplx zeta_eta_route(cplx s, double denominator_guard = 1e-6) {
  cplx denom = 1.0 - std::pow(cplx{2.0, 0.0}, 1.0 - s);
  if (std::abs(denom) < denominator_guard)
    throw NearDenominatorZero("1 - 2^{1-s} vanishes near s = 1 + 2 pi i k / log 2");
  return eta(s) / denom;
}

/// Riemann zeta away from its pole. Uses the eta identity where it is well
/// conditioned and Euler-Maclaurin elsewhere (large |Im s| and the zeros of
/// 1 - 2^{1-s} on Re s = 1).
inline cplx zeta(cplx s, double pole_guard = 1e-8) {
  if (std::abs(s - 1.0) <= pole_guard) throw NearPole("zeta evaluated within the pole guard of s = 1");
  cplx denom = 1.0 - std::pow(cplx{2.0, 0.0}, 1.0 - s);
  if (std::abs(s.imag()) > detail::kAcceleratedHeight || s.real() <= -1.0 || std::abs(denom) < 1e-3)
    return zeta_euler_maclaurin(s);
  return eta(s) / denom;
}

}  // namespace riesz::special
