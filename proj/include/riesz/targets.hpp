#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "riesz/error.hpp"
#include "riesz/frequency.hpp"
#include "riesz/series.hpp"
#include "riesz/special.hpp"

namespace riesz::targets {

/// Finite sum sum_j c_j e^{-lambda_j s} over explicit frequencies.
inline AnalyticTarget polynomial(std::vector<cplx> coeffs, std::vector<double> freqs, std::string name = "poly") {
  if (coeffs.size() != freqs.size()) throw DomainError("polynomial needs as many coefficients as frequencies");
  auto freq = Frequency::explicit_values(freqs);
  auto c = std::make_shared<const std::vector<cplx>>(std::move(coeffs));
  auto f = std::make_shared<const std::vector<double>>(std::move(freqs));
  AnalyticTarget t;
  t.series = {freq, [c](std::size_t n) { return n <= c->size() ? (*c)[n - 1] : cplx{}; }, std::move(name)};
  t.order_ell = 0.0;
  t.eval = [c, f](cplx s) {
    CompensatedSum acc;
    for (std::size_t j = 0; j < c->size(); ++j) acc.add((*c)[j] * exp_term((*f)[j], s));
    return acc.value();
  };
  t.boundary = [eval = t.eval](double tau) { return eval({0.0, tau}); };
  return t;
}

/// f = 1, a single term at lambda_1 = 0.
inline AnalyticTarget const1() { return polynomial({1.0}, {0.0}, "const1"); }

/// s -> zeta(1 + s): a_n = 1/n over log n, growth order 1, pole at s = 0.
inline AnalyticTarget zeta_line() {
  AnalyticTarget t;
  t.series = {Frequency::log_integer(), [](std::size_t n) { return cplx{1.0 / static_cast<double>(n), 0.0}; },
              "zeta-line"};
  t.order_ell = 1.0;
  t.eval = [](cplx s) { return special::zeta(1.0 + s); };
  t.boundary = [](double tau) { return special::zeta({1.0, tau}); };
  t.singular_taus = {0.0};
  return t;
}

/// Alternating zeta function, a_n = (-1)^{n+1} over log n.
inline AnalyticTarget eta(double ell = 0.75) {
  AnalyticTarget t;
  t.series = {Frequency::log_integer(), [](std::size_t n) { return cplx{n % 2 == 1 ? 1.0 : -1.0, 0.0}; }, "eta"};
  t.order_ell = ell;
  t.eval = [](cplx s) { return special::eta(s); };
  t.boundary = [](double tau) { return special::eta({0.0, tau}); };
  return t;
}

namespace detail {

inline constexpr std::size_t kTaylorTerms = 1'000'000;

// sum_n e^{-i(n-1) tau} / n^2. The cosine part has the closed form
// pi^2/6 - theta(2 pi - theta)/4 on [0, 2 pi]; the sine part is summed.
inline cplx taylor_l2_boundary(double tau) {
  const double two_pi = 2.0 * std::numbers::pi;
  double theta = std::fmod(tau, two_pi);
  if (theta < 0.0) theta += two_pi;
  double cos_part = std::numbers::pi * std::numbers::pi / 6.0 - theta * (two_pi - theta) / 4.0;
  CompensatedSum sin_part;
  for (std::size_t n = kTaylorTerms; n >= 1; --n) {
    double dn = static_cast<double>(n);
    sin_part.add(std::sin(dn * theta) / (dn * dn));
  }
  // e^{i tau} * (C - i S)
  return std::exp(cplx{0.0, tau}) * cplx{cos_part, -sin_part.value().real()};
}

inline cplx taylor_l2_eval(cplx s) {
  if (s.real() == 0.0) return taylor_l2_boundary(s.imag());
  CompensatedSum acc;
  cplx q = std::exp(-s);
  cplx power{1.0, 0.0};
  for (std::size_t n = 1; n <= kTaylorTerms; ++n) {
    double dn = static_cast<double>(n);
    cplx term = power / (dn * dn);
    acc.add(term);
    if (std::abs(term) < 1e-20) break;
    power *= q;
  }
  return acc.value();
}

}  // namespace detail

/// Power series in e^{-s} with a_n = 1/n^2 over lambda_n = n - 1.
inline AnalyticTarget taylor_l2() {
  AnalyticTarget t;
  t.series = {Frequency::integer(),
              [](std::size_t n) {
                double dn = static_cast<double>(n);
                return cplx{1.0 / (dn * dn), 0.0};
              },
              "taylor-l2"};
  t.order_ell = 0.0;
  t.eval = detail::taylor_l2_eval;
  t.boundary = detail::taylor_l2_boundary;
  return t;
}

/// Same series and interior values, but the boundary function replaced by
/// f*(i tau0) + |tau - tau0|^exponent. Used to exercise the Dini detector.
inline AnalyticTarget with_rough_boundary(AnalyticTarget base, double tau0, double exponent) {
  if (!base.has_boundary()) throw NoBoundaryRule(base.series.name + " has no boundary rule");
  const cplx anchor = base.boundary(tau0);
  base.boundary = [anchor, tau0, exponent](double tau) { return anchor + std::pow(std::abs(tau - tau0), exponent); };
  base.eval = nullptr;
  base.series.name += "+rough";
  return base;
}

/// Looks up one of the built-in targets: const1, zeta-line, eta, taylor-l2.
inline AnalyticTarget by_name(const std::string& name) {
  if (name == "const1") return const1();
  if (name == "zeta-line") return zeta_line();
  if (name == "eta") return eta();
  if (name == "taylor-l2") return taylor_l2();
  throw DomainError("unknown target '" + name + "'");
}

}  // namespace riesz::targets
