#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "riesz/error.hpp"
#include "riesz/kernels.hpp"
#include "riesz/parallel.hpp"
#include "riesz/quadrature.hpp"
#include "riesz/series.hpp"
#include "riesz/special.hpp"

namespace riesz {

namespace detail {

inline void require_eval(const AnalyticTarget& target) {
  if (!target.has_eval()) throw NoEvalRule(target.series.name + " has no evaluation rule");
}

inline void require_order(const AnalyticTarget& target, double k) {
  if (!(k > target.order_ell)) throw DomainError("Perron formulas need k > ell");
}

// Shared setup of the two vertical-line integrals so that perron_boundary and
// perron_line(c = 1/x) integrate on identical nodes.
inline QuadratureSpec perron_spec(const QuadratureSpec& quad, double k, double ell, double x, double c) {
  QuadratureSpec q = quad;
  q.tail_exponent = k - ell;
  if (!q.oscillation) q.oscillation = x;
  q.initial_window = std::max(quad.initial_window, 4.0 * c);
  return q;
}

}  // namespace detail

/// Perron integral along Re s = c:
///   R_x^{lambda,k}(f)(s0) = Gamma(1+k) x^{-k} / (2 pi i) int_{c-i inf}^{c+i inf} f(s + s0) e^{xs} / s^{1+k} ds.
inline Estimate perron_line(const AnalyticTarget& target, double k, double x, cplx s0, double c,
                            const QuadratureSpec& quad) {
  detail::require_eval(target);
  detail::require_order(target, k);
  if (!(x > 0.0) || !(c > 0.0)) throw DomainError("perron_line needs x > 0 and c > 0");
  if (s0.real() < 0.0) throw DomainError("perron_line needs Re s0 >= 0");
  const double pref = special::gamma_pos(1.0 + k) * std::pow(x, -k) / (2.0 * std::numbers::pi);
  auto integrand = [&](double t) {
    cplx s{c, t};
    return target.eval(s + s0) * std::exp(x * s) * std::exp(-(1.0 + k) * std::log(s));
  };
  auto r = integrate_real_line(integrand, detail::perron_spec(quad, k, target.order_ell, x, c));
  return {pref * r.value, pref * r.err};
}

/// Perron integral with c = 1/x written through the scaled kernel:
///   R_x^{lambda,k}(f)(i tau) = int f(1/x + i(t + tau)) e^{ixt} K_x^k(t) dt.
inline Estimate perron_boundary(const AnalyticTarget& target, double k, double x, double tau,
                                const QuadratureSpec& quad) {
  detail::require_eval(target);
  detail::require_order(target, k);
  if (!(x > 0.0)) throw DomainError("perron_boundary needs x > 0");
  const double pref = x * riesz_kernel_constant(k);
  auto integrand = [&](double t) {
    return target.eval({1.0 / x, t + tau}) * std::exp(cplx{0.0, x * t}) *
           std::exp(-(1.0 + k) * std::log(cplx{1.0, x * t}));
  };
  auto r = integrate_real_line(integrand, detail::perron_spec(quad, k, target.order_ell, x, 1.0 / x));
  return {pref * r.value, pref * r.err};
}

/// f*(i tau) from the closed form, or extrapolated from f(eps + i tau).
inline Estimate boundary_value(const AnalyticTarget& target, double tau) {
  if (target.has_boundary()) {
    if (target.is_singular(tau)) throw NoBoundaryRule("boundary value requested at a singular point");
    return {target.boundary(tau), 0.0};
  }
  if (!target.has_eval()) throw NoBoundaryRule(target.series.name + " has neither a boundary nor an eval rule");
  auto h = horizontal_limit(target, tau);
  return {h.value, h.err};
}

/// R_x^{lambda,k}(f)(0) = int f*(iy) / (1 + iy)^ell R^{k,ell}(x, y) dy.
inline Estimate rasmus_integral(const AnalyticTarget& target, double k, double x, const QuadratureSpec& quad) {
  if (!target.has_boundary() && !target.has_eval())
    throw NoBoundaryRule(target.series.name + " has no boundary rule");
  detail::require_order(target, k);
  const double ell = target.order_ell;
  RasmusKernel kernel({k, ell, x}, quad);
  double boundary_err = 0.0;
  double kernel_err = 0.0;
  auto integrand = [&](double y) {
    auto b = boundary_value(target, y);
    auto r = kernel.evaluate(y);
    cplx w = one_plus_iy_pow(y, -ell);
    boundary_err = std::max(boundary_err, b.err * std::abs(w * r.value));
    kernel_err = std::max(kernel_err, std::abs(b.value * w) * r.err);
    return b.value * w * r.value;
  };
  QuadratureSpec q = quad;
  q.tail_exponent = k - ell;
  q.extra_tail_exponents = {1.0, 2.0};
  if (!q.oscillation) q.oscillation = x;
  auto res = integrate_real_line(integrand, q);
  // Pointwise ingredient errors, integrated over the window actually used.
  double ingredient = (boundary_err + kernel_err) * 2.0 * res.window;
  return {res.value, res.err + ingredient};
}

struct ConvolutionCheck {
  cplx lhs;
  cplx rhs;
  double residual = 0.0;
  double err = 0.0;
};

/// Both sides of f(u+it) / (1+u+it)^ell = [f*(i.) / (1+i.)^ell * P_u](t).
inline ConvolutionCheck convolution_residual(const AnalyticTarget& target, double u, double t,
                                             const QuadratureSpec& quad) {
  detail::require_eval(target);
  if (!(u > 0.0)) throw DomainError("convolution needs u > 0");
  const double ell = target.order_ell;
  cplx lhs = target.eval({u, t}) * std::exp(-ell * std::log(cplx{1.0 + u, t}));
  auto integrand = [&](double y) {
    return boundary_value(target, y).value * one_plus_iy_pow(y, -ell) * poisson(u, t - y);
  };
  // The mean term of f* against P_u(t - y) / (1 + iy)^ell gives a clean
  // |y|^-(2 + ell) tail; oscillating terms decay faster.
  QuadratureSpec q = quad;
  q.tail_exponent = 1.0 + ell;
  q.extra_tail_exponents.push_back(1.0);
  q.initial_window = std::max(quad.initial_window, 10.0 * u);
  auto r = integrate_real_line(integrand, q, t);
  return {lhs, r.value, std::abs(lhs - r.value), r.err};
}

/// Laplace representation on a flattened cone, u = iy + w with Re w > 0:
///   f(u) = w^{k+1} / Gamma(1+k) int_0^inf t^k R_t^{lambda,k}(f)(iy) e^{-wt} dt.
///
/// The Riesz means are tabulated on a grid of step grid_step / 2, the
/// integral is taken against the piecewise-linear interpolant on both the
/// fine and the coarse (grid_step) grid, and the two are combined by one
/// Richardson step. Beyond t_max the means are frozen at their last value.
inline Estimate cone_laplace(const AnalyticTarget& target, double k, double y, cplx w, double t_max,
                             const QuadratureSpec& quad, double grid_step = 0.05,
                             std::size_t max_terms = kDefaultMaxTerms) {
  if (!(k >= 0.0)) throw DomainError("cone_laplace needs k >= 0");
  if (!(w.real() > 0.0)) throw DomainError("cone_laplace needs Re w > 0");
  if (!(t_max > 0.0) || !(grid_step > 0.0)) throw DomainError("cone_laplace needs t_max > 0 and grid_step > 0");
  const double h = 0.5 * grid_step;
  std::size_t nodes = static_cast<std::size_t>(std::ceil(t_max / h));
  if (nodes % 2 == 1) ++nodes;  // coarse grid must end on the same node
  const double t_end = static_cast<double>(nodes) * h;
  const cplx point{0.0, y};

  std::vector<cplx> means(nodes + 1);
  {
    // Right limit at t = 0: only lambda_n = 0 survives.
    CompensatedSum acc;
    if (target.series.freq[1] == 0.0) acc.add(target.series.coeff(1));
    means[0] = acc.value();
  }
  // Write-once table; every node is filled by exactly one task.
  parallel_for(nodes, [&](std::size_t i) {
    std::size_t j = nodes - i;
    means[j] = riesz_mean(target.series, k, static_cast<double>(j) * h, point, max_terms);
  });

  QuadratureSpec q = quad;
  q.oscillation.reset();
  auto weight = [&](double t) { return (t == 0.0 ? (k == 0.0 ? 1.0 : 0.0) : std::pow(t, k)) * std::exp(-w * t); };
  auto on_grid = [&](std::size_t stride) {
    cplx total{};
    double err = 0.0;
    for (std::size_t j = 0; j + stride <= nodes; j += stride) {
      double a = static_cast<double>(j) * h, b = static_cast<double>(j + stride) * h;
      cplx ra = means[j], rb = means[j + stride];
      auto r = integrate_finite(
          [&](double t) { return weight(t) * (ra + (rb - ra) * ((t - a) / (b - a))); }, a, b, q);
      total += r.value;
      err += r.err;
    }
    return Estimate{total, err};
  };
  Estimate fine = on_grid(1);
  Estimate coarse = on_grid(2);
  cplx body = (4.0 * fine.value - coarse.value) / 3.0;
  double body_err = std::abs(fine.value - coarse.value) / 3.0 + fine.err + coarse.err;

  const double span = 60.0 / w.real();
  auto tail_w = integrate_finite(weight, t_end, t_end + span, q);
  auto tail_abs = integrate_finite([&](double t) { return cplx{std::pow(t, k) * std::exp(-w.real() * t), 0.0}; },
                                   t_end, t_end + span, q);
  double variation = 0.0;
  for (std::size_t j = nodes; j > 0 && static_cast<double>(nodes - j) * h <= 2.0; --j)
    variation = std::max(variation, std::abs(means[j] - means[nodes]));
  cplx tail = means[nodes] * tail_w.value;
  double tail_err = variation * std::abs(tail_abs.value) + std::abs(means[nodes]) * tail_w.err;

  const cplx pref = std::exp((k + 1.0) * std::log(w)) / special::gamma_pos(1.0 + k);
  return {pref * (body + tail), std::abs(pref) * (body_err + tail_err)};
}

}  // namespace riesz
