#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "riesz/error.hpp"
#include "riesz/frequency.hpp"
#include "riesz/parallel.hpp"

namespace riesz {

using CoeffFn = std::function<cplx(std::size_t)>;

/// Formal series sum_n a_n e^{-lambda_n s}.
struct DirichletSeries {
  Frequency freq = Frequency::integer();
  CoeffFn coeff;
  std::string name;
};

/// A holomorphic function on Re s > 0 together with its Dirichlet series,
/// its growth order ell, and optional closed forms for f and for the
/// boundary function tau -> f*(i tau).
struct AnalyticTarget {
  DirichletSeries series;
  double order_ell = 0.0;
  std::function<cplx(cplx)> eval;
  std::function<cplx(double)> boundary;
  std::vector<double> singular_taus;

  bool has_eval() const noexcept { return static_cast<bool>(eval); }
  bool has_boundary() const noexcept { return static_cast<bool>(boundary); }
  bool is_singular(double tau, double radius = 1e-12) const {
    return std::any_of(singular_taus.begin(), singular_taus.end(),
                       [&](double p) { return std::abs(p - tau) <= radius; });
  }
};

struct ReportRecord {
  double x = 0.0;
  cplx point;
  cplx value;
  std::optional<cplx> reference;
  std::optional<double> abs_error;
  double quad_err = 0.0;
};

struct ConvergenceReport {
  std::vector<ReportRecord> records;
  std::vector<std::pair<double, double>> sup_error_per_x;
  std::map<std::string, std::string> notes;

  void sort_records() {
    std::stable_sort(records.begin(), records.end(), [](const ReportRecord& l, const ReportRecord& r) {
      if (l.x != r.x) return l.x < r.x;
      if (l.point.real() != r.point.real()) return l.point.real() < r.point.real();
      return l.point.imag() < r.point.imag();
    });
  }
};

/// Neumaier-compensated complex accumulator.
class CompensatedSum {
 public:
  void add(cplx v) {
    add_part(re_, cre_, v.real());
    add_part(im_, cim_, v.imag());
  }
  cplx value() const { return {re_ + cre_, im_ + cim_}; }

 private:
  static void add_part(double& sum, double& comp, double v) {
    double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double re_ = 0.0, cre_ = 0.0, im_ = 0.0, cim_ = 0.0;
};

// Riesz weight (1 - lambda/x)^k for lambda < x.
inline double riesz_weight(double lambda, double x, double k) {
  if (k == 0.0) return 1.0;
  double r = lambda / x;
  if (r > 0.9) return std::exp(k * std::log1p(-r));
  return std::pow(1.0 - r, k);
}

inline cplx exp_term(double lambda, cplx s) {
  if (lambda == 0.0) return {1.0, 0.0};
  return std::exp(-lambda * s);
}

/// sum_{n <= N} a_n e^{-lambda_n s}.
inline cplx eval_partial(const DirichletSeries& series, cplx s, std::size_t N) {
  if (N < 1) throw DomainError("eval_partial needs N >= 1");
  CompensatedSum acc;
  for (std::size_t n = 1; n <= N; ++n) acc.add(series.coeff(n) * exp_term(series.freq[n], s));
  return acc.value();
}

/// (lambda, k)-Riesz mean: sum_{lambda_n < x} a_n e^{-lambda_n s} (1 - lambda_n/x)^k.
inline cplx riesz_mean(const DirichletSeries& series, double k, double x, cplx s,
                       std::size_t max_terms = kDefaultMaxTerms) {
  if (!(k >= 0.0)) throw DomainError("Riesz order k must be non-negative");
  if (!(x > 0.0)) throw DomainError("Riesz cutoff x must be positive");
  CompensatedSum acc;
  series.freq.for_each_below(x, max_terms, [&](std::size_t n, double lambda) {
    acc.add(series.coeff(n) * exp_term(lambda, s) * riesz_weight(lambda, x, k));
  });
  return acc.value();
}

/// Series with coefficients a_n e^{-lambda_n s0}; its Riesz means at s equal
/// those of the original series at s + s0.
inline DirichletSeries translate(const DirichletSeries& series, cplx s0) {
  DirichletSeries out = series;
  out.coeff = [coeff = series.coeff, freq = series.freq, s0](std::size_t n) {
    return coeff(n) * exp_term(freq[n], s0);
  };
  out.name = series.name + "@shift";
  return out;
}

/// Closed-form value of the target at a point of Re s >= 0, if known:
/// boundary rule on the imaginary axis, eval rule inside.
inline std::optional<cplx> closed_form_value(const AnalyticTarget& target, cplx point) {
  if (point.real() < 0.0) return std::nullopt;
  if (point.real() == 0.0) {
    if (target.is_singular(point.imag())) return std::nullopt;
    if (target.has_boundary()) return target.boundary(point.imag());
    return std::nullopt;
  }
  if (target.has_eval()) return target.eval(point);
  return std::nullopt;
}

enum class Reference { ClosedForm, None };

/// Riesz means of the target's series at every (x, point), with errors
/// against the closed form when requested.
inline ConvergenceReport riesz_sweep(const AnalyticTarget& target, double k, const std::vector<cplx>& points,
                                     const std::vector<double>& xs, Reference reference,
                                     std::size_t max_terms = kDefaultMaxTerms) {
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i - 1] < xs[i])) throw DomainError("riesz_sweep needs strictly increasing xs");
  std::vector<std::optional<cplx>> refs(points.size());
  if (reference == Reference::ClosedForm) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      refs[i] = closed_form_value(target, points[i]);
      if (!refs[i])
        throw MissingReference("no closed-form value of " + target.series.name + " at " +
                               std::to_string(points[i].real()) + "+" + std::to_string(points[i].imag()) + "i");
    }
  }

  const std::size_t cells = xs.size() * points.size();
  std::vector<cplx> values(cells);
  // Large cutoffs first so the longest sums start early.
  parallel_for(cells, [&](std::size_t c) {
    std::size_t xi = xs.size() - 1 - c / points.size();
    std::size_t pi = c % points.size();
    values[xi * points.size() + pi] = riesz_mean(target.series, k, xs[xi], points[pi], max_terms);
  });

  ConvergenceReport report;
  for (std::size_t xi = 0; xi < xs.size(); ++xi) {
    double sup = 0.0;
    for (std::size_t pi = 0; pi < points.size(); ++pi) {
      ReportRecord rec;
      rec.x = xs[xi];
      rec.point = points[pi];
      rec.value = values[xi * points.size() + pi];
      if (refs[pi]) {
        rec.reference = refs[pi];
        rec.abs_error = std::abs(rec.value - *refs[pi]);
        sup = std::max(sup, *rec.abs_error);
      }
      report.records.push_back(rec);
    }
    if (reference == Reference::ClosedForm) report.sup_error_per_x.emplace_back(xs[xi], sup);
  }
  report.sort_records();
  return report;
}

struct HorizontalLimit {
  cplx value;
  double err = 0.0;
  bool converged = true;
  bool closed_form = false;
};

inline std::vector<double> default_eps_schedule() {
  std::vector<double> eps;
  for (int j = 3; j <= 12; ++j) eps.push_back(std::ldexp(1.0, -j));
  return eps;
}

/// f*(i tau) = lim_{eps -> 0} f(eps + i tau). Returns the closed form when the
/// target has one; otherwise first-order Richardson extrapolation of
/// f(eps + i tau) along the decreasing schedule.
inline HorizontalLimit horizontal_limit(const AnalyticTarget& target, double tau,
                                        const std::vector<double>& eps_schedule = default_eps_schedule(),
                                        double tolerance = 1e-6) {
  if (target.is_singular(tau)) throw NoEvalRule("tau is a declared singular point of " + target.series.name);
  if (target.has_boundary()) return {target.boundary(tau), 0.0, true, true};
  if (!target.has_eval()) throw NoEvalRule(target.series.name + " has no evaluation rule");
  if (eps_schedule.size() < 3) throw DomainError("eps schedule needs at least three entries");
  for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
    if (!(eps_schedule[i] > 0.0) || (i > 0 && !(eps_schedule[i] < eps_schedule[i - 1])))
      throw DomainError("eps schedule must be positive and decreasing");
  }
  std::vector<cplx> f;
  for (double e : eps_schedule) f.push_back(target.eval({e, tau}));
  std::vector<cplx> extrap;
  for (std::size_t i = 1; i < f.size(); ++i) {
    double e0 = eps_schedule[i - 1], e1 = eps_schedule[i];
    extrap.push_back((e0 * f[i] - e1 * f[i - 1]) / (e0 - e1));
  }
  double diff = std::abs(extrap.back() - extrap[extrap.size() - 2]);
  double tol = tolerance * std::max(1.0, std::abs(extrap.back()));
  if (diff > tol)
    throw ExtrapolationDiverged("horizontal limit extrapolants differ by " + std::to_string(diff));
  return {extrap.back(), diff, true, false};
}

/// Sup of |f(s)| / (1 + |s|)^ell over a fixed grid of Re s > 0, skipping a
/// neighbourhood of the declared singular points.
inline double growth_norm_estimate(const AnalyticTarget& target, double exclusion = 0.25) {
  if (!target.has_eval()) throw NoEvalRule(target.series.name + " has no evaluation rule");
  double sup = 0.0;
  for (double sigma : {1e-3, 1e-2, 0.1, 0.5, 1.0, 3.0, 10.0}) {
    for (int j = -200; j <= 200; ++j) {
      double tau = 0.25 * j;
      bool near = std::any_of(target.singular_taus.begin(), target.singular_taus.end(), [&](double p) {
        return std::abs(cplx(sigma, tau - p)) < exclusion;
      });
      if (near) continue;
      cplx s{sigma, tau};
      sup = std::max(sup, std::abs(target.eval(s)) / std::pow(1.0 + std::abs(s), target.order_ell));
    }
  }
  return sup;
}

}  // namespace riesz
