#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "riesz/error.hpp"
#include "riesz/kernels.hpp"
#include "riesz/parallel.hpp"
#include "riesz/perron.hpp"
#include "riesz/quadrature.hpp"
#include "riesz/series.hpp"
#include "riesz/targets.hpp"

namespace riesz {

struct ExperimentConfig {
  std::string target = "const1";
  std::vector<cplx> coeffs;  // inline polynomial, used when non-empty
  std::vector<double> freqs;
  double k = 1.0;
  std::optional<double> ell;  // defaults to the target's growth order
  double interval_lo = 0.0;
  double interval_hi = 1.0;
  std::size_t tau_grid_size = 2;
  std::vector<double> xs;
  double delta = 0.5;
  std::uint64_t seed = 0;
  QuadratureSpec quadrature;
  std::string output;

  AnalyticTarget make_target() const {
    AnalyticTarget t = coeffs.empty() ? targets::by_name(target) : targets::polynomial(coeffs, freqs, "inline");
    if (ell) t.order_ell = *ell;
    return t;
  }

  double order_ell() const { return ell ? *ell : make_target().order_ell; }

  // k > ell is needed by the kernel-based experiments only; direct
  // summation sweeps accept any k >= 0.
  void validate(bool require_k_above_ell = true) const {
    if (!coeffs.empty() && coeffs.size() != freqs.size())
      throw DomainError("inline target needs as many coefficients as frequencies");
    if (coeffs.empty() && !freqs.empty()) throw DomainError("frequencies given without coefficients");
    if (!(k >= 0.0)) throw DomainError("experiment needs k >= 0");
    if (require_k_above_ell && !(k > order_ell())) throw DomainError("experiment needs k > ell");
    if (tau_grid_size < 2) throw DomainError("tau grid needs at least two points");
    if (!(interval_lo <= interval_hi)) throw DomainError("interval must satisfy a <= b");
    for (std::size_t i = 1; i < xs.size(); ++i)
      if (!(xs[i - 1] < xs[i])) throw DomainError("xs must be strictly increasing");
    quadrature.validate();
  }

  std::vector<double> tau_grid() const {
    std::vector<double> g(tau_grid_size);
    for (std::size_t i = 0; i < tau_grid_size; ++i)
      g[i] = interval_lo + (interval_hi - interval_lo) * static_cast<double>(i) / static_cast<double>(tau_grid_size - 1);
    return g;
  }
};

/// True when the sequence decreases except for at most `allowed` adjacent
/// pairs that do not.
inline bool decreasing_except(const std::vector<double>& v, std::size_t allowed = 1) {
  std::size_t bad = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) ++bad;
  return bad <= allowed;
}

inline bool strictly_decreasing(const std::vector<double>& v) { return decreasing_except(v, 0); }

struct FourierCheck {
  cplx value;
  double err = 0.0;
  double deviation = 0.0;  // |value - 1|
};

/// int e^{iy} K^k(y) dy, which equals 1 for every k > 0.
inline FourierCheck kernel_fourier_check(double k, const QuadratureSpec& quad) {
  if (!(k > 0.0)) throw DomainError("kernel_fourier_check needs k > 0");
  QuadratureSpec q = quad;
  q.tail_exponent = k;
  q.oscillation = 1.0;
  auto r = integrate_real_line([&](double y) { return std::exp(cplx{0.0, y}) * riesz_kernel(k, y); }, q);
  return {r.value, r.err, std::abs(r.value - 1.0)};
}

struct TailMass {
  double x = 0.0;
  double mass = 0.0;
  double err = 0.0;
  double reference_bound = 0.0;  // int_{|t| > delta x} |1 + it|^{-(1+k-ell)} dt
};

struct TailMassReport {
  std::vector<TailMass> rows;
  bool strictly_decreasing = false;
};

/// int_{|t| > a} (1 + t^2)^{-p/2} dt for p > 1.
inline double power_tail(double a, double p, const QuadratureSpec& quad) {
  QuadratureSpec q = quad;
  q.tail_exponent = p - 1.0;
  q.oscillation.reset();
  q.extra_tail_exponents.clear();
  q.initial_window = std::max(1.0, a);
  auto r = integrate_half_line([&](double t) { return cplx{std::pow(1.0 + t * t, -0.5 * p), 0.0}; }, a, q);
  return 2.0 * r.value.real();
}

/// int_{|y| > delta} |R^{k,ell}(x, y)| dy for each x.
inline TailMassReport kernel_tail_mass(double k, double ell, double delta, const std::vector<double>& xs,
                                       const QuadratureSpec& quad) {
  if (!(ell >= 0.0) || !(k > ell)) throw DomainError("kernel_tail_mass needs k > ell >= 0");
  if (!(delta > 0.0)) throw DomainError("kernel_tail_mass needs delta > 0");
  for (double x : xs)
    if (!(x > 1.0)) throw DomainError("kernel_tail_mass needs x > 1");
  TailMassReport report;
  report.rows.resize(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    const double x = xs[i];
    RasmusKernel kernel({k, ell, x}, quad);
    QuadratureSpec q = quad;
    // |R| = |A e^{ixy} + B| with A ~ y^{-(1+alpha)} and B ~ y^{-2}; averaging
    // the modulus over the oscillation leaves powers of |B/A|^2.
    const double alpha = k - ell;
    q.tail_exponent = alpha;
    q.extra_tail_exponents = {1.0};
    if (alpha < 1.0) {
      q.extra_tail_exponents.push_back(alpha + 2.0 * (1.0 - alpha));
      q.extra_tail_exponents.push_back(alpha + 4.0 * (1.0 - alpha));
    }
    q.oscillation = x;
    q.initial_window = std::max(quad.initial_window, delta);
    double kernel_err = 0.0;
    auto side = [&](double sign) {
      auto r = integrate_half_line(
          [&](double y) {
            auto v = kernel.evaluate(sign * y);
            kernel_err = std::max(kernel_err, v.err);
            return cplx{std::abs(v.value), 0.0};
          },
          delta, q);
      return std::pair{r.value.real(), r.err + kernel_err * 2.0 * r.window};
    };
    auto [right, right_err] = side(1.0);
    auto [left, left_err] = side(-1.0);
    report.rows[i] = {x, right + left, right_err + left_err, power_tail(delta * x, 1.0 + k - ell, quad)};
  });
  std::vector<double> masses;
  for (const auto& r : report.rows) masses.push_back(r.mass);
  report.strictly_decreasing = strictly_decreasing(masses);
  return report;
}

/// Riesz means of the configured target at i tau over the tau grid, against
/// the closed-form boundary function.
inline ConvergenceReport boundary_sweep(const ExperimentConfig& config,
                                        std::size_t max_terms = kDefaultMaxTerms) {
  config.validate(false);
  AnalyticTarget target = config.make_target();
  std::vector<cplx> points;
  for (double tau : config.tau_grid()) points.emplace_back(0.0, tau);
  ConvergenceReport report = riesz_sweep(target, config.k, points, config.xs, Reference::ClosedForm, max_terms);
  std::vector<double> sups;
  for (const auto& [x, e] : report.sup_error_per_x) sups.push_back(e);
  std::size_t bad = 0;
  for (std::size_t i = 1; i < sups.size(); ++i)
    if (!(sups[i] < sups[i - 1])) ++bad;
  report.notes["target"] = target.series.name;
  report.notes["non_monotone_steps"] = std::to_string(bad);
  report.notes["decreasing"] = bad <= 1 ? "true" : "false";
  return report;
}

struct DiniReport {
  double integral = 0.0;
  double err = 0.0;
  bool divergent = false;
  std::size_t levels = 0;
  std::vector<std::pair<double, double>> riesz_errors;  // (x, |R_x(i tau) - f*(i tau)|)
  bool errors_decreasing = false;
};

/// Dini integral int_{-delta}^{delta} |f*(i(y+tau)) - f*(i tau)| / |y|^{1+k-ell} dy
/// together with the Riesz-mean errors at tau.
///
/// The integral is summed over dyadic shells delta 2^{-j-1} < |y| < delta 2^{-j}.
/// Once the shells shrink geometrically the remainder is either below
/// tolerance or, when the ratio has settled, added as a geometric series.
/// The integral is declared divergent when the running
/// sum passes `cap` or eight consecutive shells fail to shrink.
inline DiniReport dini_check(const AnalyticTarget& target, double tau, double delta, double k, double ell,
                             const std::vector<double>& xs, const QuadratureSpec& quad, double cap = 1e8,
                             int max_levels = 60) {
  if (!(k > ell)) throw DomainError("dini_check needs k > ell");
  if (!(delta > 0.0)) throw DomainError("dini_check needs delta > 0");
  const cplx base = boundary_value(target, tau).value;
  const double p = 1.0 + k - ell;
  auto integrand = [&](double y) {
    return cplx{std::abs(boundary_value(target, tau + y).value - base) / std::pow(std::abs(y), p), 0.0};
  };
  QuadratureSpec q = quad;
  q.oscillation.reset();

  DiniReport report;
  double sum = 0.0, quad_err = 0.0, prev = -1.0, prev_ratio = -1.0;
  int growing = 0, shrinking = 0, zero = 0;
  for (int j = 0; j < max_levels; ++j) {
    const double hi = std::ldexp(delta, -j), lo = 0.5 * hi;
    auto r = integrate_finite(integrand, lo, hi, q);
    auto l = integrate_finite([&](double y) { return integrand(-y); }, lo, hi, q);
    const double c = r.value.real() + l.value.real();
    sum += c;
    quad_err += r.err + l.err;
    report.levels = static_cast<std::size_t>(j + 1);
    if (sum > cap) {
      report.divergent = true;
      break;
    }
    if (c == 0.0) {
      if (++zero >= 4) break;
      continue;
    }
    zero = 0;
    if (prev > 0.0) {
      const double ratio = c / prev;
      if (ratio >= 1.0) {
        shrinking = 0;
        if (++growing >= 8) {
          report.divergent = true;
          break;
        }
      } else {
        growing = 0;
        ++shrinking;
        // Geometric projection of the shells not yet summed.
        const double remainder = c * ratio / (1.0 - ratio);
        const double drift = prev_ratio > 0.0 ? std::abs(ratio - prev_ratio) : 1.0;
        if (shrinking >= 3 && ratio < 0.95) {
          if (remainder <= detail::tolerance(quad, cplx{sum, 0.0})) {
            report.err = remainder;
            break;
          }
          if (drift <= 1e-3 * (1.0 - ratio)) {
            sum += remainder;
            report.err = c * std::max(drift, 1e-6) / ((1.0 - ratio) * (1.0 - ratio));
            break;
          }
        }
      }
      prev_ratio = ratio;
    }
    prev = c;
    if (j + 1 == max_levels) report.divergent = true;
  }
  report.integral = sum;
  report.err += quad_err;

  report.riesz_errors.resize(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    report.riesz_errors[i] = {xs[i], std::abs(riesz_mean(target.series, k, xs[i], {0.0, tau}) - base)};
  });
  std::vector<double> errs;
  for (const auto& [x, e] : report.riesz_errors) errs.push_back(e);
  report.errors_decreasing = decreasing_except(errs, 1);
  return report;
}

namespace detail {

// int over |y| >= delta (tail) or |y| < delta (near part) of
// f*(iy) / (1 + iy)^ell R^{k,ell}(x, y).
inline Estimate localization_part(const AnalyticTarget& target, double k, double ell, double delta, double x,
                                  const QuadratureSpec& quad, bool tail) {
  RasmusKernel kernel({k, ell, x}, quad);
  double ingredient = 0.0;
  auto integrand = [&](double y) {
    auto b = boundary_value(target, y);
    auto r = kernel.evaluate(y);
    cplx w = one_plus_iy_pow(y, -ell);
    ingredient = std::max(ingredient, b.err * std::abs(w * r.value) + std::abs(b.value * w) * r.err);
    return b.value * w * r.value;
  };
  QuadratureSpec q = quad;
  q.oscillation = x;
  if (!tail) {
    auto r = integrate_finite(integrand, -delta, delta, q);
    return {r.value, r.err + ingredient * 2.0 * delta};
  }
  q.tail_exponent = k - ell;
  q.extra_tail_exponents = {1.0, 2.0};
  q.initial_window = std::max(quad.initial_window, delta);
  auto right = integrate_half_line(integrand, delta, q);
  auto left = integrate_half_line([&](double y) { return integrand(-y); }, delta, q);
  double window = std::max(right.window, left.window);
  return {right.value + left.value, right.err + left.err + ingredient * 2.0 * window};
}

}  // namespace detail

inline Estimate localization_near(const AnalyticTarget& target, double k, double ell, double delta, double x,
                                  const QuadratureSpec& quad) {
  return detail::localization_part(target, k, ell, delta, x, quad, false);
}

struct LocalizationRow {
  double x = 0.0;
  cplx tail;
  double magnitude = 0.0;
  double err = 0.0;
};

struct LocalizationReport {
  std::vector<LocalizationRow> rows;
  bool decreasing = false;
};

/// |int_{|y| >= delta} f*(iy) R^{k,ell}(x, y) / (1 + iy)^ell dy| for each x.
inline LocalizationReport localization_tail(const AnalyticTarget& target, double k, double ell, double delta,
                                            const std::vector<double>& xs, const QuadratureSpec& quad) {
  if (!(ell >= 0.0) || !(k > ell)) throw DomainError("localization_tail needs k > ell >= 0");
  if (!(delta > 0.0)) throw DomainError("localization_tail needs delta > 0");
  if (!target.has_boundary() && !target.has_eval()) throw NoBoundaryRule(target.series.name + " has no boundary rule");
  LocalizationReport report;
  report.rows.resize(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    auto t = detail::localization_part(target, k, ell, delta, xs[i], quad, true);
    report.rows[i] = {xs[i], t.value, std::abs(t.value), t.err};
  });
  std::vector<double> mags;
  for (const auto& r : report.rows) mags.push_back(r.magnitude);
  report.decreasing = strictly_decreasing(mags);
  return report;
}

namespace detail {

// Smallest prime factor of every n <= limit, and the primes, by a linear sieve.
struct Sieve {
  std::vector<std::uint32_t> spf;
  std::vector<std::uint32_t> primes;

  explicit Sieve(std::size_t limit) : spf(limit + 1, 0) {
    for (std::size_t i = 2; i <= limit; ++i) {
      if (spf[i] == 0) {
        spf[i] = static_cast<std::uint32_t>(i);
        primes.push_back(static_cast<std::uint32_t>(i));
      }
      for (std::uint32_t p : primes) {
        if (p > spf[i] || i * p > limit) break;
        spf[i * p] = p;
      }
    }
  }
};

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform on [0, 1) from the top 53 bits, identical on every platform.
inline double unit_uniform(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

inline double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  return v[static_cast<std::size_t>(std::floor(q * static_cast<double>(v.size() - 1)))];
}

}  // namespace detail

struct OscQuantiles {
  double q10 = 0.0;
  double median = 0.0;
  double q90 = 0.0;
};

struct VerticalMcReport {
  std::vector<std::size_t> schedule;
  std::vector<double> taus;
  // osc[s][t][m] = max_{M <= N <= N_max} |S_N - S_M| with M = schedule[m],
  // for sample s and tau index t; m runs over all but the last schedule entry.
  std::vector<std::vector<std::vector<double>>> osc;
  std::vector<std::vector<OscQuantiles>> quantiles;  // [t][m]
  double fraction_decreasing = 0.0;          // osc strictly decreasing in M for every tau
  double fraction_last_below_first = 0.0;    // osc(last M) < osc(first M) for every tau
  std::vector<std::vector<cplx>> trivial_sums;  // [t][m]: S_N for chi = 1 at N = schedule[m]
  std::vector<bool> trivial_divergent;          // [t]
  std::map<std::string, std::string> notes;
};

/// Tail oscillation of the vertical limits sum_{n <= N} a_n chi(n) n^{-i tau}
/// for characters chi drawn uniformly: chi(p) = e^{2 pi i theta_p} on primes,
/// extended completely multiplicatively. Sample s uses its own generator
/// seeded from (seed, s), so results do not depend on the worker count.
inline VerticalMcReport vertical_limit_mc(const CoeffFn& coeffs, const std::vector<double>& taus,
                                          const std::vector<std::size_t>& schedule, std::size_t samples,
                                          std::uint64_t seed) {
  if (samples < 1) throw DomainError("vertical_limit_mc needs at least one sample");
  if (schedule.size() < 2 || schedule.front() < 1) throw DomainError("N schedule needs two entries >= 1");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (!(schedule[i - 1] < schedule[i])) throw DomainError("N schedule must be strictly increasing");
  if (taus.empty()) throw DomainError("vertical_limit_mc needs at least one tau");

  const std::size_t n_max = schedule.back();
  const std::size_t n_osc = schedule.size() - 1;
  const detail::Sieve sieve(n_max);
  std::vector<cplx> a(n_max + 1);
  for (std::size_t n = 1; n <= n_max; ++n) a[n] = coeffs(n);
  // a_n n^{-i tau}, shared by all samples.
  std::vector<std::vector<cplx>> twisted(taus.size(), std::vector<cplx>(n_max + 1));
  for (std::size_t t = 0; t < taus.size(); ++t)
    for (std::size_t n = 1; n <= n_max; ++n)
      twisted[t][n] = a[n] * std::exp(cplx{0.0, -taus[t] * std::log(static_cast<double>(n))});

  // Partial sums S_N for N = 1..n_max -> (S at schedule points, oscillations).
  auto analyse = [&](const std::vector<cplx>& terms, std::vector<cplx>* at_schedule) {
    std::vector<cplx> s(n_max + 1);
    for (std::size_t n = 1; n <= n_max; ++n) s[n] = s[n - 1] + terms[n];
    std::vector<double> osc(n_osc, 0.0);
    for (std::size_t m = 0; m < n_osc; ++m) {
      const cplx ref = s[schedule[m]];
      for (std::size_t n = schedule[m]; n <= n_max; ++n) osc[m] = std::max(osc[m], std::abs(s[n] - ref));
    }
    if (at_schedule)
      for (std::size_t N : schedule) at_schedule->push_back(s[N]);
    return osc;
  };

  VerticalMcReport report;
  report.schedule = schedule;
  report.taus = taus;
  report.osc.assign(samples, {});
  parallel_for(samples, [&](std::size_t smp) {
    std::mt19937_64 gen(detail::splitmix64(seed ^ detail::splitmix64(smp)));
    std::vector<cplx> chi(n_max + 1);
    if (n_max >= 1) chi[1] = 1.0;
    for (std::uint32_t p : sieve.primes) chi[p] = std::polar(1.0, 2.0 * std::numbers::pi * detail::unit_uniform(gen));
    for (std::size_t n = 2; n <= n_max; ++n)
      if (sieve.spf[n] != n) chi[n] = chi[sieve.spf[n]] * chi[n / sieve.spf[n]];
    std::vector<cplx> terms(n_max + 1);
    for (std::size_t t = 0; t < taus.size(); ++t) {
      for (std::size_t n = 1; n <= n_max; ++n) terms[n] = twisted[t][n] * chi[n];
      report.osc[smp].push_back(analyse(terms, nullptr));
    }
  });

  report.quantiles.assign(taus.size(), std::vector<OscQuantiles>(n_osc));
  for (std::size_t t = 0; t < taus.size(); ++t) {
    for (std::size_t m = 0; m < n_osc; ++m) {
      std::vector<double> v;
      for (std::size_t smp = 0; smp < samples; ++smp) v.push_back(report.osc[smp][t][m]);
      report.quantiles[t][m] = {detail::quantile(v, 0.1), detail::quantile(v, 0.5), detail::quantile(v, 0.9)};
    }
  }
  std::size_t decreasing = 0, last_below = 0;
  for (std::size_t smp = 0; smp < samples; ++smp) {
    bool dec = true, below = true;
    for (std::size_t t = 0; t < taus.size(); ++t) {
      dec = dec && strictly_decreasing(report.osc[smp][t]);
      below = below && report.osc[smp][t].back() < report.osc[smp][t].front();
    }
    decreasing += dec;
    last_below += below;
  }
  report.fraction_decreasing = static_cast<double>(decreasing) / static_cast<double>(samples);
  report.fraction_last_below_first = static_cast<double>(last_below) / static_cast<double>(samples);

  for (std::size_t t = 0; t < taus.size(); ++t) {
    std::vector<cplx> at;
    analyse(twisted[t], &at);
    // Harmonic-type growth: increments between schedule points do not die out.
    const double first = std::abs(at[1] - at[0]);
    const double last = std::abs(at.back() - at[at.size() - 2]);
    report.trivial_divergent.push_back(first > 0.0 && last > 0.5 * first);
    report.trivial_sums.push_back(std::move(at));
  }
  report.notes["cutoff"] = "partial sums run over n <= N";
  report.notes["oscillation"] = "max over every N in [M, N_max], not only schedule points";
  report.notes["seed"] = std::to_string(seed);
  return report;
}

}  // namespace riesz
