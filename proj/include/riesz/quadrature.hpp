#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <queue>
#include <utility>
#include <tuple>
#include <vector>

#include "riesz/error.hpp"

namespace riesz {

using ComplexFn = std::function<cplx(double)>;

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  int max_depth = 40;
  // |integrand(t)| <= M / |t|^(1 + tail_exponent) for large |t|.
  std::optional<double> tail_exponent;
  // Further powers T^-p expected in the truncation error of a window [-T, T].
  std::vector<double> extra_tail_exponents;
  // Angular frequency of the dominant oscillation e^{i w t}, if any.
  std::optional<double> oscillation;
  double initial_window = 8.0;
  int max_window_doublings = 18;
  std::size_t max_panels = 400'000;

  void validate() const {
    if (!(rel_tol >= 0.0) || !(abs_tol > 0.0)) throw DomainError("quadrature tolerances must be positive");
    if (max_depth < 1) throw DomainError("max_depth must be at least 1");
    if (tail_exponent && !(*tail_exponent > 0.0)) throw DomainError("tail exponent must be positive");
    if (oscillation && !(*oscillation > 0.0)) throw DomainError("oscillation frequency must be positive");
    if (!(initial_window > 0.0)) throw DomainError("initial window must be positive");
  }

  QuadratureSpec with_tail(double alpha) const {
    QuadratureSpec s = *this;
    s.tail_exponent = alpha;
    return s;
  }
  QuadratureSpec with_oscillation(double w) const {
    QuadratureSpec s = *this;
    s.oscillation = w;
    return s;
  }
};

// A value with its absolute error estimate.
struct Estimate {
  cplx value;
  double err = 0.0;
};

struct QuadResult {
  cplx value;
  double err = 0.0;
  std::size_t panels = 0;
  double max_seed_width = 0.0;  // widest panel of the initial partition
};

struct RealLineResult {
  cplx value;
  double err = 0.0;
  double window = 0.0;  // half-width of the last window integrated
};

namespace detail {

// Kronrod 15-point abscissae on [0, 1]; odd entries (1, 3, 5, 7) are the Gauss 7-point nodes.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEstimate {
  cplx value;
  double err;
  double floor;  // rounding-error part of err, 50 eps int |f|
};

// One G7-K15 panel with the QUADPACK error heuristic.
template <class Fn>
PanelEstimate gk15(Fn& fn, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<cplx, 15> fv;
  fv[7] = fn(center);
  for (int j = 0; j < 7; ++j) {
    double dx = half * kXgk[j];
    fv[j] = fn(center - dx);
    fv[14 - j] = fn(center + dx);
  }
  cplx kron = fv[7] * kWgk[7];
  cplx gauss = fv[7] * kWg[3];
  double resabs = std::abs(fv[7]) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    cplx pair = fv[j] + fv[14 - j];
    kron += pair * kWgk[j];
    resabs += (std::abs(fv[j]) + std::abs(fv[14 - j])) * kWgk[j];
    if (j % 2 == 1) gauss += pair * kWg[j / 2];
  }
  cplx mean = kron * 0.5;
  double resasc = std::abs(fv[7] - mean) * kWgk[7];
  for (int j = 0; j < 7; ++j) resasc += (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean)) * kWgk[j];

  const double ah = std::abs(half);
  kron *= half;
  gauss *= half;
  resabs *= ah;
  resasc *= ah;
  double err = std::abs(kron - gauss);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double floor = 0.0;
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    floor = 50.0 * eps * resabs;
    err = std::max(floor, err);
  }
  if (!std::isfinite(std::abs(kron))) err = std::numeric_limits<double>::infinity();
  return {kron, err, floor};
}

inline double tolerance(const QuadratureSpec& spec, cplx value) {
  return std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
}

}  // namespace detail

/// Globally adaptive G7-K15 integration of a complex-valued function over [a, b].
///
/// With an oscillation hint w the interval is first cut into panels no wider
/// than pi/(4w), so that e^{iwt} is never sampled only at its zeros. Panels
/// are bisected in order of decreasing error until the summed estimate
/// meets max(abs_tol, rel_tol*|value|). The rounding floor 50 eps int |f|
/// cannot be refined away and is not held against the tolerance, though it
/// stays in the reported error. Panel sums are accumulated in partition
/// order, so results are bit-reproducible.
inline QuadResult integrate_finite(const ComplexFn& fn, double a, double b, const QuadratureSpec& spec) {
  spec.validate();
  if (!(a < b)) throw DomainError("integrate_finite requires a < b");

  struct Panel {
    double a, b;
    cplx value;
    double err;
    double floor;
    int depth;
  };
  std::vector<Panel> panels;
  std::size_t seeds = 1;
  if (spec.oscillation) {
    double width = std::numbers::pi / (4.0 * *spec.oscillation);
    seeds = static_cast<std::size_t>(std::ceil((b - a) / width));
    seeds = std::max<std::size_t>(seeds, 1);
  }
  if (seeds > spec.max_panels)
    throw QuadratureFailed("oscillatory partition needs more than max_panels panels", cplx{}, INFINITY);
  panels.reserve(seeds * 2);

  auto local = fn;
  QuadResult out;
  out.max_seed_width = 0.0;
  for (std::size_t i = 0; i < seeds; ++i) {
    double pa = a + (b - a) * static_cast<double>(i) / static_cast<double>(seeds);
    double pb = (i + 1 == seeds) ? b : a + (b - a) * static_cast<double>(i + 1) / static_cast<double>(seeds);
    auto est = detail::gk15(local, pa, pb);
    panels.push_back({pa, pb, est.value, est.err, est.floor, 0});
    out.max_seed_width = std::max(out.max_seed_width, pb - pa);
  }

  auto cmp = [&](std::size_t l, std::size_t r) {
    return panels[l].err - panels[l].floor < panels[r].err - panels[r].floor;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> heap(cmp);
  cplx total{};
  double total_err = 0.0;
  double total_floor = 0.0;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    heap.push(i);
    total += panels[i].value;
    total_err += panels[i].err;
    total_floor += panels[i].floor;
  }

  std::size_t since_resum = 0;
  while (total_err - total_floor > detail::tolerance(spec, total)) {
    std::size_t worst = heap.top();
    Panel p = panels[worst];
    if (p.depth >= spec.max_depth || panels.size() + 1 > spec.max_panels || !std::isfinite(p.err)) {
      cplx v{};
      double e = 0.0;
      for (const auto& q : panels) {
        v += q.value;
        e += q.err;
      }
      throw QuadratureFailed("adaptive quadrature did not converge on [" + std::to_string(a) + ", " +
                                 std::to_string(b) + "]",
                             v, e);
    }
    heap.pop();
    double mid = 0.5 * (p.a + p.b);
    auto left = detail::gk15(local, p.a, mid);
    auto right = detail::gk15(local, mid, p.b);
    total += left.value + right.value - p.value;
    total_err += left.err + right.err - p.err;
    total_floor += left.floor + right.floor - p.floor;
    panels[worst] = {p.a, mid, left.value, left.err, left.floor, p.depth + 1};
    panels.push_back({mid, p.b, right.value, right.err, right.floor, p.depth + 1});
    heap.push(worst);
    heap.push(panels.size() - 1);
    if (++since_resum == 256) {
      // Incremental sums drift; refresh them.
      since_resum = 0;
      total = {};
      total_err = 0.0;
      total_floor = 0.0;
      for (const auto& q : panels) {
        total += q.value;
        total_err += q.err;
        total_floor += q.floor;
      }
    }
  }

  std::sort(panels.begin(), panels.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
  cplx sum{};
  double err = 0.0;
  for (const auto& q : panels) {
    sum += q.value;
    err += q.err;
  }
  out.value = sum;
  out.err = err;
  out.panels = panels.size();
  return out;
}

namespace detail {

// Smooth step: 1 on [0, 1], 0 on [2, inf), C-infinity in between.
inline double smooth_cutoff(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  double u = r - 1.0;
  double a = std::exp(-1.0 / (1.0 - u));
  double b = std::exp(-1.0 / u);
  return a / (a + b);
}

// Richardson extrapolation in the window size T -> 2T with known error
// exponents. `level(j, tol)` returns the windowed integral at T = t0 2^j,
// the quadrature error of the central window (common to every level, so not
// amplified by the extrapolation) and the accumulated error of the rest.
template <class Level>
RealLineResult extrapolate_windows(Level&& level, double t0, const QuadratureSpec& spec) {
  std::vector<double> exps = {*spec.tail_exponent, *spec.tail_exponent + 1.0, *spec.tail_exponent + 2.0};
  for (double p : spec.extra_tail_exponents)
    if (p > 0.0) exps.push_back(p);
  std::sort(exps.begin(), exps.end());
  exps.erase(std::unique(exps.begin(), exps.end(), [](double l, double r) { return std::abs(l - r) < 1e-9; }),
             exps.end());
  double amplification = 1.0;
  for (double p : exps) amplification *= (std::pow(2.0, p) + 1.0) / (std::pow(2.0, p) - 1.0);

  std::vector<std::vector<cplx>> table;  // table[j][m]
  std::vector<double> prev_diff(exps.size() + 1, INFINITY);
  std::vector<double> prev2_diff(exps.size() + 1, INFINITY);
  cplx latest{};
  cplx best{};
  double best_err = INFINITY;
  for (int j = 0; j <= spec.max_window_doublings; ++j) {
    // Geometric budget: all levels together use at most a quarter of the tolerance.
    double level_tol =
        std::ldexp(std::max(spec.abs_tol, spec.rel_tol * std::abs(latest)) / (8.0 * amplification), -j);
    auto [value, common_err, level_err] = level(j, level_tol);
    latest = value;
    const double window = t0 * std::ldexp(1.0, j);

    std::vector<cplx> row{value};
    std::size_t levels = std::min<std::size_t>(static_cast<std::size_t>(j), exps.size());
    for (std::size_t m = 1; m <= levels; ++m) {
      double f = std::pow(2.0, exps[m - 1]);
      row.push_back((f * row[m - 1] - table[j - 1][m - 1]) / (f - 1.0));
    }
    if (j >= 1) {
      // Column m still carries a T^-p error with p the first exponent it
      // has not eliminated. Tails that are not power series defeat the
      // higher columns, so the column with the smallest error bound wins.
      best_err = INFINITY;
      for (std::size_t m = 0; m < row.size() && m < table[j - 1].size(); ++m) {
        double diff = std::abs(row[m] - table[j - 1][m]);
        double p = m < exps.size() ? exps[m] : exps.back() + 1.0;
        double rate = std::pow(2.0, p);
        // A column contracting at its expected rate over two doublings has
        // remaining error about diff / (rate - 1); allow a factor of two.
        bool contracting = std::isfinite(prev2_diff[m]) && diff <= 2.0 * prev_diff[m] / rate &&
                           prev_diff[m] <= 2.0 * prev2_diff[m] / rate;
        double bound = contracting ? 2.0 * diff / (rate - 1.0)
                                   : std::max(diff, prev_diff[m]) * std::max(1.0, 1.0 / (rate - 1.0));
        prev2_diff[m] = prev_diff[m];
        prev_diff[m] = diff;
        if (bound < best_err) {
          best_err = bound;
          best = row[m];
        }
      }
      double err = best_err + common_err + level_err * amplification;
      if (j >= 2 && err <= tolerance(spec, best)) return {best, err, window};
      if (j == spec.max_window_doublings)
        throw QuadratureFailed("window extrapolation did not converge up to T=" + std::to_string(window), best, err);
    }
    table.push_back(std::move(row));
  }
  throw QuadratureFailed("window extrapolation did not converge", best, INFINITY);
}

inline double aligned_window(const QuadratureSpec& spec, double t0) {
  if (!spec.oscillation) return t0;
  double period = 2.0 * std::numbers::pi / *spec.oscillation;
  return std::ceil(t0 / period) * period;
}

// Windowed integrals I_j = int fn(t) phi(|t - c| / T_j) dt over the side(s)
// of c, built incrementally: the plain integral over |t - c| < T_j plus the
// smoothed shell T_j < |t - c| < 2 T_j.
template <class Fn>
RealLineResult windowed_extrapolation(const Fn& fn, double center, bool both_sides, const QuadratureSpec& spec) {
  const double t0 = aligned_window(spec, spec.initial_window);
  cplx plain{};
  double common_err = 0.0;
  double plain_err = 0.0;
  double shell_err = 0.0;
  auto side_integral = [&](const ComplexFn& g, double lo, double hi, const QuadratureSpec& piece) {
    auto r = integrate_finite([&](double r_) { return g(center + r_); }, lo, hi, piece);
    if (!both_sides) return std::pair{r.value, r.err};
    auto l = integrate_finite([&](double r_) { return g(center - r_); }, lo, hi, piece);
    return std::pair{r.value + l.value, r.err + l.err};
  };
  auto level = [&](int j, double tol) -> std::tuple<cplx, double, double> {
    QuadratureSpec piece = spec;
    piece.abs_tol = tol / 2.0;
    piece.rel_tol = j == 0 ? spec.rel_tol / 8.0 : 0.0;
    const double inner = t0 * std::ldexp(1.0, j - 1);
    const double window = t0 * std::ldexp(1.0, j);
    auto [p, pe] = side_integral(fn, j == 0 ? 0.0 : inner, window, piece);
    plain += p;
    (j == 0 ? common_err : plain_err) += pe;
    piece.rel_tol = 0.0;
    auto [sh, she] = side_integral(
        [&](double t) { return fn(t) * smooth_cutoff(std::abs(t - center) / window); }, window, 2.0 * window, piece);
    shell_err += she;
    return {plain + sh, common_err, plain_err + shell_err};
  };
  return extrapolate_windows(level, t0, spec);
}

}  // namespace detail

/// Integral of fn over the whole real line.
///
/// The integrand is cut off smoothly, fn(t) phi(|t - c| / T) with phi = 1 on
/// [0, 1] and 0 beyond 2, for T = T0, 2 T0, 4 T0, ... Oscillating parts of
/// the tail then contribute almost nothing, and the rest of the truncation
/// error is a sum of powers T^-p with p drawn from tail_exponent,
/// tail_exponent + 1, tail_exponent + 2 and the extra exponents, removed by
/// Richardson extrapolation. The error estimate combines the spread of the
/// last extrapolants with the amplified quadrature error.
inline RealLineResult integrate_real_line(const ComplexFn& fn, const QuadratureSpec& spec, double center = 0.0) {
  spec.validate();
  if (!spec.tail_exponent) throw TailHintMissing("integrate_real_line needs a tail exponent");
  return detail::windowed_extrapolation(fn, center, true, spec);
}

/// Integral of fn over [a, +inf), same extrapolation scheme as the real line.
inline RealLineResult integrate_half_line(const ComplexFn& fn, double a, const QuadratureSpec& spec) {
  spec.validate();
  if (!spec.tail_exponent) throw TailHintMissing("integrate_half_line needs a tail exponent");
  return detail::windowed_extrapolation(fn, a, false, spec);
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t n) {
  if (n == 0) throw DomainError("Gauss-Legendre rule needs at least one node");
  std::vector<double> x(n), w(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (std::size_t k = 2; k <= n; ++k) {
        double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
      double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0, p1 = z;
    for (std::size_t k = 2; k <= n; ++k) {
      double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / static_cast<double>(k);
      p0 = p1;
      p1 = pk;
    }
    dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

}  // namespace riesz
