#pragma once

// Seeded random property checks shared by the unit suite and the acceptance
// runner. Each check returns the number of failing cases and the first one.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "riesz/frequency.hpp"
#include "riesz/kernels.hpp"
#include "riesz/quadrature.hpp"
#include "riesz/series.hpp"
#include "riesz/targets.hpp"

namespace riesz::props {

struct Outcome {
  int cases = 0;
  int failures = 0;
  std::string first;

  bool ok() const { return failures == 0; }
  void fail(const std::string& what) {
    if (failures++ == 0) first = what;
  }
};

inline constexpr std::uint64_t kSeed = 20240611;

namespace detail {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline cplx in_disc(std::mt19937_64& rng) {
  double r = std::sqrt(uniform(rng, 0.0, 1.0));
  double a = uniform(rng, -std::numbers::pi, std::numbers::pi);
  return std::polar(r, a);
}

inline Frequency random_frequency(std::mt19937_64& rng) {
  switch (rng() % 3) {
    case 0: return Frequency::integer();
    case 1: return Frequency::log_integer();
    default: {
      std::vector<double> v;
      double lam = uniform(rng, 0.0, 0.5);
      for (int j = 0; j < 40; ++j) {
        v.push_back(lam);
        lam += uniform(rng, 0.01, 1.0);
      }
      return Frequency::explicit_values(v);
    }
  }
}

// Random coefficients a_n from a table indexed by n; beyond the table a_n = 1/n.
inline DirichletSeries random_series(std::mt19937_64& rng) {
  auto table = std::make_shared<std::vector<cplx>>();
  for (int j = 0; j < 64; ++j) table->push_back(in_disc(rng));
  return {random_frequency(rng),
          [table](std::size_t n) { return n <= table->size() ? (*table)[n - 1] : cplx{1.0 / static_cast<double>(n)}; },
          "random"};
}

inline double cutoff_for(const Frequency& f, std::mt19937_64& rng) {
  return f.kind() == FrequencyKind::LogInteger ? uniform(rng, 0.1, 6.0) : uniform(rng, 0.1, 30.0);
}

}  // namespace detail

/// terms_below(x1) is a prefix of terms_below(x2), frequencies strictly
/// increase and every enumerated lambda is below the cutoff.
inline Outcome frequency_monotonicity(int cases, std::uint64_t seed = kSeed) {
  std::mt19937_64 rng(seed);
  Outcome o;
  for (int i = 0; i < cases; ++i, ++o.cases) {
    Frequency f = detail::random_frequency(rng);
    double x1 = detail::cutoff_for(f, rng), x2 = detail::cutoff_for(f, rng);
    if (x1 > x2) std::swap(x1, x2);
    auto a = terms_below(f, x1), b = terms_below(f, x2);
    bool ok = a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
    for (std::size_t j = 0; j < b.size(); ++j) {
      ok = ok && b[j].index == j + 1 && b[j].lambda < x2;
      if (j > 0) ok = ok && b[j].lambda > b[j - 1].lambda;
    }
    if (!ok) o.fail("case " + std::to_string(i));
  }
  return o;
}

/// riesz_mean at k = 0 is bit-identical to the partial sum over the same terms.
inline Outcome k_zero_consistency(int cases, std::uint64_t seed = kSeed) {
  std::mt19937_64 rng(seed + 1);
  Outcome o;
  for (int i = 0; i < cases; ++i, ++o.cases) {
    auto s = detail::random_series(rng);
    double x = detail::cutoff_for(s.freq, rng);
    cplx point{detail::uniform(rng, 0.0, 2.0), detail::uniform(rng, -20.0, 20.0)};
    std::size_t N = s.freq.count_below(x);
    if (N == 0) {
      if (riesz_mean(s, 0.0, x, point) != cplx{}) o.fail("empty case " + std::to_string(i));
      continue;
    }
    if (riesz_mean(s, 0.0, x, point) != eval_partial(s, point, N)) o.fail("case " + std::to_string(i));
  }
  return o;
}

/// R_x(a)(s + s0) = R_x(a e^{-lambda s0})(s), relative to the l1 size of the terms.
inline Outcome translation_identity(int cases, std::uint64_t seed = kSeed) {
  std::mt19937_64 rng(seed + 2);
  Outcome o;
  for (int i = 0; i < cases; ++i, ++o.cases) {
    auto s = detail::random_series(rng);
    double x = detail::cutoff_for(s.freq, rng);
    double k = detail::uniform(rng, 0.0, 3.0);
    cplx point{detail::uniform(rng, 0.0, 1.0), detail::uniform(rng, -10.0, 10.0)};
    cplx s0{detail::uniform(rng, 0.0, 1.0), detail::uniform(rng, -10.0, 10.0)};
    cplx lhs = riesz_mean(s, k, x, point + s0);
    cplx rhs = riesz_mean(translate(s, s0), k, x, point);
    double scale = 0.0;
    s.freq.for_each_below(x, kDefaultMaxTerms, [&](std::size_t n, double lam) {
      scale += std::abs(s.coeff(n) * exp_term(lam, point + s0));
    });
    if (std::abs(lhs - rhs) > 1e-12 * std::max(scale, 1e-300)) {
      std::ostringstream msg;
      msg << "case " << i << ": |diff| = " << std::abs(lhs - rhs) << " scale " << scale;
      o.fail(msg.str());
    }
  }
  return o;
}

/// K^k(-y) = conj K^k(y), K_x^k likewise, P_u(-t) = P_u(t) and the
/// boundary kernel R^{k,ell}(x, -y) = conj R^{k,ell}(x, y).
inline Outcome kernel_conjugate_symmetry(int cases, std::uint64_t seed = kSeed) {
  std::mt19937_64 rng(seed + 3);
  Outcome o;
  QuadratureSpec q;
  q.rel_tol = 1e-8;
  q.abs_tol = 1e-10;
  for (int i = 0; i < cases; ++i, ++o.cases) {
    double k = detail::uniform(rng, 0.1, 3.0);
    double y = detail::uniform(rng, -50.0, 50.0);
    double x = detail::uniform(rng, 1.5, 50.0);
    double u = detail::uniform(rng, 0.01, 5.0);
    auto close = [](cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(a)); };
    bool ok = close(riesz_kernel(k, -y), std::conj(riesz_kernel(k, y)), 1e-15) &&
              close(scaled_riesz_kernel(k, x, -y), std::conj(scaled_riesz_kernel(k, x, y)), 1e-15) &&
              poisson(u, -y) == poisson(u, y);
    if (i % 10 == 0) {
      // The boundary kernel is an integral; compare within its error estimates.
      double ell = detail::uniform(rng, 0.0, 0.9) * k;
      RasmusKernel r({k, ell, x}, q);
      double yy = detail::uniform(rng, -3.0, 3.0);
      auto p = r.evaluate(yy), m = r.evaluate(-yy);
      ok = ok && std::abs(m.value - std::conj(p.value)) <= p.err + m.err + 1e-12 * std::abs(p.value);
    }
    if (!ok) o.fail("case " + std::to_string(i));
  }
  return o;
}

namespace detail {

struct RandomIntegrand {
  std::vector<double> poly;
  double omega;
  cplx operator()(double t) const {
    double p = 0.0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) p = p * t + *it;
    return p * std::exp(cplx{0.0, omega * t});
  }
};

inline RandomIntegrand random_integrand(std::mt19937_64& rng) {
  RandomIntegrand f;
  int degree = static_cast<int>(rng() % 5);
  for (int j = 0; j <= degree; ++j) f.poly.push_back(uniform(rng, -1.0, 1.0));
  f.omega = uniform(rng, 0.0, 30.0);
  return f;
}

}  // namespace detail

/// integrate(alpha f + beta g) = alpha integrate(f) + beta integrate(g)
/// within the combined error estimates.
inline Outcome quadrature_linearity(int cases, std::uint64_t seed = kSeed) {
  std::mt19937_64 rng(seed + 4);
  Outcome o;
  QuadratureSpec q;
  for (int i = 0; i < cases; ++i, ++o.cases) {
    auto f = detail::random_integrand(rng), g = detail::random_integrand(rng);
    cplx alpha = detail::in_disc(rng) * 3.0, beta = detail::in_disc(rng) * 3.0;
    double a = detail::uniform(rng, -3.0, 1.0), b = a + detail::uniform(rng, 0.1, 4.0);
    QuadratureSpec qs = q.with_oscillation(std::max({f.omega, g.omega, 1.0}));
    auto If = integrate_finite(f, a, b, qs), Ig = integrate_finite(g, a, b, qs);
    auto Ih = integrate_finite([&](double t) { return alpha * f(t) + beta * g(t); }, a, b, qs);
    double bound = Ih.err + std::abs(alpha) * If.err + std::abs(beta) * Ig.err;
    double diff = std::abs(Ih.value - (alpha * If.value + beta * Ig.value));
    if (diff > bound + 1e-14 * (1.0 + std::abs(Ih.value))) {
      std::ostringstream msg;
      msg << "case " << i << ": diff " << diff << " bound " << bound;
      o.fail(msg.str());
    }
  }
  return o;
}

/// int_a^b = int_a^c + int_c^b within the error estimates for random c.
inline Outcome quadrature_additivity(int cases, std::uint64_t seed = kSeed) {
  std::mt19937_64 rng(seed + 5);
  Outcome o;
  QuadratureSpec q;
  for (int i = 0; i < cases; ++i, ++o.cases) {
    auto f = detail::random_integrand(rng);
    double a = detail::uniform(rng, -3.0, 1.0), b = a + detail::uniform(rng, 0.1, 4.0);
    double c = detail::uniform(rng, a, b);
    if (!(a < c && c < b)) continue;
    QuadratureSpec qs = q.with_oscillation(std::max(f.omega, 1.0));
    auto whole = integrate_finite(f, a, b, qs);
    auto left = integrate_finite(f, a, c, qs), right = integrate_finite(f, c, b, qs);
    double diff = std::abs(whole.value - left.value - right.value);
    double bound = whole.err + left.err + right.err;
    if (diff > bound + 1e-14 * (1.0 + std::abs(whole.value))) {
      std::ostringstream msg;
      msg << "case " << i << ": diff " << diff << " bound " << bound;
      o.fail(msg.str());
    }
  }
  return o;
}

/// For k1 < k2 every term weight satisfies (1 - lambda/x)^k2 <= (1 - lambda/x)^k1.
inline Outcome weight_monotonicity(int cases, std::uint64_t seed = kSeed) {
  std::mt19937_64 rng(seed + 6);
  Outcome o;
  for (int i = 0; i < cases; ++i, ++o.cases) {
    Frequency f = detail::random_frequency(rng);
    double x = detail::cutoff_for(f, rng);
    double k1 = detail::uniform(rng, 0.0, 4.0), k2 = detail::uniform(rng, 0.0, 4.0);
    if (k1 > k2) std::swap(k1, k2);
    bool ok = true;
    for (const auto& t : terms_below(f, x)) {
      double w1 = riesz_weight(t.lambda, x, k1), w2 = riesz_weight(t.lambda, x, k2);
      ok = ok && w2 <= w1 && w2 >= 0.0 && w1 <= 1.0;
    }
    if (!ok) o.fail("case " + std::to_string(i));
  }
  return o;
}

}  // namespace riesz::props
