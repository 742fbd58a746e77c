#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "riesz/error.hpp"
#include "riesz/quadrature.hpp"
#include "riesz/special.hpp"

namespace riesz {

/// Poisson kernel of the right half-plane, P_u(t) = u / (pi (u^2 + t^2)).
inline double poisson(double u, double t) {
  if (!(u > 0.0)) throw DomainError("Poisson kernel needs u > 0");
  return u / (std::numbers::pi * (u * u + t * t));
}

// (1 + i y)^alpha on the principal branch; 1 + iy never meets the cut.
inline cplx one_plus_iy_pow(double y, double alpha) {
  return std::exp(alpha * cplx{0.5 * std::log1p(y * y), std::atan(y)});
}

// Gamma(1 + k) e / (2 pi).
inline double riesz_kernel_constant(double k) {
  return special::gamma_pos(1.0 + k) * std::numbers::e / (2.0 * std::numbers::pi);
}

/// K^k(y) = Gamma(1+k) e / (2 pi) * (1 + i y)^{-(1+k)}.
inline cplx riesz_kernel(double k, double y) {
  if (!(k > 0.0)) throw DomainError("Riesz kernel needs k > 0");
  return riesz_kernel_constant(k) * one_plus_iy_pow(y, -(1.0 + k));
}

/// K_x^k(t) = x K^k(x t).
inline cplx scaled_riesz_kernel(double k, double x, double t) {
  if (!(x > 0.0)) throw DomainError("scaled Riesz kernel needs x > 0");
  return x * riesz_kernel(k, x * t);
}

struct KernelParams {
  double k = 1.0;
  double ell = 0.0;
  double x = 1.0;

  void validate() const {
    if (!(ell >= 0.0) || !(k > ell)) throw DomainError("kernel parameters need k > ell >= 0");
    if (!(x > 0.0)) throw DomainError("kernel parameters need x > 0");
  }
};

/// Three-case envelope bounding |R^{k,ell}(x, y)| up to a constant C(k, ell):
///   k < 1:                x / |1 + iyx|^{1+k-ell}
///   k >= 1, k - ell < 1:  x / |1 + iyx|^2 + x / |1 + iyx|^{1+k-ell}
///   k >= 1, k - ell >= 1: x / |1 + iyx|^2
inline double matea_envelope(const KernelParams& p, double y) {
  p.validate();
  if (!(p.x > 1.0)) throw DomainError("envelope is stated for x > 1");
  const double m = std::hypot(1.0, y * p.x);
  const double a = 1.0 + p.k - p.ell;
  if (p.k < 1.0) return p.x / std::pow(m, a);
  if (p.k - p.ell < 1.0) return p.x / (m * m) + p.x / std::pow(m, a);
  return p.x / (m * m);
}

using KernelValue = Estimate;

/// R^{k,ell}(x, y) = int P_{1/x}(t - y) e^{itx} (1 + 1/x + it)^ell K_x^k(t) dt.
///
/// After t = v / x the kernel reads x C int P_1(v - xy) h(v) dv with
/// h(v) = e^{iv} (1 + (1 + iv)/x)^ell (1 + iv)^{-1-k}. Near the diagonal
/// (|xy| small) this is integrated directly on the real line. Further out the
/// line is pushed up past the pole of P_1 at v = xy + i: the residue gives
/// h(xy + i), and what remains is the wrap around the branch cut of h along
/// v = is, s >= 1, cut off at s = 40 where e^{iv} ~ e^{-40}. That remainder
/// only depends on xy through P_1, so it is tabulated once per kernel.
class RasmusKernel {
 public:
  static constexpr double kContourThreshold = 4.0;  // |xy| from which the deformed contour is used
  static constexpr double kCutHeight = 40.0;

  RasmusKernel(KernelParams params, QuadratureSpec quad) : p_(params), quad_(std::move(quad)) {
    p_.validate();
    scale_ = p_.x * riesz_kernel_constant(p_.k);
    rho_ = std::min(0.5, 0.5 * p_.x);
    build_cut_rule();
    build_circle_rule();
    calibrate();
  }

  const KernelParams& params() const noexcept { return p_; }

  KernelValue evaluate(double y) const {
    const double Y = p_.x * y;
    if (std::abs(Y) >= kContourThreshold) return {contour(y), contour_err_};
    return direct(y);
  }
  cplx operator()(double y) const { return evaluate(y).value; }

  // Straight quadrature of the defining integral.
  KernelValue direct(double y) const {
    const double Y = p_.x * y;
    QuadratureSpec q = quad_;
    q.tail_exponent = 2.0 + p_.k - p_.ell;
    q.oscillation = 1.0;
    q.initial_window = 0.5 * std::abs(Y) + 16.0;
    q.extra_tail_exponents.clear();
    auto r = integrate_real_line([&](double v) { return h(cplx{v, 0.0}) * p1(cplx{v - Y, 0.0}); }, q, 0.5 * Y);
    return {scale_ * r.value, scale_ * r.err};
  }

  // Residue plus branch-cut remainder; needs |xy| >= 2.
  cplx contour(double y) const {
    const double Y = p_.x * y;
    if (std::abs(Y) < 2.0) throw DomainError("contour route needs |xy| >= 2");
    cplx total = h(cplx{Y, 1.0});
    for (const auto& n : cut_nodes_) total += n.weight * p1(cplx{-Y, n.s});
    for (const auto& n : circle_nodes_) total += n.weight * p1(n.v - Y);
    return scale_ * total;
  }

  double contour_error() const noexcept { return contour_err_; }

 private:
  struct CutNode {
    double s;
    cplx weight;
  };
  struct CircleNode {
    cplx v;
    cplx weight;
  };

  // 1 / (pi (z^2 + 1)), spelled out to avoid the library complex division.
  static cplx p1(cplx z) {
    const double a = (z.real() - z.imag()) * (z.real() + z.imag()) + 1.0;
    const double b = 2.0 * z.real() * z.imag();
    const double d = std::numbers::pi * (a * a + b * b);
    return {a / d, -b / d};
  }

  cplx h(cplx v) const {
    const cplx one_iv = 1.0 + cplx{0.0, 1.0} * v;
    return std::exp(cplx{0.0, 1.0} * v) * std::pow(1.0 + one_iv / p_.x, p_.ell) *
           std::exp(-(1.0 + p_.k) * std::log(one_iv));
  }

  // Jump h(+0 + is) - h(-0 + is) across the cut, s > 1.
  cplx cut_jump(double s) const {
    const double pi = std::numbers::pi;
    const double q = (p_.x + 1.0 - s) / p_.x;
    cplx qr, ql;
    if (q >= 0.0) {
      qr = ql = std::pow(q, p_.ell);
    } else {
      double m = std::pow(-q, p_.ell);
      qr = m * std::polar(1.0, pi * p_.ell);
      ql = m * std::polar(1.0, -pi * p_.ell);
    }
    const double base = std::exp(-s) * std::pow(s - 1.0, -(1.0 + p_.k));
    return base * (qr * std::polar(1.0, -pi * (1.0 + p_.k)) - ql * std::polar(1.0, pi * (1.0 + p_.k)));
  }

  void add_gl_panel(double a, double b) {
    const auto& [x, w] = gl_;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double s = 0.5 * (a + b) + 0.5 * (b - a) * x[i];
      cut_nodes_.push_back({s, cplx{0.0, 1.0} * (0.5 * (b - a) * w[i]) * cut_jump(s)});
    }
  }

  // Composite rule on [a, b], graded geometrically towards a kink at `a`
  // and/or `b` when flagged.
  void add_piece(double a, double b, bool kink_a, bool kink_b) {
    if (!(a < b)) return;
    if (kink_a || kink_b) {
      double mid = kink_a && kink_b ? 0.5 * (a + b) : (kink_a ? b : a);
      if (kink_a) {
        double L = mid - a;
        for (int m = 0; m < 45; ++m) add_gl_panel(a + L * std::ldexp(1.0, -m - 1), a + L * std::ldexp(1.0, -m));
      }
      if (kink_b) {
        double L = b - mid;
        for (int m = 0; m < 45; ++m) add_gl_panel(b - L * std::ldexp(1.0, -m), b - L * std::ldexp(1.0, -m - 1));
      }
      return;
    }
    int n = std::max(1, static_cast<int>(std::ceil(b - a)));
    for (int i = 0; i < n; ++i) add_gl_panel(a + (b - a) * i / n, a + (b - a) * (i + 1) / n);
  }

  void build_cut_rule() {
    gl_ = gauss_legendre(12);
    const double start = 1.0 + rho_;
    const double kink = 1.0 + p_.x;
    const bool has_kink = p_.ell != std::floor(p_.ell) && kink > start && kink < kCutHeight;
    if (has_kink) {
      double left = std::min(kink - start, 1.0), right = std::min(kCutHeight - kink, 1.0);
      add_piece(start, kink - left, false, false);
      add_piece(kink - left, kink, false, true);
      add_piece(kink, kink + right, true, false);
      add_piece(kink + right, kCutHeight, false, false);
    } else {
      add_piece(start, kCutHeight, false, false);
    }
  }

  void build_circle_rule() {
    // v = i - i rho e^{i phi}, phi in (-pi, pi), so 1 + iv = rho e^{i phi}.
    const auto [x, w] = gauss_legendre(20);
    const int panels = 8;
    const double pi = std::numbers::pi;
    for (int p = 0; p < panels; ++p) {
      double a = -pi + 2.0 * pi * p / panels, b = a + 2.0 * pi / panels;
      for (std::size_t i = 0; i < x.size(); ++i) {
        double phi = 0.5 * (a + b) + 0.5 * (b - a) * x[i];
        cplx e = std::polar(1.0, phi);
        cplx v = cplx{0.0, 1.0} - cplx{0.0, rho_} * e;
        cplx hv = std::exp(cplx{0.0, 1.0} * v) * std::pow(1.0 + rho_ * e / p_.x, p_.ell) *
                  std::pow(rho_, -(1.0 + p_.k)) * std::polar(1.0, -(1.0 + p_.k) * phi);
        circle_nodes_.push_back({v, 0.5 * (b - a) * w[i] * hv * rho_ * e});
      }
    }
  }

  // Error of the tabulated contour, measured against the direct route just
  // beyond the switch-over point.
  void calibrate() {
    double worst = 0.0;
    for (double Y : {kContourThreshold, -kContourThreshold, 3.0 * kContourThreshold}) {
      double y = Y / p_.x;
      auto d = direct(y);
      worst = std::max(worst, std::abs(d.value - contour(y)) + d.err);
    }
    contour_err_ = worst + scale_ * std::exp(-kCutHeight);
  }

  KernelParams p_;
  QuadratureSpec quad_;
  double scale_ = 1.0;
  double rho_ = 0.5;
  std::pair<std::vector<double>, std::vector<double>> gl_;
  std::vector<CutNode> cut_nodes_;
  std::vector<CircleNode> circle_nodes_;
  double contour_err_ = 0.0;
};

inline KernelValue rasmus_kernel(const KernelParams& params, double y, const QuadratureSpec& quad) {
  params.validate();
  if (std::abs(params.x * y) < RasmusKernel::kContourThreshold) {
    // Direct route only; skip building the contour tables.
    const double Y = params.x * y;
    const double scale = params.x * riesz_kernel_constant(params.k);
    QuadratureSpec q = quad;
    q.tail_exponent = 2.0 + params.k - params.ell;
    q.oscillation = 1.0;
    q.initial_window = 0.5 * std::abs(Y) + 16.0;
    q.extra_tail_exponents.clear();
    auto h = [&](double v) {
      cplx one_iv{1.0, v};
      cplx pz{v - Y, 0.0};
      return std::exp(cplx{0.0, v}) * std::pow(1.0 + one_iv / params.x, params.ell) *
             std::exp(-(1.0 + params.k) * std::log(one_iv)) / (std::numbers::pi * (pz * pz + 1.0));
    };
    auto r = integrate_real_line(h, q, 0.5 * Y);
    return {scale * r.value, scale * r.err};
  }
  return RasmusKernel(params, quad).evaluate(y);
}

}  // namespace riesz
