#include "wkspin/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace wkspin {

namespace {

constexpr double kDegenerateRel = 1e-12;  // leading coefficient treated as structurally zero

double poly_eval(const CubicCoeffs& c, double x) {
  return ((c.a3 * x + c.a2) * x + c.a1) * x + c.a0;
}

double poly_deriv(const CubicCoeffs& c, double x) {
  return (3.0 * c.a3 * x + 2.0 * c.a2) * x + c.a1;
}

void polish_newton(const CubicCoeffs& c, double& x) {
  for (int it = 0; it < 8; ++it) {
    double f = poly_eval(c, x);
    double df = poly_deriv(c, x);
    if (std::abs(df) < 1e-14) break;
    double step = f / df;
    x -= step;
    if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(x))) break;
  }
}

std::vector<RealRoot> cluster_roots(std::vector<double> roots, double scale) {
  std::sort(roots.begin(), roots.end());
  std::vector<RealRoot> out;
  const double tol = 1e-7 * std::max(1.0, scale);
  for (double r : roots) {
    if (!out.empty() && std::abs(r - out.back().value) < tol) {
      // merge, keep the running mean
      auto& last = out.back();
      last.value = (last.value * last.multiplicity + r) / (last.multiplicity + 1);
      last.multiplicity += 1;
    } else {
      out.push_back({r, 1});
    }
  }
  return out;
}

}  // namespace

std::vector<RealRoot> real_roots_quadratic(double a2, double a1, double a0) {
  double scale = std::max({std::abs(a2), std::abs(a1), std::abs(a0)});
  if (scale == 0.0) throw Error(ErrorCode::IdenticallyZero, "all quadratic coefficients vanish");
  if (std::abs(a2) < kDegenerateRel * scale) {
    if (std::abs(a1) < kDegenerateRel * scale) return {};  // nonzero constant
    return {{-a0 / a1, 1}};
  }
  double disc = a1 * a1 - 4.0 * a2 * a0;
  if (disc < 0.0) return {};
  if (disc == 0.0) return {{-a1 / (2.0 * a2), 2}};
  double sq = std::sqrt(disc);
  // Citardauq-stable split: avoid cancellation in the small root
  double q = -0.5 * (a1 + (a1 >= 0.0 ? sq : -sq));
  double r1 = q / a2;
  double r2 = (q != 0.0) ? a0 / q : -a1 / a2 - r1;
  if (r1 > r2) std::swap(r1, r2);
  return {{r1, 1}, {r2, 1}};
}

std::vector<RealRoot> real_roots_cubic(const CubicCoeffs& c) {
  double scale = std::max({std::abs(c.a3), std::abs(c.a2), std::abs(c.a1), std::abs(c.a0)});
  if (scale == 0.0) throw Error(ErrorCode::IdenticallyZero, "all cubic coefficients vanish");
  if (std::abs(c.a3) < kDegenerateRel * scale) {
    return real_roots_quadratic(c.a2, c.a1, c.a0);
  }

  // monic depressed form: x = y - b/3, y^3 + p y + q = 0
  double b = c.a2 / c.a3, cc = c.a1 / c.a3, d = c.a0 / c.a3;
  double p = cc - b * b / 3.0;
  double q = 2.0 * b * b * b / 27.0 - b * cc / 3.0 + d;
  double shift = -b / 3.0;
  double disc = -4.0 * p * p * p - 27.0 * q * q;

  std::vector<double> roots;
  const double disc_scale = std::max(std::abs(p * p * p), q * q) + 1e-300;
  if (std::abs(disc) < 1e-12 * disc_scale) {
    // repeated roots
    if (std::abs(p) < 1e-12 * std::max(1.0, std::abs(q))) {
      roots = {shift, shift, shift};  // triple root
    } else {
      double y1 = 3.0 * q / p;        // simple root
      double y2 = -3.0 * q / (2.0 * p);  // double root
      roots = {y1 + shift, y2 + shift, y2 + shift};
    }
  } else if (disc > 0.0) {
    // three distinct real roots: trigonometric form
    double m = 2.0 * std::sqrt(-p / 3.0);
    double arg = 3.0 * q / (p * m);
    arg = std::clamp(arg, -1.0, 1.0);
    double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      roots.push_back(m * std::cos(theta - 2.0 * M_PI * k / 3.0) + shift);
    }
  } else {
    // one real root: Cardano with a cancellation-safe branch
    double u;
    if (p < 0.0) {
      double m = 2.0 * std::sqrt(-p / 3.0);
      double arg = 3.0 * std::abs(q) / (p * m);  // <= -1 here
      double t = std::cosh(std::acosh(-arg) / 3.0);
      u = -std::copysign(m * t, q);
    } else {
      double m = 2.0 * std::sqrt(p / 3.0);
      double arg = 3.0 * q / (p * m);
      double t = std::sinh(std::asinh(arg) / 3.0);
      u = -m * t;
    }
    roots.push_back(u + shift);
  }

  for (double& r : roots) polish_newton(c, r);
  double root_scale = 0.0;
  for (double r : roots) root_scale = std::max(root_scale, std::abs(r));
  return cluster_roots(std::move(roots), root_scale);
}

std::vector<double> common_real_roots(const std::vector<std::array<double, 3>>& quadratics,
                                      double tol) {
  std::vector<std::vector<double>> root_sets;
  for (const auto& q : quadratics) {
    double scale = std::max({std::abs(q[0]), std::abs(q[1]), std::abs(q[2])});
    if (scale == 0.0) continue;  // trivial polynomial, no constraint
    std::vector<double> roots;
    if (std::abs(q[0]) >= kDegenerateRel * scale || std::abs(q[1]) >= kDegenerateRel * scale) {
      for (const auto& r : real_roots_quadratic(q[0], q[1], q[2])) roots.push_back(r.value);
    }
    // nonzero constant polynomial: empty root set kills every candidate
    root_sets.push_back(std::move(roots));
  }
  if (root_sets.empty()) {
    throw Error(ErrorCode::InvalidInput, "every polynomial is identically zero");
  }

  std::vector<double> common;
  for (double cand : root_sets.front()) {
    bool in_all = true;
    double acc = cand;
    int n = 1;
    for (size_t i = 1; i < root_sets.size() && in_all; ++i) {
      bool found = false;
      for (double r : root_sets[i]) {
        if (std::abs(r - cand) <= tol * std::max(1.0, std::abs(cand))) {
          acc += r;
          ++n;
          found = true;
          break;
        }
      }
      in_all = found;
    }
    if (!in_all) continue;
    double center = acc / n;
    bool dup = false;
    for (double c : common) {
      if (std::abs(c - center) <= tol * std::max(1.0, std::abs(center))) dup = true;
    }
    if (!dup) common.push_back(center);
  }
  if (common.empty()) throw Error(ErrorCode::NoCommonRoot, "no lambda common to all defect entries");
  std::sort(common.begin(), common.end());
  return common;
}

Spinor rk4_step(const Mat2& f, const Spinor& psi, double h) {
  Spinor k1 = f * psi;
  Spinor k2 = f * (psi + (0.5 * h) * k1);
  Spinor k3 = f * (psi + (0.5 * h) * k2);
  Spinor k4 = f * (psi + h * k3);
  return psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

HermitianEigen eigen_hermitian(const Mat2& h) {
  // 2x2 Hermitian: closed form
  double a = h.a[0].real();
  double d = h.a[3].real();
  Complex b = h.a[1];
  double tr = a + d;
  double diff = a - d;
  double rad = std::sqrt(diff * diff + 4.0 * std::norm(b));
  double w0 = 0.5 * (tr - rad);
  double w1 = 0.5 * (tr + rad);

  HermitianEigen out;
  out.values = {w0, w1};
  if (std::abs(b) < 1e-300 && std::abs(diff) < 1e-300) {
    out.vectors = {Spinor{1.0, 0.0}, Spinor{0.0, 1.0}};
    return out;
  }
  auto unit_for = [&](double w) -> Spinor {
    // (h - w I) v = 0; pick the better-conditioned row
    Complex r1a = Complex(a - w), r1b = b;
    Complex r2a = std::conj(b), r2b = Complex(d - w);
    Spinor v;
    if (std::norm(r1a) + std::norm(r1b) >= std::norm(r2a) + std::norm(r2b)) {
      v = {-r1b, r1a};
    } else {
      v = {-r2b, r2a};
    }
    double n = v.norm();
    if (n < 1e-300) return {1.0, 0.0};
    return (1.0 / n) * v;
  };
  out.vectors = {unit_for(w0), unit_for(w1)};
  return out;
}

}  // namespace wkspin
