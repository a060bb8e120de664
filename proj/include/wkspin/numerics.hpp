#pragma once

#include <array>
#include <vector>

#include "wkspin/errors.hpp"
#include "wkspin/mat2.hpp"

namespace wkspin {

/// Shared tolerance knobs. All values are quoted for homothety-normalized inputs.
struct ToleranceConfig {
  double defect_tol = 1e-10;        // flatness defect threshold
  double residual_tol = 1e-9;       // Einstein-Dirac / Dirac eigenvalue residuals
  double root_cluster_tol = 1e-8;   // clustering of common polynomial roots
  double ode_step = 1e-3;           // fixed RK4 step
  double trace_polish_tol = 1e-10;  // |F| bound after Newton polish on traced points
};

struct CubicCoeffs {
  double a3, a2, a1, a0;  // a3 x^3 + a2 x^2 + a1 x + a0
};

struct RealRoot {
  double value;
  int multiplicity;
};

/// All real roots, ascending. Leading coefficients below 1e-12 (relative to the
/// largest coefficient) degrade the degree. Throws IdenticallyZero if all four vanish.
std::vector<RealRoot> real_roots_cubic(const CubicCoeffs& c);

/// Real roots of a2 x^2 + a1 x + a0 (same degeneration rules, used by the cubic path).
std::vector<RealRoot> real_roots_quadratic(double a2, double a1, double a0);

/// Roots common to every nontrivial quadratic (coefficients ordered {a2,a1,a0}),
/// clustered within tol. Throws NoCommonRoot when the intersection is empty,
/// InvalidInput when every polynomial is identically zero.
std::vector<double> common_real_roots(const std::vector<std::array<double, 3>>& quadratics,
                                      double tol);

/// One classical 4-stage step for the linear system psi' = f psi.
Spinor rk4_step(const Mat2& f, const Spinor& psi, double h);

}  // namespace wkspin
