#include "wkspin/wk_core.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

namespace wkspin {

double variety_F(const ModelParams& p) {
  const double K = p.K, L = p.L, M = p.M;
  return -K * K * L * (L - M) * (L - M) * M + L * L * L * M * M * M +
         K * L * L * M * M * (M - L) + K * K * K * (L - M) * (L + M) * (L + M);
}

std::array<double, 3> variety_grad(const ModelParams& p) {
  const double K = p.K, L = p.L, M = p.M;
  const double dK = -2.0 * K * L * (L - M) * (L - M) * M + L * L * M * M * (M - L) +
                    3.0 * K * K * (L - M) * (L + M) * (L + M);
  const double dL = -K * K * M * (L - M) * (3.0 * L - M) + 3.0 * L * L * M * M * M +
                    K * M * M * (2.0 * L * M - 3.0 * L * L) +
                    K * K * K * (L + M) * (3.0 * L - M);
  const double dM = -K * K * L * (L - M) * (L - 3.0 * M) + 3.0 * L * L * L * M * M +
                    K * L * L * (3.0 * M * M - 2.0 * L * M) +
                    K * K * K * (L + M) * (L - 3.0 * M);
  return {dK, dL, dM};
}

WKNumber wk_number(const ModelParams& p) {
  const auto c = curvature(p);
  const double S = c.scalar;
  const double scale = std::max({p.K * p.K, p.L * p.L, p.M * p.M, 1e-300});
  if (std::abs(S) < 1e-14 * scale) {
    throw Error(ErrorCode::ZeroScalarCurvature, "scalar curvature vanishes");
  }
  const double denom = S * S - 2.0 * c.ricci_norm_sq;
  const double radicand = S / denom;
  if (!(radicand > 0.0)) {
    throw Error(ErrorCode::NegativeRadicand, "S/(S^2-2|Ric|^2) is not positive");
  }
  const double magnitude = S / (2.0 * std::sqrt(2.0)) * std::sqrt(radicand);
  if (-p.K < p.M) return {magnitude, SignBranch::Plus};
  if (p.M < -p.K) return {-magnitude, SignBranch::Minus};
  throw Error(ErrorCode::SignRuleUndefined, "sign rule undefined at M = -K");
}

WKConnection wk_connection_matrices(const ModelParams& p, double lambda, const CliffordRep& rep,
                                    const ConventionRecord& conv) {
  const auto c = curvature(p);
  const double S = c.scalar;
  const double scale = std::max({p.K * p.K, p.L * p.L, p.M * p.M, 1e-300});
  if (lambda != 0.0 && std::abs(S) < 1e-14 * scale) {
    throw Error(ErrorCode::ZeroScalarCurvature, "scalar curvature vanishes");
  }

  WKConnection w;
  w.lambda = lambda;
  w.convention = conv;
  const auto& g = rep.gamma;
  const double s = double(conv.spin_sign);
  w.Gamma[0] = (s * 0.5 * p.M) * (g[1] * g[2]);
  w.Gamma[1] = (s * 0.5 * p.L) * (g[0] * g[2]);
  w.Gamma[2] = (s * 0.5 * p.K) * (g[0] * g[1]);
  for (int i = 0; i < 3; ++i) {
    const double ti = (lambda == 0.0) ? 0.0 : (2.0 * c.ricci[i] / S - 1.0);
    w.A[i] = (lambda * ti) * g[i];
    w.C[i] = w.A[i] - w.Gamma[i];
  }
  return w;
}

double integrability_defect(const WKConnection& w, const CurvatureData& c) {
  double worst = 0.0;
  static constexpr int cyc[3][3] = {{1, 2, 0}, {2, 0, 1}, {0, 1, 2}};
  for (const auto& idx : cyc) {
    const int i = idx[0], j = idx[1], k = idx[2];
    Mat2 d = commutator(w.C[i], w.C[j]) + c.bracket[k] * w.C[k];
    worst = std::max(worst, max_abs(d));
  }
  return worst;
}

namespace {

/// Calibration fixture: the K = M = 1 point with L = (1 - sqrt(5))/4, where the
/// variety admits a closed-form solution and lambda is known exactly.
ModelParams calibration_fixture() { return {1.0, 0.25 * (1.0 - std::sqrt(5.0)), 1.0}; }
ModelParams cross_check_fixture() { return {1.0, 0.25 * (1.0 + std::sqrt(5.0)), 1.0}; }

}  // namespace

ConventionRecord calibrate_conventions() {
  const ModelParams fix = calibration_fixture();
  const ModelParams fix2 = cross_check_fixture();
  const auto curv_fix = curvature(fix);
  const auto curv_fix2 = curvature(fix2);
  const double lam = wk_number(fix).lambda;    // positive: -K < M on the fixture
  const double lam2 = wk_number(fix2).lambda;
  const double pass_tol = 1e-10;

  struct ClassKey {
    int orientation, spin_sign;
    bool operator==(const ClassKey& o) const {
      return orientation == o.orientation && spin_sign == o.spin_sign;
    }
  };
  std::vector<ClassKey> passing;
  ConventionRecord best;
  bool found = false;

  for (int sign_choice : {+1, -1})
    for (int orientation : {+1, -1})
      for (int spin_sign : {+1, -1}) {
        ConventionRecord conv;
        conv.clifford_sign = sign_choice;
        conv.orientation = orientation;
        conv.spin_sign = spin_sign;
        const auto rep = build_rep(sign_choice, orientation);
        const auto w = wk_connection_matrices(fix, lam, rep, conv);
        const double defect = integrability_defect(w, curv_fix);
        if (defect >= pass_tol || lam <= 0.0) continue;

        ClassKey key{orientation, spin_sign};
        bool known = false;
        for (const auto& k : passing) known = known || (k == key);
        if (!known) passing.push_back(key);

        // canonical representative: positive Clifford sign
        if (!found || sign_choice > best.clifford_sign) {
          best = conv;
          best.fixture_defect = defect;
          const auto w2 = wk_connection_matrices(fix2, lam2, rep, conv);
          best.cross_check_defect = integrability_defect(w2, curv_fix2);
          found = true;
        }
      }

  if (!found) {
    throw Error(ErrorCode::CalibrationFailed, "no sign combination is integrable at the fixture");
  }
  if (passing.size() != 1) {
    throw Error(ErrorCode::CalibrationFailed, "multiple inequivalent sign classes pass");
  }
  if (best.cross_check_defect >= pass_tol) {
    throw Error(ErrorCode::CalibrationFailed, "cross-check fixture not integrable");
  }
  return best;
}

const ConventionRecord& calibrated_conventions() {
  static const ConventionRecord record = calibrate_conventions();
  return record;
}

std::vector<double> solve_wk_numbers(const ModelParams& p, const CliffordRep& rep,
                                     const ConventionRecord& conv, double cluster_tol) {
  // C_i(lambda) = lambda P_i + Q_i; defect entries are quadratics in lambda
  const auto w0 = wk_connection_matrices(p, 0.0, rep, conv);
  const auto w1 = wk_connection_matrices(p, 1.0, rep, conv);
  const auto c = curvature(p);

  Mat2 P[3], Q[3];
  for (int i = 0; i < 3; ++i) {
    Q[i] = w0.C[i];
    P[i] = w1.C[i] - w0.C[i];
  }

  std::vector<std::array<double, 3>> quads;
  static constexpr int cyc[3][3] = {{1, 2, 0}, {2, 0, 1}, {0, 1, 2}};
  for (const auto& idx : cyc) {
    const int i = idx[0], j = idx[1], k = idx[2];
    const Mat2 quad = commutator(P[i], P[j]);
    const Mat2 lin = commutator(P[i], Q[j]) + commutator(Q[i], P[j]) + c.bracket[k] * P[k];
    const Mat2 cst = commutator(Q[i], Q[j]) + c.bracket[k] * Q[k];
    for (int e = 0; e < 4; ++e) {
      quads.push_back({quad.a[e].real(), lin.a[e].real(), cst.a[e].real()});
      quads.push_back({quad.a[e].imag(), lin.a[e].imag(), cst.a[e].imag()});
    }
  }

  // drop entries that are zero to rounding: they constrain nothing
  double scale = 0.0;
  for (const auto& q : quads)
    scale = std::max({scale, std::abs(q[0]), std::abs(q[1]), std::abs(q[2])});
  if (scale == 0.0) return {};  // zero connection, zero brackets: flat for every lambda
  std::vector<std::array<double, 3>> significant;
  for (const auto& q : quads) {
    if (std::max({std::abs(q[0]), std::abs(q[1]), std::abs(q[2])}) > 1e-13 * scale) {
      significant.push_back(q);
    }
  }
  return common_real_roots(significant, cluster_tol);
}

SolutionSpace spinor_solution_space(const WKConnection& w, const CurvatureData& c,
                                    double defect_tol) {
  SolutionSpace out;
  const double defect = integrability_defect(w, c);
  if (defect < defect_tol) {
    out.dimension = 2;
    out.basis = {Spinor{1.0, 0.0}, Spinor{0.0, 1.0}};
    return out;
  }

  // common kernel of the defect matrices via the Gram matrix
  Mat2 gram;
  static constexpr int cyc[3][3] = {{1, 2, 0}, {2, 0, 1}, {0, 1, 2}};
  double scale = 0.0;
  for (const auto& idx : cyc) {
    const int i = idx[0], j = idx[1], k = idx[2];
    Mat2 d = commutator(w.C[i], w.C[j]) + c.bracket[k] * w.C[k];
    gram = gram + adjoint(d) * d;
    scale = std::max(scale, max_abs(d));
  }
  const auto eig = eigen_hermitian(gram);
  const double kernel_tol = 1e-8 * std::max(scale, 1e-30);
  for (int i = 0; i < 2; ++i) {
    const double sv = std::sqrt(std::max(eig.values[i], 0.0));
    if (sv < kernel_tol) {
      out.basis.push_back(eig.vectors[i]);
      ++out.dimension;
    } else {
      out.kernel_residual = (out.kernel_residual == 0.0) ? sv : std::min(out.kernel_residual, sv);
    }
  }
  return out;
}

namespace {

Mat2 direction_matrix(const WKConnection& w, int direction) {
  const int k = std::abs(direction) - 1;
  return (direction > 0) ? w.C[k] : (-1.0) * w.C[k];
}

Mat2 rk4_step_mat(const Mat2& f, const Mat2& u, double h) {
  Mat2 k1 = f * u;
  Mat2 k2 = f * (u + (0.5 * h) * k1);
  Mat2 k3 = f * (u + (0.5 * h) * k2);
  Mat2 k4 = f * (u + h * k3);
  return u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Mat2 transport_along(const WKConnection& w, int direction, double duration, double step, Mat2 u) {
  if (duration <= 0.0) return u;
  const Mat2 f = direction_matrix(w, direction);
  const int n_full = int(duration / step);
  for (int i = 0; i < n_full; ++i) u = rk4_step_mat(f, u, step);
  const double rem = duration - n_full * step;
  if (rem > 1e-300) u = rk4_step_mat(f, u, rem);
  return u;
}

}  // namespace

Trajectory integrate_spinor(const WKConnection& w, const std::vector<PathSegment>& path,
                            const Spinor& psi0, double step) {
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidInput, "step must be positive");
  Trajectory traj;
  traj.time.push_back(0.0);
  traj.psi.push_back(psi0);
  const double n0 = psi0.norm_sq();
  double t = 0.0;
  Spinor psi = psi0;
  for (const auto& seg : path) {
    if (seg.duration < 0.0) throw Error(ErrorCode::InvalidInput, "segment duration negative");
    const Mat2 f = direction_matrix(w, seg.direction);
    double remaining = seg.duration;
    while (remaining > 1e-300) {
      const double h = std::min(step, remaining);
      psi = rk4_step(f, psi, h);
      remaining -= h;
      t += h;
      traj.time.push_back(t);
      traj.psi.push_back(psi);
      traj.max_norm_drift = std::max(traj.max_norm_drift, std::abs(psi.norm_sq() - n0));
    }
  }
  return traj;
}

double holonomy_defect(const WKConnection& w, const CurvatureData& c, double t, double step) {
  Mat2 u = Mat2::identity();
  u = transport_along(w, +1, t, step, u);
  u = transport_along(w, +2, t, step, u);
  u = transport_along(w, -1, t, step, u);
  u = transport_along(w, -2, t, step, u);
  // the group loop closes up to exp(t^2 [e1,e2]); undo it along e3
  const double corr = t * t * c.bracket[2];
  u = transport_along(w, corr >= 0.0 ? -3 : +3, std::abs(corr), step, u);
  return max_abs(u - Mat2::identity());
}

std::array<std::array<double, 3>, 3> energy_momentum(const WKConnection& w, const Spinor& psi,
                                                     const CliffordRep& rep) {
  std::array<std::array<double, 3>, 3> T{};
  std::array<Spinor, 3> nabla;
  for (int i = 0; i < 3; ++i) nabla[i] = w.A[i] * psi;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      const Spinor v = rep.gamma[i] * nabla[j] + rep.gamma[j] * nabla[i];
      const double val = hermitian_pair(v, psi).real();
      T[i][j] = val;
      T[j][i] = val;
    }
  return T;
}

Spinor normalize_spinor(const Spinor& psi_star, double scalar, double lambda) {
  if (lambda == 0.0) throw Error(ErrorCode::ZeroLambda, "lambda vanishes");
  const double n2 = psi_star.norm_sq();
  if (n2 == 0.0) throw Error(ErrorCode::ZeroSpinor, "psi* vanishes");
  const double factor = std::sqrt(std::abs(scalar) / (std::abs(lambda) * n2));
  return factor * psi_star;
}

EinsteinDiracResidual einstein_dirac_residual(const CurvatureData& c,
                                              const std::array<std::array<double, 3>, 3>& T) {
  double res_plus = 0.0, res_minus = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double einstein = (i == j ? c.ricci[i] - 0.5 * c.scalar : 0.0);
      res_plus = std::max(res_plus, std::abs(einstein - 0.25 * T[i][j]));
      res_minus = std::max(res_minus, std::abs(einstein + 0.25 * T[i][j]));
    }
  if (res_plus <= res_minus) return {res_plus, SignBranch::Plus};
  return {res_minus, SignBranch::Minus};
}

double dirac_eigen_residual(const WKConnection& w, const Spinor& psi, const CliffordRep& rep) {
  Spinor d{};
  for (int i = 0; i < 3; ++i) d = d + rep.gamma[i] * (w.A[i] * psi);
  const Spinor r = d - w.lambda * psi;
  return r.norm();
}

EDReport verify(const ModelParams& p, const ToleranceConfig& tol, const ConventionRecord* conv) {
  EDReport rep;
  rep.params = p;

  if (!std::isfinite(p.K) || !std::isfinite(p.L) || !std::isfinite(p.M)) {
    rep.reasons.push_back("InvalidInput: non-finite parameters");
    return rep;
  }

  const ConventionRecord& record = conv ? *conv : calibrated_conventions();
  const auto c = curvature(p);
  const double norm = std::sqrt(p.K * p.K + p.L * p.L + p.M * p.M);

  rep.variety_residual = std::abs(variety_F(p));
  rep.variety_residual_normalized =
      (norm > 0.0) ? rep.variety_residual / std::pow(norm, 6) : 0.0;
  if (norm == 0.0 || rep.variety_residual_normalized >= tol.trace_polish_tol) {
    std::ostringstream os;
    os << "variety residual " << rep.variety_residual_normalized << " not below "
       << tol.trace_polish_tol;
    rep.reasons.push_back(os.str());
  }

  rep.pole_flag = std::abs(c.scalar * c.scalar - 2.0 * c.ricci_norm_sq) < 1e-8;

  const auto clifford = build_rep(record.clifford_sign, record.orientation);
  try {
    rep.lambda_theorem = wk_number(p);
    rep.lambda_valid = true;
  } catch (const Error& e) {
    rep.reasons.push_back(e.what());
    return rep;
  }

  const auto w = wk_connection_matrices(p, rep.lambda_theorem.lambda, clifford, record);
  rep.integrability = integrability_defect(w, c);
  if (rep.integrability >= tol.defect_tol) {
    std::ostringstream os;
    os << "integrability defect " << rep.integrability << " not below " << tol.defect_tol;
    rep.reasons.push_back(os.str());
  }

  try {
    rep.lambda_solved = solve_wk_numbers(p, clifford, record, tol.root_cluster_tol);
  } catch (const Error& e) {
    rep.reasons.push_back(e.what());
  }
  if (rep.lambda_solved.size() != 1) {
    if (!rep.lambda_solved.empty()) {
      std::ostringstream os;
      os << "expected one integrable eigenvalue, found " << rep.lambda_solved.size();
      rep.reasons.push_back(os.str());
    }
  } else if (std::abs(rep.lambda_solved[0] - rep.lambda_theorem.lambda) >
             tol.root_cluster_tol * std::max(1.0, std::abs(rep.lambda_theorem.lambda))) {
    std::ostringstream os;
    os << "solved eigenvalue " << rep.lambda_solved[0] << " does not match " << rep.lambda_theorem.lambda;
    rep.reasons.push_back(os.str());
  }

  const auto space = spinor_solution_space(w, c, tol.defect_tol);
  rep.spinor_space_dim = space.dimension;
  if (space.dimension != 2) {
    std::ostringstream os;
    os << "solution space dimension " << space.dimension << " != 2";
    rep.reasons.push_back(os.str());
  }

  if (space.dimension > 0) {
    try {
      const Spinor psi = normalize_spinor(space.basis[0], c.scalar, rep.lambda_theorem.lambda);
      const auto T = energy_momentum(w, psi, clifford);
      const auto ed = einstein_dirac_residual(c, T);
      rep.einstein_dirac = ed.residual;
      rep.ed_sign = ed.sign;
      if (ed.residual >= tol.residual_tol) {
        std::ostringstream os;
        os << "einstein-dirac residual " << ed.residual << " not below " << tol.residual_tol;
        rep.reasons.push_back(os.str());
      }
      rep.dirac_residual = dirac_eigen_residual(w, psi, clifford);
      if (rep.dirac_residual >= tol.residual_tol) {
        std::ostringstream os;
        os << "dirac residual " << rep.dirac_residual << " not below " << tol.residual_tol;
        rep.reasons.push_back(os.str());
      }

      const std::vector<PathSegment> probe{{+1, 0.4}, {+2, 0.3}, {+3, 0.3}};
      const auto traj = integrate_spinor(w, probe, psi, tol.ode_step);
      rep.norm_drift = traj.max_norm_drift / std::max(1.0, psi.norm_sq());
      if (rep.norm_drift >= 1e-8) {
        std::ostringstream os;
        os << "norm drift " << rep.norm_drift << " not below 1e-8";
        rep.reasons.push_back(os.str());
      }

      rep.holonomy_large = holonomy_defect(w, c, 0.2, tol.ode_step);
      rep.holonomy_small = holonomy_defect(w, c, 0.1, tol.ode_step);
      const bool cubic_decay =
          rep.holonomy_large < 1e-10 ||
          rep.holonomy_large / std::max(rep.holonomy_small, 1e-300) >= 5.0;
      if (!cubic_decay) {
        rep.reasons.push_back("holonomy defect does not decay at third order");
      }
    } catch (const Error& e) {
      rep.reasons.push_back(e.what());
    }
  }

  rep.verdict = rep.reasons.empty() ? Verdict::Pass : Verdict::Fail;
  return rep;
}

}  // namespace wkspin
