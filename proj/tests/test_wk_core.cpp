#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "wkspin/moduli.hpp"
#include "wkspin/wk_core.hpp"

using namespace wkspin;

namespace {

const double S5 = std::sqrt(5.0);
const ModelParams kFixMinus{1.0, 0.25 * (1.0 - S5), 1.0};
const ModelParams kFixPlus{1.0, 0.25 * (1.0 + S5), 1.0};
// integrable eigenvalues at the two K=M locus points
const double kLambdaMinus = 0.5 * (2.0 + S5);
const double kLambdaPlus = -0.5 * (S5 - 2.0);

std::vector<ModelParams> variety_samples(int want, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  std::vector<ModelParams> out;
  while ((int)out.size() < want) {
    const double K = U(rng), M = U(rng);
    if (std::abs(K) < 0.1 || std::abs(M) < 0.1 || std::abs(K + M) < 0.1) continue;
    std::vector<double> roots;
    try {
      roots = solve_for_L(K, M);
    } catch (const Error&) {
      continue;
    }
    for (double L : roots) {
      ModelParams p{K, L, M};
      const double n2 = K * K + L * L + M * M;
      const auto c = curvature(p);
      if (std::abs(c.scalar) < 1e-2 * n2) continue;
      if (std::abs(variety_F(p)) > 1e-10 * std::pow(n2, 3)) continue;
      out.push_back(p);
      if ((int)out.size() == want) break;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("variety polynomial values") {
  CHECK(variety_F({1, 0, 0}) == 0.0);
  CHECK(variety_F({1, -1, 1}) == 5.0);
  CHECK(std::abs(variety_F(kFixMinus)) < 1e-12);
  CHECK(std::abs(variety_F(kFixPlus)) < 1e-12);
}

TEST_CASE("variety gradient matches finite differences") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  auto f = [](std::array<double, 3> x) { return variety_F({x[0], x[1], x[2]}); };
  for (int trial = 0; trial < 100; ++trial) {
    const std::array<double, 3> x{U(rng), U(rng), U(rng)};
    const auto g = variety_grad({x[0], x[1], x[2]});
    const auto fd = oracles::fd_gradient(f, x);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(g[i] - fd[i]) < 1e-5 * std::max(1.0, std::abs(fd[i])));
    }
  }
  const auto zero = variety_grad({0, 0, 0});
  CHECK(zero[0] == 0.0);
  CHECK(zero[1] == 0.0);
  CHECK(zero[2] == 0.0);
}

TEST_CASE("variety homogeneity: Euler identity and degree-6 scaling") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  std::uniform_real_distribution<double> Umu(0.2, 2.5);
  for (int trial = 0; trial < 300; ++trial) {
    const ModelParams p{U(rng), U(rng), U(rng)};
    const double mu = Umu(rng);
    const double f = variety_F(p);
    const auto g = variety_grad(p);
    const double euler = p.K * g[0] + p.L * g[1] + p.M * g[2];
    CHECK(std::abs(euler - 6.0 * f) < 1e-12 * std::max(0.1, std::abs(6.0 * f)));
    const double scaled = variety_F({mu * p.K, mu * p.L, mu * p.M});
    CHECK(std::abs(scaled - std::pow(mu, 6) * f) <
          1e-12 * std::max(0.1, std::abs(std::pow(mu, 6) * f)));
  }
}

TEST_CASE("eigenvalue formula at the K=M locus points") {
  const auto lm = wk_number(kFixMinus);
  CHECK(lm.lambda == doctest::Approx(kLambdaMinus).epsilon(1e-14));
  CHECK(lm.branch == SignBranch::Plus);
  // closed form: lambda^2 = (9 + 4 sqrt(5))/4 at the first locus point
  CHECK(lm.lambda * lm.lambda == doctest::Approx(0.25 * (9.0 + 4.0 * S5)).epsilon(1e-14));

  const auto lp = wk_number(kFixPlus);
  CHECK(lp.lambda == doctest::Approx(kLambdaPlus).epsilon(1e-13));
  CHECK(lp.branch == SignBranch::Plus);  // -K < M also here; S < 0 makes lambda negative
  CHECK(lp.lambda * lp.lambda == doctest::Approx(0.25 * (9.0 - 4.0 * S5)).epsilon(1e-12));
}

TEST_CASE("eigenvalue formula error cases") {
  CHECK_THROWS_AS(wk_number({1, 0, 0}), Error);       // flat corner: S = 0
  CHECK_THROWS_AS(wk_number({1, 0.5, -1}), Error);    // sign rule undefined at M = -K
  CHECK_THROWS_AS(wk_number({1, -1, 0.01}), Error);   // radicand negative
  try {
    wk_number({1, 0, 0});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroScalarCurvature);
  }
  try {
    wk_number({1, 0.5, -1});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SignRuleUndefined);
  }
  try {
    wk_number({1, -1, 0.01});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NegativeRadicand);
  }
}

TEST_CASE("calibration: unique class, cross-check fixture, orientation sensitivity") {
  const auto conv = calibrate_conventions();
  CHECK(conv.fixture_defect < 1e-10);
  CHECK(conv.cross_check_defect < 1e-10);
  CHECK(conv.spin_sign == +1);
  CHECK(conv.orientation == +1);

  // flipping only the orientation breaks the positive-sign rule at the fixture
  ConventionRecord flipped = conv;
  flipped.orientation = -conv.orientation;
  const auto rep = build_rep(flipped.clifford_sign, flipped.orientation);
  const auto w = wk_connection_matrices(kFixMinus, wk_number(kFixMinus).lambda, rep, flipped);
  CHECK(integrability_defect(w, curvature(kFixMinus)) > 1e-3);
}

TEST_CASE("connection matrices: structure and degenerate input") {
  const auto conv = calibrated_conventions();
  const auto rep = build_rep(conv.clifford_sign, conv.orientation);

  const auto w0 = wk_connection_matrices({0, 0, 0}, 0.0, rep, conv);
  for (int i = 0; i < 3; ++i) CHECK(max_abs(w0.C[i]) == 0.0);

  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    ModelParams p{U(rng), U(rng), U(rng)};
    if (std::abs(curvature(p).scalar) < 1e-6) continue;
    const double lambda = U(rng);
    const auto w = wk_connection_matrices(p, lambda, rep, conv);
    for (int i = 0; i < 3; ++i) {
      CHECK(anti_hermitian_defect(w.A[i]) < 1e-14);
      CHECK(max_abs(w.C[i] - (w.A[i] - w.Gamma[i])) == 0.0);
    }
  }

  CHECK_THROWS_AS(wk_connection_matrices({1, 0, 0}, 1.0, rep, conv), Error);
}

TEST_CASE("integrability defect at and off the certified eigenvalue") {
  const auto conv = calibrated_conventions();
  const auto rep = build_rep(conv.clifford_sign, conv.orientation);
  const auto c = curvature(kFixMinus);

  const double lambda = wk_number(kFixMinus).lambda;
  const auto flat = wk_connection_matrices(kFixMinus, lambda, rep, conv);
  CHECK(integrability_defect(flat, c) < 1e-10);

  const auto off = wk_connection_matrices(kFixMinus, lambda + 0.1, rep, conv);
  CHECK(integrability_defect(off, c) > 1e-3);

  WKConnection zero;
  CurvatureData flat_c{};
  CHECK(integrability_defect(zero, flat_c) == 0.0);
}

TEST_CASE("eigenvalue solving: locus points, round sphere, off-variety") {
  const auto conv = calibrated_conventions();
  const auto rep = build_rep(conv.clifford_sign, conv.orientation);

  auto at_fix = solve_wk_numbers(kFixMinus, rep, conv);
  REQUIRE(at_fix.size() == 1);
  CHECK(at_fix[0] == doctest::Approx(kLambdaMinus).epsilon(1e-9));

  auto at_fix2 = solve_wk_numbers(kFixPlus, rep, conv);
  REQUIRE(at_fix2.size() == 1);
  CHECK(at_fix2[0] == doctest::Approx(kLambdaPlus).epsilon(1e-9));

  // the round sphere admits genuine Killing spinors for both signs: two values,
  // and the point is off the variety (F = 5)
  auto sphere = solve_wk_numbers({1, -1, 1}, rep, conv);
  REQUIRE(sphere.size() == 2);
  CHECK(sphere[0] == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(sphere[1] == doctest::Approx(1.5).epsilon(1e-12));

  CHECK_THROWS_AS(solve_wk_numbers({1, 0.3, 0.7}, rep, conv), Error);
}

TEST_CASE("eigenvalue homothety: lambda(mu p) = mu lambda(p)") {
  const auto conv = calibrated_conventions();
  const auto rep = build_rep(conv.clifford_sign, conv.orientation);

  auto doubled = solve_wk_numbers({2.0, 0.5 * (1.0 - S5), 2.0}, rep, conv);
  REQUIRE(doubled.size() == 1);
  CHECK(doubled[0] == doctest::Approx(2.0 * kLambdaMinus).epsilon(1e-9));

  for (const auto& p : variety_samples(10, 101)) {
    const double base = wk_number(p).lambda;
    for (double mu : {0.5, 2.0, 3.0}) {
      const double scaled = wk_number({mu * p.K, mu * p.L, mu * p.M}).lambda;
      CHECK(std::abs(scaled - mu * base) < 1e-10 * std::max(1.0, std::abs(mu * base)));
    }
  }
}

TEST_CASE("two independent eigenvalue routes agree on variety samples") {
  const auto conv = calibrated_conventions();
  const auto rep = build_rep(conv.clifford_sign, conv.orientation);
  for (const auto& p : variety_samples(25, 53)) {
    const double formula = wk_number(p).lambda;
    const auto solved = solve_wk_numbers(p, rep, conv);
    REQUIRE(solved.size() == 1);
    CHECK(std::abs(solved[0] - formula) < 1e-8 * std::max(1.0, std::abs(formula)));
  }
}

TEST_CASE("solution space dimension") {
  const auto conv = calibrated_conventions();
  const auto rep = build_rep(conv.clifford_sign, conv.orientation);
  const auto c = curvature(kFixMinus);
  const double lambda = wk_number(kFixMinus).lambda;

  const auto flat = wk_connection_matrices(kFixMinus, lambda, rep, conv);
  const auto space = spinor_solution_space(flat, c);
  CHECK(space.dimension == 2);
  REQUIRE(space.basis.size() == 2);
  CHECK(space.basis[0].z1 == Complex(1.0));
  CHECK(space.basis[1].z2 == Complex(1.0));

  WKConnection zero;
  CurvatureData flat_c{};
  CHECK(spinor_solution_space(zero, flat_c).dimension == 2);

  const auto off = wk_connection_matrices(kFixMinus, lambda + 0.1, rep, conv);
  CHECK(spinor_solution_space(off, c).dimension < 2);
}

TEST_CASE("spinor transport: constancy, unitarity, step-halving") {
  const auto conv = calibrated_conventions();
  const auto rep = build_rep(conv.clifford_sign, conv.orientation);

  WKConnection zero;
  const Spinor psi0{Complex(0.6, 0.1), Complex(-0.3, 0.4)};
  const auto still = integrate_spinor(zero, {{+1, 1.0}}, psi0, 1e-3);
  CHECK(std::abs(still.psi.back().z1 - psi0.z1) == 0.0);
  CHECK(still.max_norm_drift == 0.0);

  const double lambda = wk_number(kFixMinus).lambda;
  const auto w = wk_connection_matrices(kFixMinus, lambda, rep, conv);
  const auto traj = integrate_spinor(w, {{+1, 1.0}, {-2, 0.5}}, psi0, 1e-3);
  CHECK(traj.max_norm_drift < 1e-8 * psi0.norm_sq());

  // endpoint error against the exact exponential shrinks ~16x per halving
  const Mat2 f = w.C[0];
  const Spinor exact = oracles::expm(f) * psi0;
  auto endpoint_err = [&](double h) {
    const auto t = integrate_spinor(w, {{+1, 1.0}}, psi0, h);
    const Spinor d = t.psi.back() - exact;
    return d.norm();
  };
  const double e1 = endpoint_err(0.02);
  const double e2 = endpoint_err(0.01);
  CHECK(e1 / e2 > 12.0);
  CHECK(e1 / e2 < 20.0);
}

TEST_CASE("holonomy around the bracket-corrected commutator loop") {
  const auto conv = calibrated_conventions();
  const auto rep = build_rep(conv.clifford_sign, conv.orientation);
  const auto c = curvature(kFixMinus);
  const double lambda = wk_number(kFixMinus).lambda;

  const auto flat = wk_connection_matrices(kFixMinus, lambda, rep, conv);
  const double h1 = holonomy_defect(flat, c, 0.2, 1e-3);
  const double h2 = holonomy_defect(flat, c, 0.1, 1e-3);
  CHECK(h1 / h2 > 5.0);   // third order: halving t divides the defect by ~8
  CHECK(h1 / h2 < 11.0);

  const auto off = wk_connection_matrices(kFixMinus, lambda + 1.0, rep, conv);
  const double g1 = holonomy_defect(off, c, 0.1, 1e-3);
  const double g2 = holonomy_defect(off, c, 0.05, 1e-3);
  CHECK(g1 / g2 < 5.0);  // second order only once flatness fails
}

TEST_CASE("energy-momentum tensor") {
  const auto conv = calibrated_conventions();
  const auto rep = build_rep(conv.clifford_sign, conv.orientation);
  const auto c = curvature(kFixMinus);
  const double lambda = wk_number(kFixMinus).lambda;
  const auto w = wk_connection_matrices(kFixMinus, lambda, rep, conv);

  const auto zero = energy_momentum(w, Spinor{}, rep);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(zero[i][j] == 0.0);

  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Spinor psi{Complex(U(rng), U(rng)), Complex(U(rng), U(rng))};
    const auto T = energy_momentum(w, psi, rep);
    CHECK(std::abs(T[0][1]) < 1e-14);
    CHECK(std::abs(T[0][2]) < 1e-14);
    CHECK(std::abs(T[1][2]) < 1e-14);
    for (int i = 0; i < 3; ++i) {
      const double expected =
          -2.0 * lambda * (2.0 * c.ricci[i] / c.scalar - 1.0) * psi.norm_sq();
      CHECK(std::abs(T[i][i] - expected) < 1e-12 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST_CASE("spinor normalization") {
  const Spinor out = normalize_spinor({1, 0}, 4.0, 1.0);
  CHECK(out.z1 == Complex(2.0));
  CHECK(out.z2 == Complex(0.0));

  // fixed point: already at norm^2 = |S|/|lambda|
  const Spinor fixed = normalize_spinor(out, 4.0, 1.0);
  CHECK(std::abs(fixed.z1 - out.z1) < 1e-15);

  // scaling the input only changes the phase of the output
  const Spinor a = normalize_spinor({Complex(0.3, 0.4), Complex(-0.1, 0.2)}, 2.0, 0.5);
  const Spinor b = normalize_spinor({Complex(-0.9, -1.2), Complex(0.3, -0.6)}, 2.0, 0.5);
  CHECK(a.norm_sq() == doctest::Approx(b.norm_sq()).epsilon(1e-13));
  CHECK(a.norm_sq() == doctest::Approx(4.0).epsilon(1e-13));

  CHECK_THROWS_AS(normalize_spinor({1, 0}, 4.0, 0.0), Error);
  CHECK_THROWS_AS(normalize_spinor({0, 0}, 4.0, 1.0), Error);
}

TEST_CASE("einstein-dirac residual") {
  CurvatureData flat_c{};
  std::array<std::array<double, 3>, 3> T{};
  CHECK(einstein_dirac_residual(flat_c, T).residual == 0.0);

  const auto conv = calibrated_conventions();
  const auto rep = build_rep(conv.clifford_sign, conv.orientation);
  const auto c = curvature(kFixMinus);
  const double lambda = wk_number(kFixMinus).lambda;
  const auto w = wk_connection_matrices(kFixMinus, lambda, rep, conv);
  const Spinor psi = normalize_spinor({1, 0}, c.scalar, lambda);
  const auto tensor = energy_momentum(w, psi, rep);

  const auto ed = einstein_dirac_residual(c, tensor);
  CHECK(ed.residual < 1e-9);

  auto doubled = tensor;
  double maxT = 0.0;
  for (int i = 0; i < 3; ++i) {
    doubled[i][i] *= 2.0;
    maxT = std::max(maxT, std::abs(tensor[i][i]));
  }
  const auto ed2 = einstein_dirac_residual(c, doubled);
  CHECK(ed2.residual == doctest::Approx(0.25 * maxT).epsilon(1e-9));
}

TEST_CASE("dirac eigen residual") {
  const auto conv = calibrated_conventions();
  const auto rep = build_rep(conv.clifford_sign, conv.orientation);
  const double lambda = wk_number(kFixMinus).lambda;
  const auto w = wk_connection_matrices(kFixMinus, lambda, rep, conv);
  const Spinor psi{Complex(0.8, -0.1), Complex(0.2, 0.3)};

  CHECK(dirac_eigen_residual(w, psi, rep) < 1e-13);
  CHECK(dirac_eigen_residual(w, Spinor{}, rep) == 0.0);

  // perturbing lambda inside A_i only scales the residual linearly
  auto perturbed = [&](double eps) {
    auto wp = wk_connection_matrices(kFixMinus, lambda + eps, rep, conv);
    wp.lambda = lambda;  // keep the reference eigenvalue fixed
    return dirac_eigen_residual(wp, psi, rep);
  };
  const double r1 = perturbed(1e-3);
  const double r2 = perturbed(2e-3);
  CHECK(r2 / r1 == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("verify: certified point, round sphere, flat corner") {
  const auto pass = verify(kFixMinus);
  CHECK(pass.verdict == Verdict::Pass);
  CHECK(pass.lambda_theorem.lambda == doctest::Approx(kLambdaMinus).epsilon(1e-12));
  CHECK(pass.spinor_space_dim == 2);
  CHECK(pass.reasons.empty());

  const auto sphere = verify({1, -1, 1});
  CHECK(sphere.verdict == Verdict::Fail);
  CHECK(sphere.variety_residual == doctest::Approx(5.0).epsilon(1e-14));

  const auto corner = verify({1, 0, 0});
  CHECK(corner.verdict == Verdict::Fail);
  bool has_zero_scalar = false;
  for (const auto& r : corner.reasons) {
    has_zero_scalar = has_zero_scalar || r.find("ZeroScalarCurvature") != std::string::npos;
  }
  CHECK(has_zero_scalar);
}

TEST_CASE("verification is representation independent") {
  const auto base = calibrated_conventions();
  ConventionRecord gauge = base;
  gauge.clifford_sign = -base.clifford_sign;  // same orientation: unitary-equivalent rep

  const auto a = verify(kFixMinus, {}, &base);
  const auto b = verify(kFixMinus, {}, &gauge);
  CHECK(a.verdict == b.verdict);
  CHECK(std::abs(a.lambda_theorem.lambda - b.lambda_theorem.lambda) < 1e-12);
  CHECK(std::abs(a.integrability - b.integrability) < 1e-12);
  CHECK(std::abs(a.einstein_dirac - b.einstein_dirac) < 1e-12);
  CHECK(std::abs(a.dirac_residual - b.dirac_residual) < 1e-12);
  CHECK(a.ed_sign == b.ed_sign);
}

TEST_CASE("flatness and dimension 2 coincide on and off the variety") {
  const auto conv = calibrated_conventions();
  const auto rep = build_rep(conv.clifford_sign, conv.orientation);
  for (const auto& p : variety_samples(10, 71)) {
    const auto c = curvature(p);
    const auto w = wk_connection_matrices(p, wk_number(p).lambda, rep, conv);
    const bool flat = integrability_defect(w, c) < 1e-10;
    const bool dim2 = spinor_solution_space(w, c).dimension == 2;
    CHECK(flat == dim2);
    CHECK(flat);
  }
  // off-variety, non-Einstein, with a well-defined eigenvalue formula
  const ModelParams off{1, -1.1, 1};
  CHECK(std::abs(variety_F(off)) > 1.0);
  const auto c = curvature(off);
  const auto w = wk_connection_matrices(off, wk_number(off).lambda, rep, conv);
  CHECK(integrability_defect(w, c) > 1e-10);
  CHECK(spinor_solution_space(w, c).dimension < 2);
}
