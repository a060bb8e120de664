#include "wkspin/geometry.hpp"

#include <cmath>

namespace wkspin {

std::array<double, 3> coframe_differentials(const ModelParams& p) {
  return {p.L - p.K, p.M + p.K, p.L - p.M};
}

CurvatureData curvature(const ModelParams& p) {
  CurvatureData c;
  c.bracket = {p.K - p.L, p.M + p.K, p.M - p.L};
  c.ricci = {-2.0 * p.K * p.L, 2.0 * p.K * p.M, -2.0 * p.L * p.M};
  c.scalar = c.ricci[0] + c.ricci[1] + c.ricci[2];
  c.ricci_norm_sq =
      c.ricci[0] * c.ricci[0] + c.ricci[1] * c.ricci[1] + c.ricci[2] * c.ricci[2];
  return c;
}

MetricDiag standard_basis_metric(const ModelParams& p) {
  double f1 = std::abs(p.M - p.L);
  double f2 = std::abs(p.K + p.M);
  double f3 = std::abs(p.K - p.L);
  if (f1 == 0.0 || f2 == 0.0 || f3 == 0.0) {
    throw Error(ErrorCode::DegenerateMetric,
                "a factor of |M-L|, |K+M|, |K-L| vanishes; no metric in this chart");
  }
  MetricDiag m{1.0 / (f1 * f2), 1.0 / (f3 * f1), 1.0 / (f3 * f2)};
  if (!std::isfinite(m.m11) || !std::isfinite(m.m22) || !std::isfinite(m.m33)) {
    throw Error(ErrorCode::DegenerateMetric, "metric entries overflow");
  }
  return m;
}

ConnectionCoeffs koszul_connection(const ModelParams& p) {
  const auto b = curvature(p).bracket;

  // structure constants c[i][j][k] = <[e_i,e_j], e_k>
  double c[3][3][3] = {};
  c[1][2][0] = b[0];
  c[2][1][0] = -b[0];
  c[2][0][1] = b[1];
  c[0][2][1] = -b[1];
  c[0][1][2] = b[2];
  c[1][0][2] = -b[2];

  // Koszul formula for a left-invariant orthonormal frame:
  // <nabla_{e_i} e_j, e_k> = (c_ijk - c_jki + c_kij) / 2
  ConnectionCoeffs conn;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        conn.gamma[i][j][k] = 0.5 * (c[i][j][k] - c[j][k][i] + c[k][i][j]);
  return conn;
}

std::array<std::array<double, 3>, 3> ricci_from_connection(
    const ConnectionCoeffs& conn, const std::array<double, 3>& bracket) {
  double c[3][3][3] = {};
  c[1][2][0] = bracket[0];
  c[2][1][0] = -bracket[0];
  c[2][0][1] = bracket[1];
  c[0][2][1] = -bracket[1];
  c[0][1][2] = bracket[2];
  c[1][0][2] = -bracket[2];

  // nabla_{e_i} e_j = sum_k G[i][j][k] e_k
  const auto& G = conn.gamma;

  // R(e_i,e_j)e_k = nabla_i nabla_j e_k - nabla_j nabla_i e_k - nabla_{[e_i,e_j]} e_k
  auto riemann = [&](int i, int j, int k, int l) {
    double acc = 0.0;
    for (int m = 0; m < 3; ++m) {
      acc += G[j][k][m] * G[i][m][l];
      acc -= G[i][k][m] * G[j][m][l];
      acc -= c[i][j][m] * G[m][k][l];
    }
    return acc;  // < R(e_i,e_j) e_k, e_l >
  };

  std::array<std::array<double, 3>, 3> ric{};
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      double acc = 0.0;
      for (int i = 0; i < 3; ++i) acc += riemann(i, j, k, i);
      ric[j][k] = acc;
    }
  return ric;
}

std::array<double, 3> ricci_via_koszul(const ModelParams& p) {
  const auto conn = koszul_connection(p);
  const auto b = curvature(p).bracket;
  const auto ric = ricci_from_connection(conn, b);
  return {ric[0][0], ric[1][1], ric[2][2]};
}

Classification classify(const ModelParams& p, double tol) {
  const auto c = curvature(p);
  double scale = std::max({std::abs(c.ricci[0]), std::abs(c.ricci[1]), std::abs(c.ricci[2]), 1.0});
  bool flat = true, einstein = true;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(c.ricci[i]) > tol * scale) flat = false;
    if (std::abs(c.ricci[i] - c.ricci[(i + 1) % 3]) > tol * scale) einstein = false;
  }
  Classification out;
  out.kind = flat ? SpaceKind::Flat : (einstein ? SpaceKind::Einstein : SpaceKind::Generic);
  out.scalar_sign = (c.scalar > tol * scale) ? 1 : (c.scalar < -tol * scale ? -1 : 0);
  return out;
}

}  // namespace wkspin
