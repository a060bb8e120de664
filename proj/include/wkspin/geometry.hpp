#pragma once

#include <array>

#include "wkspin/errors.hpp"

namespace wkspin {

/// Parameters (K,L,M) of the left-invariant metric with structure equations
///   omega_12 = K s3,  omega_13 = L s2,  omega_23 = M s1
/// against an orthonormal coframe s1,s2,s3.
///
/// Sign conventions used throughout (fixed here, verified by the Koszul oracle):
///   * first structure equation in the form  d s^i = sum_j omega_ij ^ s^j,
///     i.e. omega_ij(X) = <nabla_X e_i, e_j>;
///   * frame brackets read off via d s^k(e_i,e_j) = -s^k([e_i,e_j]), giving
///     [e2,e3] = (K-L) e1, [e3,e1] = (M+K) e2, [e1,e2] = (M-L) e3.
/// A reader using the opposite structure-equation convention will find one
/// global sign flip in omega.
struct ModelParams {
  double K, L, M;
};

struct CurvatureData {
  std::array<double, 3> bracket;  // b1,b2,b3: [e2,e3]=b1 e1, [e3,e1]=b2 e2, [e1,e2]=b3 e3
  std::array<double, 3> ricci;    // principal Ricci curvatures in the orthonormal frame
  double scalar;                  // S = r1+r2+r3
  double ricci_norm_sq;           // r1^2+r2^2+r3^2
};

/// Left-invariant metric in the standard so(3) basis (diagonal entries).
struct MetricDiag {
  double m11, m22, m33;
};

enum class SpaceKind { Flat, Einstein, Generic };

struct Classification {
  SpaceKind kind;
  int scalar_sign;  // -1, 0, +1
};

/// Coefficients of d s^1, d s^2, d s^3: (L-K, M+K, L-M).
std::array<double, 3> coframe_differentials(const ModelParams& p);

/// Closed-form curvature data: r = (-2KL, 2KM, -2LM), brackets (K-L, M+K, M-L).
CurvatureData curvature(const ModelParams& p);

/// diag( 1/(|M-L||K+M|), 1/(|K-L||M-L|), 1/(|K-L||K+M|) ).
/// Throws DegenerateMetric when any factor vanishes (or entries overflow).
MetricDiag standard_basis_metric(const ModelParams& p);

/// Connection coefficients omega_ij(e_k) = <nabla_{e_k} e_i, e_j>, computed from the
/// frame brackets alone through the Koszul formula. Independent route used as an
/// oracle against the closed-form Ricci.
struct ConnectionCoeffs {
  // gamma[k][i][j] = <nabla_{e_k} e_i, e_j>
  std::array<std::array<std::array<double, 3>, 3>, 3> gamma{};

  double omega(int i, int j, int k) const { return gamma[k][i][j]; }  // omega_ij(e_k)
};

ConnectionCoeffs koszul_connection(const ModelParams& p);

/// Full Ricci tensor recomputed brute-force from connection coefficients and brackets:
/// Ric(j,k) = sum_i < R(e_i,e_j) e_k, e_i >,  R(X,Y) = [nabla_X,nabla_Y] - nabla_[X,Y].
std::array<std::array<double, 3>, 3> ricci_from_connection(const ConnectionCoeffs& conn,
                                                           const std::array<double, 3>& bracket);

/// Koszul-route principal Ricci curvatures (diagonal of ricci_from_connection).
std::array<double, 3> ricci_via_koszul(const ModelParams& p);

Classification classify(const ModelParams& p, double tol = 1e-12);

}  // namespace wkspin
