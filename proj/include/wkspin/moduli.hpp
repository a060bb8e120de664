#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "wkspin/geometry.hpp"
#include "wkspin/numerics.hpp"

namespace wkspin {

/// Unit-norm representative with the first nonzero coordinate positive
/// (antipodal representatives identified).
struct ProjectivePoint {
  std::array<double, 3> x;
};

/// Throws ZeroPoint.
ProjectivePoint normalize_homothety(const ModelParams& p);

/// All real roots L of F(K, . , M): cubic
///   (K-M)^2 (K+M) L^3 + K M (K+M)^2 L^2 - K^2 M^2 (K+M) L - K^3 M^3,
/// degraded in degree when leading coefficients vanish, each root polished by
/// Newton on F until |F| < polish_tol. Throws DegenerateInput when the
/// polynomial is identically zero (e.g. K = M = 0).
std::vector<double> solve_for_L(double K, double M, double polish_tol = 1e-10);

/// The two K=M solutions L = K(1 -+ sqrt(5))/4. Throws ZeroK.
std::pair<double, double> km_locus(double K);

enum class PointClass { OffVariety, FlatCorner, KMLocus, Generic };

PointClass classify_point(const ModelParams& p, double tol = 1e-6);

/// One traced curve of the variety in P^2(R): an ordered polyline of unit-norm
/// points, endpoints labeled by the adjacent coordinate point (0,1,2) or -1 (open).
struct ModuliBranch {
  int id = 0;
  int chart = 0;  // cube-sphere face of the first vertex
  std::vector<std::array<double, 3>> points;
  std::array<int, 2> endpoints{-1, -1};
};

struct TraceOptions {
  int resolution = 512;   // grid cells per cube-face edge, >= 64
  bool parallel = true;   // OpenMP kernels; false selects the serial reference
  double polish_tol = 1e-10;
};

struct TraceResult {
  std::vector<ModuliBranch> branches;
  int corner_junctions = 0;      // coordinate points with incident branch ends
  int self_intersections = 0;    // crossing vertices of degree > 2 (away from corners)
  int antipodal_pairs = 0;       // branches whose antipodal copy was traced as well
  int pole_flagged = 0;          // traced points with |S^2 - 2|Ric|^2| < 1e-8
  double truncate_radius = 0.0;  // corner exclusion radius actually used
  double label_radius = 0.0;     // endpoint labeling radius actually used
};

/// Marching on a cube-sphere grid: evaluates F at grid vertices, extracts
/// zero-crossing segments per cell, Newton-polishes every crossing along the
/// tangential gradient, chains segments into polylines, identifies antipodal
/// copies and keeps one, labels endpoints near the coordinate corner points.
/// Deterministic: output is independent of thread count.
TraceResult trace_variety(const TraceOptions& opts = {});

/// CSV rows: branch_id,point_index,K,L,M,F_residual,S,lambda  (17 significant
/// digits; lambda empty where wk_number is undefined).
void write_csv(const TraceResult& trace, std::ostream& os);

/// Orthographic projection of the upper hemisphere onto a 1000x1000 viewBox;
/// one polyline per branch, coordinate points marked and labeled.
void write_svg(const TraceResult& trace, std::ostream& os);

}  // namespace wkspin
