#include "wkspin/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>

#include "wkspin/wk_core.hpp"

namespace wkspin {

ProjectivePoint normalize_homothety(const ModelParams& p) {
  const double n = std::sqrt(p.K * p.K + p.L * p.L + p.M * p.M);
  if (n == 0.0 || !std::isfinite(n)) throw Error(ErrorCode::ZeroPoint, "cannot normalize");
  std::array<double, 3> x{p.K / n, p.L / n, p.M / n};
  for (double c : x) {
    if (c != 0.0) {
      if (c < 0.0)
        for (double& v : x) v = -v;
      break;
    }
  }
  return {x};
}

std::vector<double> solve_for_L(double K, double M, double polish_tol) {
  // F(K, L, M) collected as a cubic in L
  const CubicCoeffs coeffs{(K - M) * (K - M) * (K + M), K * M * (K + M) * (K + M),
                           -K * K * M * M * (K + M), -K * K * K * M * M * M};
  std::vector<RealRoot> roots;
  try {
    roots = real_roots_cubic(coeffs);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IdenticallyZero) {
      throw Error(ErrorCode::DegenerateInput, "F(K, . , M) is identically zero");
    }
    throw;
  }

  std::vector<double> out;
  for (const auto& r : roots) {
    double L = r.value;
    // polish on the variety polynomial itself
    for (int it = 0; it < 40; ++it) {
      const ModelParams p{K, L, M};
      const double f = variety_F(p);
      if (std::abs(f) < 0.01 * polish_tol) break;
      const double df = variety_grad(p)[1];
      if (std::abs(df) < 1e-14) break;
      L -= f / df;
    }
    if (std::abs(variety_F({K, L, M})) < polish_tol) {
      bool dup = false;
      for (double o : out) dup = dup || std::abs(o - L) < 1e-9 * std::max(1.0, std::abs(L));
      if (!dup) out.push_back(L);
    } else {
      out.push_back(L);  // multiple root: Newton stalls but the root is genuine
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::pair<double, double> km_locus(double K) {
  if (K == 0.0) throw Error(ErrorCode::ZeroK, "K vanishes");
  const double s5 = std::sqrt(5.0);
  return {0.25 * K * (1.0 - s5), 0.25 * K * (1.0 + s5)};
}

PointClass classify_point(const ModelParams& p, double tol) {
  const auto n = normalize_homothety(p).x;
  int small = 0;
  for (double c : n) small += (std::abs(c) < tol) ? 1 : 0;
  if (small >= 2) return PointClass::FlatCorner;
  const double f = std::abs(variety_F({n[0], n[1], n[2]}));
  if (f >= tol) return PointClass::OffVariety;
  if (std::abs(n[0] - n[2]) < tol) return PointClass::KMLocus;
  return PointClass::Generic;
}

namespace {

using Vec3 = std::array<double, 3>;

inline Vec3 normalized(const Vec3& v) {
  const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  return {v[0] / n, v[1] / n, v[2] / n};
}

inline double dist(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline Vec3 cube_point(int face, double u, double v) {
  Vec3 p;
  switch (face) {
    case 0: p = {1.0, u, v}; break;
    case 1: p = {-1.0, u, v}; break;
    case 2: p = {u, 1.0, v}; break;
    case 3: p = {u, -1.0, v}; break;
    case 4: p = {u, v, 1.0}; break;
    default: p = {u, v, -1.0}; break;
  }
  return normalized(p);
}

inline double F_at(const Vec3& x) { return variety_F({x[0], x[1], x[2]}); }

/// Newton along the gradient projected to the sphere tangent plane.
Vec3 polish_on_sphere(Vec3 x) {
  for (int it = 0; it < 80; ++it) {
    const double f = F_at(x);
    if (std::abs(f) < 1e-14) break;
    const auto g = variety_grad({x[0], x[1], x[2]});
    const double gdotx = g[0] * x[0] + g[1] * x[1] + g[2] * x[2];
    Vec3 gt{g[0] - gdotx * x[0], g[1] - gdotx * x[1], g[2] - gdotx * x[2]};
    const double n2 = gt[0] * gt[0] + gt[1] * gt[1] + gt[2] * gt[2];
    if (n2 < 1e-28) break;
    const double s = f / n2;
    x = normalized({x[0] - s * gt[0], x[1] - s * gt[1], x[2] - s * gt[2]});
  }
  return x;
}

struct QuantKey {
  std::int64_t a, b, c;
  bool operator<(const QuantKey& o) const {
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return c < o.c;
  }
  bool operator==(const QuantKey& o) const { return a == o.a && b == o.b && c == o.c; }
};

inline QuantKey quantize(const Vec3& x, double scale) {
  return {std::llround(x[0] * scale), std::llround(x[1] * scale), std::llround(x[2] * scale)};
}

inline Vec3 canonical_sign(const Vec3& x) {
  for (double c : x) {
    if (std::abs(c) > 1e-12) return (c > 0.0) ? x : Vec3{-x[0], -x[1], -x[2]};
  }
  return x;
}

constexpr double kCornerPole = 1e-8;

struct RawSegment {
  Vec3 a, b;
  int face;
};

/// Marching-squares segment extraction for one face. Pure function of the cell,
/// so the parallel and serial paths produce identical segment lists.
void extract_face_segments(int face, int N, bool parallel, std::vector<RawSegment>& out) {
  const double step = 2.0 / N;

  // grid values
  std::vector<double> fv((N + 1) * (size_t)(N + 1));
  std::vector<Vec3> pv((N + 1) * (size_t)(N + 1));
  auto at = [N](int i, int j) { return (size_t)i * (N + 1) + j; };

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (int i = 0; i <= N; ++i) {
    const double u = -1.0 + step * i;
    for (int j = 0; j <= N; ++j) {
      const double v = -1.0 + step * j;
      const Vec3 x = cube_point(face, u, v);
      pv[at(i, j)] = x;
      fv[at(i, j)] = F_at(x);
    }
  }

  // mixed-sign cells
  std::vector<std::pair<int, int>> mixed;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      const bool s0 = fv[at(i, j)] > 0.0;
      const bool s1 = fv[at(i + 1, j)] > 0.0;
      const bool s2 = fv[at(i + 1, j + 1)] > 0.0;
      const bool s3 = fv[at(i, j + 1)] > 0.0;
      if (s0 != s1 || s0 != s2 || s0 != s3) mixed.emplace_back(i, j);
    }
  }

  std::vector<std::array<RawSegment, 2>> cell_segs(mixed.size());
  std::vector<int> cell_count(mixed.size(), 0);

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (std::ptrdiff_t m = 0; m < (std::ptrdiff_t)mixed.size(); ++m) {
    const int i = mixed[m].first, j = mixed[m].second;
    const std::array<size_t, 4> corner{at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)};
    double f[4];
    Vec3 p[4];
    bool s[4];
    for (int k = 0; k < 4; ++k) {
      f[k] = fv[corner[k]];
      p[k] = pv[corner[k]];
      s[k] = f[k] > 0.0;
    }
    Vec3 cross[4];
    int nc = 0;
    static constexpr int edges[4][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    for (const auto& edge : edges) {
      const int a = edge[0], b = edge[1];
      if (s[a] == s[b]) continue;
      const double t = f[a] / (f[a] - f[b]);
      Vec3 x{p[a][0] + t * (p[b][0] - p[a][0]), p[a][1] + t * (p[b][1] - p[a][1]),
             p[a][2] + t * (p[b][2] - p[a][2])};
      cross[nc] = polish_on_sphere(normalized(x));
      ++nc;
    }
    if (nc == 2) {
      cell_segs[m][0] = {cross[0], cross[1], face};
      cell_count[m] = 1;
    } else if (nc == 4) {
      // saddle cell: resolve pairing by the sign at the cell center
      Vec3 c{p[0][0] + p[1][0] + p[2][0] + p[3][0], p[0][1] + p[1][1] + p[2][1] + p[3][1],
             p[0][2] + p[1][2] + p[2][2] + p[3][2]};
      const bool sc = F_at(normalized(c)) > 0.0;
      if (sc == s[0]) {
        cell_segs[m][0] = {cross[0], cross[3], face};
        cell_segs[m][1] = {cross[1], cross[2], face};
      } else {
        cell_segs[m][0] = {cross[0], cross[1], face};
        cell_segs[m][1] = {cross[2], cross[3], face};
      }
      cell_count[m] = 2;
    }
  }

  for (size_t m = 0; m < mixed.size(); ++m) {
    for (int k = 0; k < cell_count[m]; ++k) out.push_back(cell_segs[m][k]);
  }
}

}  // namespace

TraceResult trace_variety(const TraceOptions& opts) {
  if (opts.resolution < 64) throw Error(ErrorCode::InvalidInput, "resolution must be >= 64");
  const int N = opts.resolution;

  TraceResult result;
  // the variety meets the coordinate points in cusps whose strands separate like
  // 2*sqrt(2)*d^{3/2}; below ~cell^{2/3} sign marching cannot resolve them, so the
  // exclusion disk scales accordingly
  result.truncate_radius = std::max(2.0 / N, 2.2 * std::pow(double(N), -2.0 / 3.0));
  result.label_radius = result.truncate_radius + 8.0 / N;

  std::vector<RawSegment> segments;
  for (int face = 0; face < 6; ++face) {
    extract_face_segments(face, N, opts.parallel, segments);
  }

  // deduplicate crossing points (shared cell edges yield bit-identical points)
  std::vector<Vec3> pts;
  std::vector<int> pt_face;
  std::map<QuantKey, int> index_of;
  std::vector<std::pair<int, int>> segs;
  auto intern = [&](const Vec3& x, int face) {
    const QuantKey k = quantize(x, 2e6);
    auto it = index_of.find(k);
    if (it != index_of.end()) return it->second;
    const int id = (int)pts.size();
    pts.push_back(x);
    pt_face.push_back(face);
    index_of.emplace(k, id);
    return id;
  };
  for (const auto& s : segments) {
    const int a = intern(s.a, s.face);
    const int b = intern(s.b, s.face);
    if (a != b) segs.emplace_back(a, b);
  }

  // drop points inside the corner exclusion disks
  const std::array<Vec3, 3> corners{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
  auto corner_distance = [&](const Vec3& x, int* which) {
    double best = 1e300;
    int lbl = -1;
    for (int ci = 0; ci < 3; ++ci) {
      const Vec3& c = corners[ci];
      const double d = std::min(dist(x, c), dist(x, Vec3{-c[0], -c[1], -c[2]}));
      if (d < best) {
        best = d;
        lbl = ci;
      }
    }
    if (which) *which = lbl;
    return best;
  };

  std::vector<bool> keep(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) keep[i] = corner_distance(pts[i], nullptr) >= result.truncate_radius;

  std::map<int, std::set<int>> adj;
  for (const auto& [a, b] : segs) {
    if (keep[a] && keep[b]) {
      adj[a].insert(b);
      adj[b].insert(a);
    }
  }

  for (const auto& [k, nb] : adj) {
    if (nb.size() > 2) ++result.self_intersections;
  }

  // chain walks: open chains from degree-1 vertices first, then leftover loops
  std::set<int> visited;
  std::vector<std::vector<int>> chains;
  auto walk = [&](int start) {
    std::vector<int> chain{start};
    visited.insert(start);
    int cur = start, prev = -1;
    while (true) {
      int next = -1;
      for (int nb : adj[cur]) {
        if (nb != prev && !visited.count(nb)) {
          next = nb;
          break;
        }
      }
      if (next < 0) break;
      chain.push_back(next);
      visited.insert(next);
      prev = cur;
      cur = next;
    }
    return chain;
  };
  for (const auto& [k, nb] : adj) {
    if (nb.size() == 1 && !visited.count(k)) chains.push_back(walk(k));
  }
  for (const auto& [k, nb] : adj) {
    if (!visited.count(k)) chains.push_back(walk(k));
  }

  // antipodal identification: the cube grid is antipodally symmetric and F is even,
  // so the two copies of a curve carry bit-identical canonical point sets
  std::map<QuantKey, std::vector<int>> groups;
  for (size_t ci = 0; ci < chains.size(); ++ci) {
    QuantKey key{INT64_MAX, INT64_MAX, INT64_MAX};
    for (int idx : chains[ci]) {
      const QuantKey q = quantize(canonical_sign(pts[idx]), 1e5);
      if (q < key) key = q;
    }
    groups[key].push_back((int)ci);
  }

  int next_id = 0;
  for (const auto& [key, members] : groups) {
    if (members.size() == 2) ++result.antipodal_pairs;
    // deterministic representative: smallest quantized first vertex
    int pick = members[0];
    QuantKey best = quantize(pts[chains[pick][0]], 2e6);
    for (int ci : members) {
      const QuantKey q = quantize(pts[chains[ci][0]], 2e6);
      if (q < best) {
        best = q;
        pick = ci;
      }
    }
    const auto& chain = chains[pick];
    if (chain.size() < 3) continue;  // marching debris

    ModuliBranch branch;
    branch.id = next_id++;
    branch.chart = pt_face[chain.front()];
    for (int idx : chain) branch.points.push_back(pts[idx]);
    for (int e = 0; e < 2; ++e) {
      const Vec3& x = e == 0 ? branch.points.front() : branch.points.back();
      int which = -1;
      const double d = corner_distance(x, &which);
      branch.endpoints[e] = (d < result.label_radius) ? which : -1;
    }
    result.branches.push_back(std::move(branch));
  }

  std::set<int> incident;
  for (const auto& b : result.branches) {
    for (int e : b.endpoints)
      if (e >= 0) incident.insert(e);
  }
  result.corner_junctions = (int)incident.size();

  for (const auto& b : result.branches) {
    for (const auto& x : b.points) {
      const auto c = curvature({x[0], x[1], x[2]});
      if (std::abs(c.scalar * c.scalar - 2.0 * c.ricci_norm_sq) < kCornerPole) ++result.pole_flagged;
    }
  }
  return result;
}

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

void write_csv(const TraceResult& trace, std::ostream& os) {
  os << "branch_id,point_index,K,L,M,F_residual,S,lambda\n";
  for (const auto& b : trace.branches) {
    for (size_t i = 0; i < b.points.size(); ++i) {
      const auto& x = b.points[i];
      const ModelParams p{x[0], x[1], x[2]};
      os << b.id << ',' << i << ',' << fmt17(x[0]) << ',' << fmt17(x[1]) << ',' << fmt17(x[2])
         << ',' << fmt17(std::abs(variety_F(p))) << ',' << fmt17(curvature(p).scalar) << ',';
      try {
        os << fmt17(wk_number(p).lambda);
      } catch (const Error&) {
        // lambda undefined here: leave the field empty
      }
      os << '\n';
    }
  }
}

void write_svg(const TraceResult& trace, std::ostream& os) {
  static const char* palette[6] = {"#1f77b4", "#d62728", "#2ca02c",
                                   "#9467bd", "#ff7f0e", "#17becf"};
  auto px = [](double k) { return 500.0 + 450.0 * k; };
  auto py = [](double l) { return 500.0 - 450.0 * l; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\">\n";
  os << "<rect width=\"1000\" height=\"1000\" fill=\"white\"/>\n";
  os << "<circle cx=\"500\" cy=\"500\" r=\"450\" fill=\"none\" stroke=\"#999\" "
        "stroke-width=\"1\"/>\n";

  for (const auto& b : trace.branches) {
    const char* color = palette[b.id % 6];
    // draw in the upper hemisphere (M >= 0 representative); split where the
    // representative jumps to the antipodal sheet
    std::vector<std::vector<std::array<double, 2>>> runs(1);
    std::array<double, 3> prev{0, 0, 0};
    bool have_prev = false;
    for (const auto& x : b.points) {
      std::array<double, 3> h = (x[2] >= 0.0) ? x : std::array<double, 3>{-x[0], -x[1], -x[2]};
      if (have_prev) {
        const double jump = std::hypot(h[0] - prev[0], h[1] - prev[1]);
        if (jump > 0.2) runs.emplace_back();
      }
      runs.back().push_back({px(h[0]), py(h[1])});
      prev = h;
      have_prev = true;
    }
    for (const auto& run : runs) {
      if (run.size() < 2) continue;
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
      for (size_t i = 0; i < run.size(); ++i) {
        if (i) os << ' ';
        os << fmt2(run[i][0]) << ',' << fmt2(run[i][1]);
      }
      os << "\"/>\n";
    }
  }

  struct CornerMark {
    double x, y;
    const char* label;
  };
  const CornerMark marks[3] = {{px(1.0), py(0.0), "[1:0:0]"},
                               {px(0.0), py(1.0), "[0:1:0]"},
                               {px(0.0), py(0.0), "[0:0:1]"}};
  for (const auto& m : marks) {
    os << "<circle cx=\"" << fmt2(m.x) << "\" cy=\"" << fmt2(m.y)
       << "\" r=\"6\" fill=\"black\"/>\n";
    os << "<text x=\"" << fmt2(m.x + 10.0) << "\" y=\"" << fmt2(m.y - 10.0)
       << "\" font-family=\"monospace\" font-size=\"24\">" << m.label << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace wkspin
