#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wkspin/moduli.hpp"
#include "wkspin/report.hpp"
#include "wkspin/wk_core.hpp"

namespace {

using namespace wkspin;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInvalid = 2;

bool finite3(double a, double b, double c) {
  return std::isfinite(a) && std::isfinite(b) && std::isfinite(c);
}

const char* kind_name(SpaceKind k) {
  switch (k) {
    case SpaceKind::Flat: return "flat";
    case SpaceKind::Einstein: return "einstein";
    default: return "generic";
  }
}

void print_conventions(const ConventionRecord& conv) {
  std::cout << "conventions: clifford_sign=" << conv.clifford_sign
            << " orientation=" << conv.orientation << " spin_sign=" << conv.spin_sign
            << " fixture_defect=" << format_double(conv.fixture_defect)
            << " cross_check_defect=" << format_double(conv.cross_check_defect) << "\n";
}

int cmd_analyze(double K, double L, double M) {
  if (!finite3(K, L, M)) {
    std::cerr << "error: non-finite input\n";
    return kExitInvalid;
  }
  const ModelParams p{K, L, M};
  const auto c = curvature(p);
  const auto cls = classify(p);
  const auto d = coframe_differentials(p);

  std::cout << "point (K,L,M) = (" << format_double(K) << ", " << format_double(L) << ", "
            << format_double(M) << ")\n";
  std::cout << "ricci          : diag(" << format_double(c.ricci[0]) << ", "
            << format_double(c.ricci[1]) << ", " << format_double(c.ricci[2]) << ")\n";
  std::cout << "scalar S       : " << format_double(c.scalar) << "\n";
  std::cout << "|Ric|^2        : " << format_double(c.ricci_norm_sq) << "\n";
  std::cout << "brackets       : (" << format_double(c.bracket[0]) << ", "
            << format_double(c.bracket[1]) << ", " << format_double(c.bracket[2]) << ")\n";
  std::cout << "coframe d      : (" << format_double(d[0]) << ", " << format_double(d[1]) << ", "
            << format_double(d[2]) << ")\n";
  std::cout << "class          : " << kind_name(cls.kind) << " (sign S: " << cls.scalar_sign
            << ")\n";
  std::cout << "variety F      : " << format_double(variety_F(p)) << "\n";
  try {
    const auto m = standard_basis_metric(p);
    std::cout << "so(3) metric   : diag(" << format_double(m.m11) << ", " << format_double(m.m22)
              << ", " << format_double(m.m33) << ")\n";
  } catch (const Error& e) {
    std::cout << "so(3) metric   : degenerate (" << e.what() << ")\n";
  }
  return kExitPass;
}

int cmd_verify(double K, double L, double M, bool json, bool timings,
               const ToleranceConfig& tol) {
  if (!finite3(K, L, M) || (K == 0.0 && L == 0.0 && M == 0.0)) {
    std::cerr << "error: invalid input point\n";
    return kExitInvalid;
  }
  const auto t0 = std::chrono::steady_clock::now();
  const auto report = verify({K, L, M}, tol);
  const auto t1 = std::chrono::steady_clock::now();
  const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

  if (json) {
    std::ostringstream cmd;
    cmd << "verify " << format_double(K) << " " << format_double(L) << " " << format_double(M);
    std::cout << run_report_json(cmd.str(), tol, calibrated_conventions(), report,
                                 timings ? ms : -1.0);
  } else {
    std::cout << ed_report_text(report);
    if (timings) std::cout << "duration_ms: " << format_double(ms) << "\n";
  }
  return report.verdict == Verdict::Pass ? kExitPass : kExitFail;
}

int cmd_solve(double K, double M) {
  if (!std::isfinite(K) || !std::isfinite(M)) {
    std::cerr << "error: non-finite input\n";
    return kExitInvalid;
  }
  try {
    const auto roots = solve_for_L(K, M);
    std::cout << "F(" << format_double(K) << ", L, " << format_double(M) << ") = 0 roots:\n";
    for (double r : roots) {
      std::cout << "  L = " << format_double(r)
                << "   |F| = " << format_double(std::abs(variety_F({K, r, M}))) << "\n";
    }
    if (roots.empty()) std::cout << "  (no real roots)\n";
    return kExitPass;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

int cmd_trace(int resolution, const std::string& csv_path, const std::string& svg_path,
              bool serial) {
  if (resolution < 64) {
    std::cerr << "error: resolution must be >= 64\n";
    return kExitInvalid;
  }
  TraceOptions opts;
  opts.resolution = resolution;
  opts.parallel = !serial;
  const auto trace = trace_variety(opts);

  std::cout << trace.branches.size() << " branches, " << trace.corner_junctions
            << " junctions\n";
  for (const auto& b : trace.branches) {
    auto name = [](int e) {
      switch (e) {
        case 0: return "[1:0:0]";
        case 1: return "[0:1:0]";
        case 2: return "[0:0:1]";
        default: return "open";
      }
    };
    std::cout << "  branch " << b.id << ": " << b.points.size() << " points, "
              << name(b.endpoints[0]) << " -- " << name(b.endpoints[1]) << "\n";
  }
  if (trace.self_intersections > 0) {
    std::cout << "detected self-intersections: " << trace.self_intersections << "\n";
  }
  if (trace.pole_flagged > 0) {
    std::cout << "eigenvalue-formula pole flags: " << trace.pole_flagged << "\n";
  }

  if (!csv_path.empty()) {
    std::ofstream os(csv_path, std::ios::binary);
    if (!os) {
      std::cerr << "error: cannot open " << csv_path << "\n";
      return kExitInvalid;
    }
    write_csv(trace, os);
    std::cout << "csv: " << csv_path << "\n";
  }
  if (!svg_path.empty()) {
    std::ofstream os(svg_path, std::ios::binary);
    if (!os) {
      std::cerr << "error: cannot open " << svg_path << "\n";
      return kExitInvalid;
    }
    write_svg(trace, os);
    std::cout << "svg: " << svg_path << "\n";
  }
  return kExitPass;
}

int cmd_sasaki(double K, const ToleranceConfig& tol) {
  if (!std::isfinite(K) || K == 0.0) {
    std::cerr << "error: K must be finite and nonzero\n";
    return kExitInvalid;
  }
  const auto [lm, lp] = km_locus(K);
  bool all_pass = true;
  for (double L : {lm, lp}) {
    std::cout << "=== K = M = " << format_double(K) << ", L = " << format_double(L) << " ===\n";
    const auto report = verify({K, L, K}, tol);
    std::cout << ed_report_text(report) << "\n";
    all_pass = all_pass && report.verdict == Verdict::Pass;
  }
  return all_pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvature, weak Killing spinor certification and moduli tracing for the "
               "left-invariant family X3(K,L,M)"};
  app.require_subcommand(0, 1);

  ToleranceConfig tol;
  bool show_conventions = false;
  app.add_option("--tol-defect", tol.defect_tol, "integrability defect tolerance");
  app.add_option("--tol-residual", tol.residual_tol, "residual tolerance");
  app.add_option("--tol-root-cluster", tol.root_cluster_tol, "root clustering tolerance");
  app.add_option("--ode-step", tol.ode_step, "fixed integration step");
  app.add_option("--tol-trace-polish", tol.trace_polish_tol, "trace polish tolerance");
  app.add_flag("--show-conventions", show_conventions, "print the calibrated sign conventions");

  double K = 0, L = 0, M = 0;
  auto* analyze = app.add_subcommand("analyze", "curvature data of one point");
  analyze->add_option("K", K)->required();
  analyze->add_option("L", L)->required();
  analyze->add_option("M", M)->required();

  bool json = false, timings = false;
  auto* verify_cmd = app.add_subcommand("verify", "full certification of one point");
  verify_cmd->add_option("K", K)->required();
  verify_cmd->add_option("L", L)->required();
  verify_cmd->add_option("M", M)->required();
  verify_cmd->add_flag("--json", json, "JSON report on stdout");
  verify_cmd->add_flag("--timings", timings, "include wall-clock duration");

  double sk = 0, sm = 0;
  auto* solve = app.add_subcommand("solve", "real roots L of F(K, L, M) = 0");
  solve->add_option("--k", sk, "K value")->required();
  solve->add_option("--m", sm, "M value")->required();

  int resolution = 512;
  std::string csv_path, svg_path;
  bool serial = false;
  auto* trace = app.add_subcommand("trace", "trace the moduli curves");
  trace->add_option("--resolution", resolution, "grid cells per cube-face edge");
  trace->add_option("--csv", csv_path, "CSV output path");
  trace->add_option("--svg", svg_path, "SVG output path");
  trace->add_flag("--serial", serial, "use the serial reference kernel");

  double sasaki_k = 1.0;
  auto* sasaki = app.add_subcommand("sasaki", "verify both K=M locus points");
  sasaki->add_option("--k", sasaki_k, "K value")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (show_conventions) print_conventions(wkspin::calibrated_conventions());
    if (analyze->parsed()) return cmd_analyze(K, L, M);
    if (verify_cmd->parsed()) return cmd_verify(K, L, M, json, timings, tol);
    if (solve->parsed()) return cmd_solve(sk, sm);
    if (trace->parsed()) return cmd_trace(resolution, csv_path, svg_path, serial);
    if (sasaki->parsed()) return cmd_sasaki(sasaki_k, tol);
    if (!show_conventions) std::cout << app.help();
    return kExitPass;
  } catch (const wkspin::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}
