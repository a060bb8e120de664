#include "wkspin/report.hpp"

#include <cstdio>
#include <sstream>

namespace wkspin {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  return out;
}

const char* verdict_name(Verdict v) { return v == Verdict::Pass ? "pass" : "fail"; }
const char* sign_name(SignBranch s) { return s == SignBranch::Plus ? "plus" : "minus"; }

}  // namespace

std::string run_report_json(const std::string& command, const ToleranceConfig& tol,
                            const ConventionRecord& conv, const EDReport& r, double duration_ms) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"schema_version\": 1,\n";
  os << "  \"command\": \"" << json_escape(command) << "\",\n";
  os << "  \"tolerances\": {\n";
  os << "    \"defect_tol\": " << format_double(tol.defect_tol) << ",\n";
  os << "    \"residual_tol\": " << format_double(tol.residual_tol) << ",\n";
  os << "    \"root_cluster_tol\": " << format_double(tol.root_cluster_tol) << ",\n";
  os << "    \"ode_step\": " << format_double(tol.ode_step) << ",\n";
  os << "    \"trace_polish_tol\": " << format_double(tol.trace_polish_tol) << "\n";
  os << "  },\n";
  os << "  \"convention\": {\n";
  os << "    \"clifford_sign\": " << conv.clifford_sign << ",\n";
  os << "    \"orientation\": " << conv.orientation << ",\n";
  os << "    \"spin_sign\": " << conv.spin_sign << ",\n";
  os << "    \"fixture_defect\": " << format_double(conv.fixture_defect) << ",\n";
  os << "    \"cross_check_defect\": " << format_double(conv.cross_check_defect) << "\n";
  os << "  },\n";
  os << "  \"report\": {\n";
  os << "    \"params\": [" << format_double(r.params.K) << ", " << format_double(r.params.L)
     << ", " << format_double(r.params.M) << "],\n";
  os << "    \"variety_residual\": " << format_double(r.variety_residual) << ",\n";
  os << "    \"variety_residual_normalized\": " << format_double(r.variety_residual_normalized)
     << ",\n";
  if (r.lambda_valid) {
    os << "    \"lambda_theorem\": " << format_double(r.lambda_theorem.lambda) << ",\n";
    os << "    \"lambda_sign_branch\": \"" << sign_name(r.lambda_theorem.branch) << "\",\n";
  } else {
    os << "    \"lambda_theorem\": null,\n";
    os << "    \"lambda_sign_branch\": null,\n";
  }
  os << "    \"lambda_solved\": [";
  for (size_t i = 0; i < r.lambda_solved.size(); ++i) {
    if (i) os << ", ";
    os << format_double(r.lambda_solved[i]);
  }
  os << "],\n";
  os << "    \"integrability_defect\": " << format_double(r.integrability) << ",\n";
  os << "    \"spinor_space_dim\": " << r.spinor_space_dim << ",\n";
  os << "    \"einstein_dirac_residual\": " << format_double(r.einstein_dirac) << ",\n";
  os << "    \"ed_sign\": \"" << sign_name(r.ed_sign) << "\",\n";
  os << "    \"dirac_residual\": " << format_double(r.dirac_residual) << ",\n";
  os << "    \"norm_drift\": " << format_double(r.norm_drift) << ",\n";
  os << "    \"holonomy_defect\": [" << format_double(r.holonomy_small) << ", "
     << format_double(r.holonomy_large) << "],\n";
  os << "    \"pole_flag\": " << (r.pole_flag ? "true" : "false") << ",\n";
  os << "    \"verdict\": \"" << verdict_name(r.verdict) << "\",\n";
  os << "    \"reasons\": [";
  for (size_t i = 0; i < r.reasons.size(); ++i) {
    if (i) os << ", ";
    os << '"' << json_escape(r.reasons[i]) << '"';
  }
  os << "]\n";
  os << "  }";
  if (duration_ms >= 0.0) {
    os << ",\n  \"duration_ms\": " << format_double(duration_ms) << "\n";
  } else {
    os << "\n";
  }
  os << "}\n";
  return os.str();
}

std::string ed_report_text(const EDReport& r) {
  std::ostringstream os;
  os << "point (K,L,M) = (" << format_double(r.params.K) << ", " << format_double(r.params.L)
     << ", " << format_double(r.params.M) << ")\n";
  const auto c = curvature(r.params);
  os << "scalar curvature S        : " << format_double(c.scalar) << "\n";
  os << "ricci                     : diag(" << format_double(c.ricci[0]) << ", "
     << format_double(c.ricci[1]) << ", " << format_double(c.ricci[2]) << ")\n";
  os << "variety residual |F|      : " << format_double(r.variety_residual) << " (normalized "
     << format_double(r.variety_residual_normalized) << ")\n";
  if (r.lambda_valid) {
    os << "eigenvalue (formula)      : " << format_double(r.lambda_theorem.lambda) << "  ["
       << (r.lambda_theorem.branch == SignBranch::Plus ? "+" : "-") << " branch]\n";
  } else {
    os << "eigenvalue (formula)      : undefined\n";
  }
  os << "eigenvalues (integrable)  :";
  for (double l : r.lambda_solved) os << ' ' << format_double(l);
  if (r.lambda_solved.empty()) os << " none";
  os << '\n';
  os << "integrability defect      : " << format_double(r.integrability) << '\n';
  os << "solution space dimension  : " << r.spinor_space_dim << '\n';
  os << "einstein-dirac residual   : " << format_double(r.einstein_dirac) << "  [sign "
     << (r.ed_sign == SignBranch::Plus ? "+" : "-") << "]\n";
  os << "dirac eigen residual      : " << format_double(r.dirac_residual) << '\n';
  os << "norm drift                : " << format_double(r.norm_drift) << '\n';
  os << "holonomy defect (t, t/2)  : " << format_double(r.holonomy_large) << ", "
     << format_double(r.holonomy_small) << '\n';
  if (r.pole_flag) os << "warning: |S^2 - 2|Ric|^2| < 1e-8 (eigenvalue formula pole)\n";
  os << "verdict                   : " << (r.verdict == Verdict::Pass ? "PASS" : "FAIL") << '\n';
  for (const auto& reason : r.reasons) os << "  - " << reason << '\n';
  return os.str();
}

}  // namespace wkspin
