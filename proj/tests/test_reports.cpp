#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>
#include <random>

#include "wkspin/report.hpp"

using namespace wkspin;

TEST_CASE("doubles round-trip through 17 significant digits") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = U(rng) * std::pow(10.0, int(i % 13) - 6);
    const double back = std::stod(format_double(v));
    CHECK(back == v);
  }
}

TEST_CASE("run report json round-trips byte-identically") {
  const auto report = verify({1.0, 0.25 * (1.0 - std::sqrt(5.0)), 1.0});
  const ToleranceConfig tol;
  const auto& conv = calibrated_conventions();
  const std::string s1 = run_report_json("verify 1 x 1", tol, conv, report);

  // parse, rebuild the report from the document, re-serialize
  const auto doc = nlohmann::json::parse(s1);
  CHECK(doc.at("schema_version").get<int>() == 1);

  EDReport rebuilt;
  const auto& r = doc.at("report");
  const auto params = r.at("params");
  rebuilt.params = {params[0].get<double>(), params[1].get<double>(), params[2].get<double>()};
  rebuilt.variety_residual = r.at("variety_residual").get<double>();
  rebuilt.variety_residual_normalized = r.at("variety_residual_normalized").get<double>();
  rebuilt.lambda_valid = !r.at("lambda_theorem").is_null();
  if (rebuilt.lambda_valid) {
    rebuilt.lambda_theorem.lambda = r.at("lambda_theorem").get<double>();
    rebuilt.lambda_theorem.branch =
        r.at("lambda_sign_branch").get<std::string>() == "plus" ? SignBranch::Plus
                                                                : SignBranch::Minus;
  }
  for (const auto& v : r.at("lambda_solved")) rebuilt.lambda_solved.push_back(v.get<double>());
  rebuilt.integrability = r.at("integrability_defect").get<double>();
  rebuilt.spinor_space_dim = r.at("spinor_space_dim").get<int>();
  rebuilt.einstein_dirac = r.at("einstein_dirac_residual").get<double>();
  rebuilt.ed_sign =
      r.at("ed_sign").get<std::string>() == "plus" ? SignBranch::Plus : SignBranch::Minus;
  rebuilt.dirac_residual = r.at("dirac_residual").get<double>();
  rebuilt.norm_drift = r.at("norm_drift").get<double>();
  rebuilt.holonomy_small = r.at("holonomy_defect")[0].get<double>();
  rebuilt.holonomy_large = r.at("holonomy_defect")[1].get<double>();
  rebuilt.pole_flag = r.at("pole_flag").get<bool>();
  rebuilt.verdict =
      r.at("verdict").get<std::string>() == "pass" ? Verdict::Pass : Verdict::Fail;
  for (const auto& v : r.at("reasons")) rebuilt.reasons.push_back(v.get<std::string>());

  ToleranceConfig tol2;
  const auto& t = doc.at("tolerances");
  tol2.defect_tol = t.at("defect_tol").get<double>();
  tol2.residual_tol = t.at("residual_tol").get<double>();
  tol2.root_cluster_tol = t.at("root_cluster_tol").get<double>();
  tol2.ode_step = t.at("ode_step").get<double>();
  tol2.trace_polish_tol = t.at("trace_polish_tol").get<double>();

  ConventionRecord conv2;
  const auto& c = doc.at("convention");
  conv2.clifford_sign = c.at("clifford_sign").get<int>();
  conv2.orientation = c.at("orientation").get<int>();
  conv2.spin_sign = c.at("spin_sign").get<int>();
  conv2.fixture_defect = c.at("fixture_defect").get<double>();
  conv2.cross_check_defect = c.at("cross_check_defect").get<double>();

  const std::string s2 =
      run_report_json(doc.at("command").get<std::string>(), tol2, conv2, rebuilt);
  CHECK(s1 == s2);
}

TEST_CASE("duration appears only when requested") {
  const auto report = verify({1, -1, 1});
  const ToleranceConfig tol;
  const auto& conv = calibrated_conventions();
  const std::string without = run_report_json("verify 1 -1 1", tol, conv, report);
  const std::string with = run_report_json("verify 1 -1 1", tol, conv, report, 12.5);
  CHECK(without.find("duration_ms") == std::string::npos);
  CHECK(with.find("duration_ms") != std::string::npos);
  CHECK(nlohmann::json::parse(with).at("duration_ms").get<double>() == 12.5);
}

TEST_CASE("text report carries the verdict and reasons") {
  const auto report = verify({1, -1, 1});
  const std::string text = ed_report_text(report);
  CHECK(text.find("FAIL") != std::string::npos);
  CHECK(text.find("variety residual") != std::string::npos);
}
