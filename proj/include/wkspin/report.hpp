#pragma once

#include <string>

#include "wkspin/moduli.hpp"
#include "wkspin/wk_core.hpp"

namespace wkspin {

/// Formats a double with 17 significant digits (round-trip exact, diff-stable).
std::string format_double(double v);

/// JSON serialization of a verification run. schema_version 1; keys emitted in a
/// fixed order so identical inputs produce byte-identical documents.
/// duration_ms is emitted only when nonnegative.
std::string run_report_json(const std::string& command, const ToleranceConfig& tol,
                            const ConventionRecord& conv, const EDReport& report,
                            double duration_ms = -1.0);

std::string ed_report_text(const EDReport& report);

}  // namespace wkspin
