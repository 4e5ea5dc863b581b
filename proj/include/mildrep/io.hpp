#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mildrep/flow.hpp"
#include "mildrep/measures.hpp"
#include "mildrep/thresholds.hpp"

namespace mildrep {

/// 17 significant digits ("%.17g"); "nan", "inf" or "-inf" when not finite.
std::string format_real(double x);

/// {"dim": n, "points": [[...], ...], "weights": [...]}, one inner array per point.
nlohmann::json measure_to_json(const DiscreteMeasure& mu);

/// Inverse of measure_to_json; throws DomainError on a malformed document.
DiscreteMeasure measure_from_json(const nlohmann::json& doc);

/// Header n,beta,underline_alpha,alpha_plus_lo,alpha_plus_hi,alpha_star and
/// one row per report.
std::string reports_to_csv(const std::vector<ThresholdReport>& reports);

nlohmann::json reports_to_json(const std::vector<ThresholdReport>& reports);

/// Final measure, energy, classification, status and trace of a run.
nlohmann::json flow_result_to_json(const FlowResult& result);

/// Header step,energy and one row per trace entry.
std::string trace_to_csv(const std::vector<double>& trace);

}  // namespace mildrep
