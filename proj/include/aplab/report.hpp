#pragma once

#include <filesystem>
#include <optional>
#include <ostream>

#include <json.hpp>

#include "aplab/checks.hpp"
#include "aplab/weights.hpp"

namespace aplab {

/// One row of a run report: a check outcome or a recorded constant.
struct ReportItem {
  std::string check;
  std::string anchor;
  std::string status;
  double worst_violation = 0.0;  // margin for checks, value for estimates
  std::string witness;
  std::optional<double> p;
  std::optional<double> delta;
  std::optional<double> lambda;
  int cells = 0;
  double radius = 0.0;
};

ReportItem item_from(const CheckReport& r);
ReportItem item_from(const ConstantEstimate& e, const std::string& name,
                     const std::string& anchor);

/// Plot data for a refinement study, emitted as "<param>,value" rows.
struct RefinementSeries {
  std::string name;        // file stem
  std::string param_name;  // "N" or "L"
  std::vector<std::pair<double, double>> points;
};

struct RunReport {
  std::string command;
  nlohmann::json config_echo;
  std::vector<ReportItem> items;
  std::vector<RefinementSeries> series;
  double elapsed_seconds = 0.0;

  // A run fails only on pass-mode failures; recorded and inconclusive rows
  // never block.
  bool overall_pass() const;
};

// CSV body with the fixed column set
// check,anchor,status,worst_violation,witness,param_p,param_delta,param_lambda,N,L
std::string report_csv(const RunReport& report);

nlohmann::json report_to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& j);

// Writes report.json (always), report.csv when format is "csv", and one
// "<series>.csv" per refinement study.
void emit_report(const RunReport& report,
                 const std::filesystem::path& out_dir,
                 const std::string& format);

}  // namespace aplab
