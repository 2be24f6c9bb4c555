#include "aplab/report.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "aplab/io.hpp"

namespace aplab {

using nlohmann::json;

ReportItem item_from(const CheckReport& r) {
  ReportItem item;
  item.check = r.name;
  item.anchor = r.anchor;
  item.status = status_name(r.status);
  item.worst_violation = r.worst_violation;
  item.witness = r.witness;
  item.p = r.p;
  item.delta = r.delta;
  item.lambda = r.lambda;
  item.cells = r.grid_cells;
  item.radius = r.domain_radius;
  return item;
}

ReportItem item_from(const ConstantEstimate& e, const std::string& name,
                     const std::string& anchor) {
  ReportItem item;
  item.check = name;
  item.anchor = anchor;
  item.status = "recorded";
  item.worst_violation = e.value;
  item.witness = "window [" + std::to_string(e.witness.lo) + "," +
                 std::to_string(e.witness.hi) + "]";
  if (e.witness_subset)
    item.witness += " k=" + std::to_string(e.witness_k);
  item.witness += " family=" + family_name(e.family);
  if (e.p > 0.0) item.p = e.p;
  if (e.delta > 0.0) item.delta = e.delta;
  item.cells = e.grid_cells;
  item.radius = e.domain_radius;
  return item;
}

bool RunReport::overall_pass() const {
  for (const ReportItem& item : items)
    if (item.status == "fail") return false;
  return true;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string opt_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace

std::string report_csv(const RunReport& report) {
  std::string out =
      "check,anchor,status,worst_violation,witness,param_p,param_delta,"
      "param_lambda,N,L\n";
  for (const ReportItem& item : report.items) {
    out += csv_escape(item.check);
    out += ',';
    out += csv_escape(item.anchor);
    out += ',';
    out += item.status;
    out += ',';
    out += format_double(item.worst_violation);
    out += ',';
    out += csv_escape(item.witness);
    out += ',';
    out += opt_field(item.p);
    out += ',';
    out += opt_field(item.delta);
    out += ',';
    out += opt_field(item.lambda);
    out += ',';
    out += std::to_string(item.cells);
    out += ',';
    out += format_double(item.radius);
    out += '\n';
  }
  return out;
}

namespace {

// JSON has no inf/nan literals; carry them as strings so stored reports
// round-trip estimator flags faithfully.
json json_num(double v) {
  if (std::isfinite(v)) return json(v);
  return json(format_double(v));
}

double num_from_json(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
  }
  return j.get<double>();
}

json item_to_json(const ReportItem& item) {
  json j;
  j["check"] = item.check;
  j["anchor"] = item.anchor;
  j["status"] = item.status;
  j["worst_violation"] = json_num(item.worst_violation);
  j["witness"] = item.witness;
  j["param_p"] = item.p ? json(*item.p) : json(nullptr);
  j["param_delta"] = item.delta ? json(*item.delta) : json(nullptr);
  j["param_lambda"] = item.lambda ? json(*item.lambda) : json(nullptr);
  j["N"] = item.cells;
  j["L"] = item.radius;
  return j;
}

ReportItem item_from_json(const json& j) {
  ReportItem item;
  item.check = j.at("check").get<std::string>();
  item.anchor = j.at("anchor").get<std::string>();
  item.status = j.at("status").get<std::string>();
  item.worst_violation = num_from_json(j.at("worst_violation"));
  item.witness = j.at("witness").get<std::string>();
  if (!j.at("param_p").is_null()) item.p = j.at("param_p").get<double>();
  if (!j.at("param_delta").is_null())
    item.delta = j.at("param_delta").get<double>();
  if (!j.at("param_lambda").is_null())
    item.lambda = j.at("param_lambda").get<double>();
  item.cells = j.at("N").get<int>();
  item.radius = j.at("L").get<double>();
  return item;
}

}  // namespace

json report_to_json(const RunReport& report) {
  json j;
  j["command"] = report.command;
  j["config"] = report.config_echo;
  j["elapsed_seconds"] = report.elapsed_seconds;
  j["overall"] = report.overall_pass() ? "pass" : "fail";
  j["items"] = json::array();
  for (const ReportItem& item : report.items)
    j["items"].push_back(item_to_json(item));
  j["series"] = json::array();
  for (const RefinementSeries& s : report.series) {
    json sj;
    sj["name"] = s.name;
    sj["param"] = s.param_name;
    sj["points"] = json::array();
    for (const auto& [x, y] : s.points)
      sj["points"].push_back(json::array({json_num(x), json_num(y)}));
    j["series"].push_back(sj);
  }
  return j;
}

RunReport report_from_json(const json& j) {
  RunReport report;
  report.command = j.at("command").get<std::string>();
  report.config_echo = j.at("config");
  report.elapsed_seconds = j.at("elapsed_seconds").get<double>();
  for (const auto& item : j.at("items"))
    report.items.push_back(item_from_json(item));
  for (const auto& sj : j.at("series")) {
    RefinementSeries s;
    s.name = sj.at("name").get<std::string>();
    s.param_name = sj.at("param").get<std::string>();
    for (const auto& pt : sj.at("points"))
      s.points.emplace_back(num_from_json(pt.at(0)), num_from_json(pt.at(1)));
    report.series.push_back(std::move(s));
  }
  return report;
}

void emit_report(const RunReport& report,
                 const std::filesystem::path& out_dir,
                 const std::string& format) {
  if (format != "csv" && format != "json")
    throw ValidationError("unknown report format: " + format);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec && !std::filesystem::is_directory(out_dir))
    throw ValidationError("cannot create output dir: " + out_dir.string());

  {
    std::ofstream out(out_dir / "report.json");
    if (!out)
      throw ValidationError("cannot write " +
                            (out_dir / "report.json").string());
    out << report_to_json(report).dump(2) << '\n';
  }
  if (format == "csv") {
    std::ofstream out(out_dir / "report.csv");
    if (!out)
      throw ValidationError("cannot write " +
                            (out_dir / "report.csv").string());
    out << report_csv(report);
  }
  for (const RefinementSeries& s : report.series) {
    std::ofstream out(out_dir / (s.name + ".csv"));
    if (!out)
      throw ValidationError("cannot write series " + s.name);
    out << s.param_name << ",value\n";
    for (const auto& [x, y] : s.points)
      out << format_double(x) << ',' << format_double(y) << '\n';
  }
}

}  // namespace aplab
