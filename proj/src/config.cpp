#include "aplab/config.hpp"

#include <fstream>

#include "aplab/io.hpp"

namespace aplab {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const std::string& ctx) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* key : allowed)
      if (it.key() == key) {
        known = true;
        break;
      }
    if (!known)
      throw ValidationError("config: unknown key '" + it.key() + "' in " +
                            ctx);
  }
}

double get_num(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number())
    throw ValidationError(std::string("config: '") + key +
                          "' must be a number");
  return j[key].get<double>();
}

int get_int(const json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer())
    throw ValidationError(std::string("config: '") + key +
                          "' must be an integer");
  return j[key].get<int>();
}

WeightSpec parse_weight(const json& j,
                        const std::filesystem::path& base_dir) {
  reject_unknown(j, {"kind", "value", "exponent", "s", "t", "path"}, "weight");
  if (!j.contains("kind") || !j["kind"].is_string())
    throw ValidationError("config: weight.kind is required");
  const std::string kind = j["kind"].get<std::string>();
  WeightSpec spec;
  if (kind == "constant") {
    spec.kind = WeightKind::Constant;
    spec.value = get_num(j, "value", 1.0);
  } else if (kind == "power") {
    spec.kind = WeightKind::Power;
    spec.exponent = get_num(j, "exponent", 0.0);
  } else if (kind == "vanishing") {
    spec.kind = WeightKind::Vanishing;
  } else if (kind == "complement") {
    spec.kind = WeightKind::Complement;
    spec.s = get_num(j, "s", -1.0);
    spec.t = get_num(j, "t", 1.0);
  } else if (kind == "custom") {
    spec.kind = WeightKind::Custom;
    if (!j.contains("path") || !j["path"].is_string())
      throw ValidationError("config: custom weight needs a path");
    const std::filesystem::path p = j["path"].get<std::string>();
    const GridFunction f =
        read_grid_function_csv(p.is_absolute() ? p : base_dir / p);
    validate_values(f, /*require_nonnegative=*/true, "custom weight");
    spec.custom = f.values;
  } else {
    throw ValidationError("config: unknown weight kind '" + kind + "'");
  }
  return spec;
}

template <class T>
std::vector<T> parse_array(const json& j, const char* key,
                           std::vector<T> fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_array())
    throw ValidationError(std::string("config: '") + key +
                          "' must be an array");
  std::vector<T> out;
  for (const auto& v : j[key]) out.push_back(v.get<T>());
  return out;
}

template <class T>
void require_increasing(const std::vector<T>& v, const char* key) {
  for (size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1]))
      throw ValidationError(std::string("config: '") + key +
                            "' must increase strictly");
}

FamilySpec parse_family(const json& j) {
  reject_unknown(j, {"seed", "epsilon", "inner_half", "generators"}, "family");
  FamilySpec spec = default_family_spec(1);
  if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
  spec.epsilon = get_num(j, "epsilon", spec.epsilon);
  if (j.contains("inner_half")) spec.inner_half = j["inner_half"].get<bool>();
  if (j.contains("generators")) {
    if (!j["generators"].is_array())
      throw ValidationError("config: family.generators must be an array");
    spec.generators.clear();
    for (const auto& g : j["generators"]) {
      reject_unknown(g, {"kind", "count"}, "family.generators");
      GeneratorSpec gen;
      gen.kind = gen_kind_from_name(g.at("kind").get<std::string>());
      gen.count = get_int(g, "count", 1);
      if (gen.count < 1)
        throw ValidationError("config: generator count must be >= 1");
      spec.generators.push_back(gen);
    }
  }
  return spec;
}

}  // namespace

std::vector<double> default_delta_ladder() {
  std::vector<double> ladder;
  for (int i = 1; i <= 10; ++i) ladder.push_back(i / 10.0);
  return ladder;
}

ExperimentConfig parse_config_json(const json& j,
                                   const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ValidationError("config: top level must be an object");
  reject_unknown(j,
                 {"grid", "weight", "exponents", "family", "windows", "checks",
                  "estimators", "delta_ladder", "lambda_grid", "refine",
                  "trials", "constant"},
                 "top level");
  ExperimentConfig cfg;
  cfg.echo = j;

  if (j.contains("grid")) {
    const json& g = j["grid"];
    reject_unknown(g, {"radius", "cells"}, "grid");
    cfg.radius = get_num(g, "radius", cfg.radius);
    cfg.cells = get_int(g, "cells", cfg.cells);
  }
  if (!(cfg.radius > 0.0)) throw ValidationError("config: grid.radius must be > 0");
  if (cfg.cells < 2 || cfg.cells % 2 != 0)
    throw ValidationError("config: grid.cells must be even and >= 2");

  if (j.contains("weight")) cfg.weight = parse_weight(j["weight"], base_dir);

  if (j.contains("exponents")) {
    const json& e = j["exponents"];
    reject_unknown(e, {"p", "r", "delta", "lambda", "epsilon", "tau"},
                   "exponents");
    cfg.p = get_num(e, "p", cfg.p);
    cfg.r = get_num(e, "r", cfg.r);
    cfg.delta = get_num(e, "delta", cfg.delta);
    cfg.lambda = get_num(e, "lambda", cfg.lambda);
    cfg.epsilon = get_num(e, "epsilon", cfg.epsilon);
    cfg.tau = get_num(e, "tau", cfg.tau);
  }
  if (!(cfg.p > 1.0)) throw ValidationError("config: exponents.p must be > 1");
  if (!(cfg.delta > 0.0 && cfg.delta <= 1.0))
    throw ValidationError("config: exponents.delta must lie in (0,1]");
  if (!(cfg.lambda > 0.0 && cfg.lambda < 1.0))
    throw ValidationError("config: exponents.lambda must lie in (0,1)");
  if (!(cfg.tau > 0.0 && cfg.tau < 1.0))
    throw ValidationError("config: exponents.tau must lie in (0,1)");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0))
    throw ValidationError("config: exponents.epsilon must lie in (0,1)");
  if (!(cfg.r > 0.0)) throw ValidationError("config: exponents.r must be > 0");

  cfg.family = default_family_spec(1);
  if (j.contains("family")) cfg.family = parse_family(j["family"]);

  // Full window sweeps by default up to 512 cells; beyond that the default
  // drops to dyadic lengths with all shifts.
  cfg.windows =
      cfg.cells <= 512 ? WindowFamily::All : WindowFamily::DyadicShifts;
  if (j.contains("windows"))
    cfg.windows = family_from_name(j["windows"].get<std::string>());

  cfg.checks = parse_array<std::string>(j, "checks", {});
  cfg.estimators = parse_array<std::string>(
      j, "estimators", {"ap", "ainfty", "doubling", "np", "am"});
  cfg.delta_ladder =
      parse_array<double>(j, "delta_ladder", default_delta_ladder());
  require_increasing(cfg.delta_ladder, "delta_ladder");
  for (double d : cfg.delta_ladder)
    if (!(d > 0.0 && d <= 1.0))
      throw ValidationError("config: delta_ladder entries must lie in (0,1]");
  cfg.lambda_grid = parse_array<double>(j, "lambda_grid", {});
  require_increasing(cfg.lambda_grid, "lambda_grid");
  for (double l : cfg.lambda_grid)
    if (!(l > 0.0 && l < 1.0))
      throw ValidationError("config: lambda_grid entries must lie in (0,1)");

  if (j.contains("refine")) {
    const json& rj = j["refine"];
    reject_unknown(rj, {"cells", "radii"}, "refine");
    cfg.refine_cells = parse_array<int>(rj, "cells", {});
    cfg.refine_radii = parse_array<double>(rj, "radii", {});
    require_increasing(cfg.refine_cells, "refine.cells");
    require_increasing(cfg.refine_radii, "refine.radii");
    for (int n : cfg.refine_cells)
      if (n < 2 || n % 2 != 0)
        throw ValidationError("config: refine.cells must be even and >= 2");
  }

  cfg.trials = get_int(j, "trials", cfg.trials);
  if (cfg.trials < 1) throw ValidationError("config: trials must be >= 1");
  cfg.constant = get_num(j, "constant", cfg.constant);
  if (!(cfg.constant > 0.0))
    throw ValidationError("config: constant must be > 0");
  return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError("config parse error: " + std::string(e.what()));
  }
  return parse_config_json(j, path.parent_path());
}

}  // namespace aplab
