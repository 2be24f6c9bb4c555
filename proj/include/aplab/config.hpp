#pragma once

#include <filesystem>

#include <json.hpp>

#include "aplab/checks.hpp"
#include "aplab/weights.hpp"

namespace aplab {

/// Parsed experiment configuration. One config drives any subcommand; each
/// subcommand reads the parts it needs. Unknown keys are rejected so silent
/// typos cannot skew an experiment.
struct ExperimentConfig {
  // grid
  double radius = 8.0;
  int cells = 256;

  // weight
  WeightSpec weight;

  // exponents
  double p = 2.0;
  double r = 2.0;
  double delta = 0.5;
  double lambda = 0.5;
  double epsilon = 0.05;
  double tau = 0.5;

  // family
  FamilySpec family;

  WindowFamily windows = WindowFamily::All;

  std::vector<std::string> checks;      // check subcommand
  std::vector<std::string> estimators;  // constants subcommand
  std::vector<double> delta_ladder;
  std::vector<double> lambda_grid;

  std::vector<int> refine_cells;    // refinement in cell count
  std::vector<double> refine_radii; // refinement in domain radius

  int trials = 50;
  double constant = 2.0;  // non-degeneracy C

  nlohmann::json echo;  // raw config, for the report

  Grid1D grid() const { return Grid1D::symmetric(radius, cells); }
  WeightFunction make_weight_on(const Grid1D& g) const {
    return make_weight(weight, g);
  }
};

ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_json(const nlohmann::json& j,
                                   const std::filesystem::path& base_dir);

std::vector<double> default_delta_ladder();

}  // namespace aplab
