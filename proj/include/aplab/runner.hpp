#pragma once

#include "aplab/config.hpp"
#include "aplab/report.hpp"

namespace aplab {

// Subcommand executors. Per-item size or parameter errors are recorded in the
// report as failed rows with the error text; the run itself keeps going.
RunReport run_constants(const ExperimentConfig& cfg);
RunReport run_checks(const ExperimentConfig& cfg);
RunReport run_search_lambda0(const ExperimentConfig& cfg);
RunReport run_wp_ratio(const ExperimentConfig& cfg);
RunReport run_nondegen(const ExperimentConfig& cfg);

}  // namespace aplab
