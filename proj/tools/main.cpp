// aplab: desk-scale laboratory for maximal operators and Muckenhoupt-type
// weight constants on finite 1-D grids.
//
// Exit codes: 0 all pass-mode checks passed, 1 at least one failed,
// 2 usage or configuration error.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "aplab/config.hpp"
#include "aplab/parallel.hpp"
#include "aplab/report.hpp"
#include "aplab/runner.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::string format = "csv";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
  auto* opt = cmd->add_option("--config", args.config_path, "experiment config (JSON)");
  if (config_required) opt->required();
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--format", args.format, "report format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", args.seed, "override the family seed")
      ->each([&args](const std::string&) { args.seed_set = true; });
  cmd->add_option("--threads", args.threads,
                  "worker threads (0 = implementation default)");
}

std::string resolve_out_dir(const std::string& flag_value) {
  const char* env = std::getenv("APLAB_OUT_DIR");
  if (env != nullptr && *env != '\0') return env;
  return flag_value;
}

aplab::ExperimentConfig load_config(const CommonArgs& args) {
  aplab::ExperimentConfig cfg = aplab::parse_config(args.config_path);
  if (args.seed_set) cfg.family.seed = args.seed;
  return cfg;
}

int finish(const aplab::RunReport& report, const CommonArgs& args) {
  aplab::emit_report(report, resolve_out_dir(args.out_dir), args.format);
  std::cout << (report.overall_pass() ? "PASS" : "FAIL") << " ("
            << report.items.size() << " items, "
            << report.elapsed_seconds << "s)\n";
  return report.overall_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maximal-operator and weight-constant laboratory"};
  app.require_subcommand(1);

  CommonArgs constants_args, check_args, search_args, wp_args, nondegen_args;
  std::string report_in;
  CommonArgs report_args;

  CLI::App* constants = app.add_subcommand(
      "constants", "weight-class constant sweeps over the window family");
  add_common(constants, constants_args, true);

  CLI::App* check = app.add_subcommand(
      "check", "inequality and property checks over seeded inputs");
  add_common(check, check_args, true);

  CLI::App* search = app.add_subcommand(
      "search-lambda0", "factor-two criterion sweep over the lambda grid");
  add_common(search, search_args, true);

  CLI::App* wp = app.add_subcommand(
      "wp-ratio", "iterated-maximal norm ratio over the test family");
  add_common(wp, wp_args, true);

  CLI::App* nondegen = app.add_subcommand(
      "nondegen", "non-degeneracy probes of the discrete Hilbert transform");
  add_common(nondegen, nondegen_args, true);

  CLI::App* report_cmd =
      app.add_subcommand("report", "re-emit a stored report.json");
  report_cmd->add_option("--in", report_in, "stored report.json")->required();
  add_common(report_cmd, report_args, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (constants->parsed()) {
      aplab::set_default_threads(constants_args.threads);
      return finish(aplab::run_constants(load_config(constants_args)),
                    constants_args);
    }
    if (check->parsed()) {
      aplab::set_default_threads(check_args.threads);
      return finish(aplab::run_checks(load_config(check_args)), check_args);
    }
    if (search->parsed()) {
      aplab::set_default_threads(search_args.threads);
      return finish(aplab::run_search_lambda0(load_config(search_args)),
                    search_args);
    }
    if (wp->parsed()) {
      aplab::set_default_threads(wp_args.threads);
      return finish(aplab::run_wp_ratio(load_config(wp_args)), wp_args);
    }
    if (nondegen->parsed()) {
      aplab::set_default_threads(nondegen_args.threads);
      return finish(aplab::run_nondegen(load_config(nondegen_args)),
                    nondegen_args);
    }
    if (report_cmd->parsed()) {
      std::ifstream in(report_in);
      if (!in)
        throw aplab::ValidationError("cannot open report: " + report_in);
      nlohmann::json j;
      in >> j;
      const aplab::RunReport report = aplab::report_from_json(j);
      aplab::emit_report(report, resolve_out_dir(report_args.out_dir),
                         report_args.format);
      std::cout << "re-emitted " << report.items.size() << " items\n";
      return 0;
    }
  } catch (const aplab::ValidationError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const aplab::ParamError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "report error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
