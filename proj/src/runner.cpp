#include "aplab/runner.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "aplab/hilbert.hpp"
#include "aplab/io.hpp"
#include "aplab/maximal.hpp"
#include "aplab/rng.hpp"

namespace aplab {

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

ReportItem error_item(const std::string& check, const std::string& what) {
  ReportItem item;
  item.check = check;
  item.anchor = "runner";
  item.status = "fail";
  item.worst_violation = 0.0;
  item.witness = what;
  return item;
}

// Runs one item, converting size/parameter errors into failed rows so the
// rest of the run proceeds.
template <class Fn>
void guarded(RunReport& report, const std::string& check, Fn&& fn) {
  try {
    fn();
  } catch (const ParamError& e) {
    report.items.push_back(error_item(check, e.what()));
  } catch (const SizeError& e) {
    report.items.push_back(error_item(check, e.what()));
  }
}

std::vector<int> cells_ladder(const ExperimentConfig& cfg) {
  return cfg.refine_cells.empty() ? std::vector<int>{cfg.cells}
                                  : cfg.refine_cells;
}

int even_cells(double length, double h) {
  int n = static_cast<int>(std::lround(length / h));
  if (n % 2 != 0) ++n;
  return std::max(2, n);
}

GridFunction decay_profile(const Grid1D& g) {
  GridFunction f(g, 0.0);
  for (int i = 0; i < g.n; ++i) {
    const double x = std::abs(g.center(i));
    f[i] = 1.0 / ((1.0 + x) * (1.0 + x));
  }
  return f;
}

}  // namespace

RunReport run_constants(const ExperimentConfig& cfg) {
  Stopwatch timer;
  RunReport report;
  report.command = "constants";
  report.config_echo = cfg.echo;

  const std::vector<int> ladder = cells_ladder(cfg);
  for (const std::string& name : cfg.estimators) {
    guarded(report, name, [&] {
      RefinementSeries series{name + "_refine", "N", {}};
      for (int n : ladder) {
        const Grid1D g = Grid1D::symmetric(cfg.radius, n);
        const WeightFunction w = cfg.make_weight_on(g);
        if (name == "ap") {
          const ConstantEstimate e = ap_constant(w, cfg.p, cfg.windows);
          report.items.push_back(item_from(e, "ap-constant", "muckenhoupt-ap"));
          series.points.emplace_back(n, e.value);
        } else if (name == "am") {
          const ConstantEstimate e = am_functional(w, cfg.p, cfg.windows);
          report.items.push_back(
              item_from(e, "indicator-norm-product", "indicator-norm-product"));
          series.points.emplace_back(n, e.value);
        } else if (name == "doubling") {
          const ConstantEstimate e = doubling_constant(w, cfg.windows);
          report.items.push_back(item_from(e, "doubling-constant", "doubling"));
          series.points.emplace_back(n, e.value);
        } else if (name == "np") {
          const double v = np_integral(w, cfg.p);
          ReportItem item;
          item.check = "tail-integral";
          item.anchor = "inverse-power-tail-integral";
          item.status = "recorded";
          item.worst_violation = v;
          item.witness = "whole grid";
          item.p = cfg.p;
          item.cells = n;
          item.radius = g.radius();
          report.items.push_back(item);
          series.points.emplace_back(n, v);
        } else if (name == "ainfty" || name == "cp") {
          for (double d : cfg.delta_ladder) {
            const ConstantEstimate e =
                name == "ainfty"
                    ? ainfty_estimate(w, d, cfg.windows)
                    : cp_estimate(w, cfg.p, d, cfg.windows);
            report.items.push_back(item_from(
                e, name == "ainfty" ? "subset-growth" : "subset-vs-maximal",
                name == "ainfty" ? "ainfty-subset-growth"
                                 : "cp-subset-vs-maximal"));
            if (d == cfg.delta) series.points.emplace_back(n, e.value);
          }
        } else {
          throw ParamError("unknown estimator: " + name);
        }
      }
      if (ladder.size() > 1 && !series.points.empty())
        report.series.push_back(std::move(series));
    });
  }

  // Domain-growth study of the tail integral at fixed cell width.
  if (!cfg.refine_radii.empty()) {
    guarded(report, "np-domain", [&] {
      const double h = 2.0 * cfg.radius / cfg.cells;
      RefinementSeries series{"np_domain_refine", "L", {}};
      for (double L : cfg.refine_radii) {
        const Grid1D g = Grid1D::symmetric(L, even_cells(2.0 * L, h));
        const double v = np_integral(cfg.make_weight_on(g), cfg.p);
        ReportItem item;
        item.check = "tail-integral";
        item.anchor = "inverse-power-tail-integral";
        item.status = "recorded";
        item.worst_violation = v;
        item.witness = "whole grid";
        item.p = cfg.p;
        item.cells = g.n;
        item.radius = L;
        report.items.push_back(item);
        series.points.emplace_back(L, v);
      }
      report.series.push_back(std::move(series));
    });
  }

  report.elapsed_seconds = timer.seconds();
  return report;
}

namespace {

void aggregate_worst(CheckReport& into, const CheckReport& one) {
  if (one.status == CheckStatus::Fail) into.status = CheckStatus::Fail;
  if (one.worst_violation > into.worst_violation) {
    into.worst_violation = one.worst_violation;
    into.witness = one.witness;
  }
  if (one.status == CheckStatus::Inconclusive &&
      into.status != CheckStatus::Fail)
    into.status = CheckStatus::Inconclusive;
}

CheckReport fresh_aggregate(const CheckReport& first) {
  CheckReport agg = first;
  agg.worst_violation = -1.0;
  // report-only trials keep the aggregate in record mode
  agg.status = first.status == CheckStatus::Recorded ? CheckStatus::Recorded
                                                     : CheckStatus::Pass;
  agg.witness.clear();
  aggregate_worst(agg, first);
  return agg;
}

std::vector<int> stability_ladder(const ExperimentConfig& cfg) {
  if (cfg.refine_cells.size() >= 2) return cfg.refine_cells;
  return {128, 256, 512};
}

}  // namespace

RunReport run_checks(const ExperimentConfig& cfg) {
  Stopwatch timer;
  RunReport report;
  report.command = "check";
  report.config_echo = cfg.echo;

  const Grid1D g = cfg.grid();
  const WeightFunction w = cfg.make_weight_on(g);
  const TestFamily family = make_test_family(cfg.family, g, &w, cfg.p);

  std::vector<std::string> checks = cfg.checks;
  if (checks.empty())
    checks = {"chebyshev", "split-bound", "powered-domination",
              "sharp-delta-bound", "hilbert-l2"};

  for (const std::string& name : checks) {
    guarded(report, name, [&] {
      Rng rng(cfg.family.seed ^ 0x9e3779b97f4a7c15ULL);
      if (name == "oracle-agreement") {
        const Grid1D small =
            Grid1D::symmetric(cfg.radius, std::min(cfg.cells, 64));
        report.items.push_back(
            item_from(run_oracle_agreement(small, cfg.trials, cfg.family.seed)));
      } else if (name == "chebyshev") {
        CheckReport agg;
        bool first = true;
        for (int t = 0; t < cfg.trials; ++t) {
          GridFunction f(g, 0.0);
          for (int i = 0; i < g.n; ++i) f[i] = rng.unit();
          const int m = rng.uniform_int(1, g.n);
          const int lo = rng.uniform_int(0, g.n - m);
          const CheckReport one =
              check_chebyshev(f, Window{lo, lo + m - 1},
                              rng.uniform(0.05, 0.95), rng.uniform(1.0, 4.0));
          if (first) {
            agg = fresh_aggregate(one);
            first = false;
          } else {
            aggregate_worst(agg, one);
          }
        }
        report.items.push_back(item_from(agg));
      } else if (name == "split-bound" || name == "powered-domination" ||
                 name == "sharp-delta-bound") {
        CheckReport agg;
        bool first = true;
        for (int t = 0; t < cfg.trials; ++t) {
          GridFunction f(g, 0.0);
          for (int i = 0; i < g.n; ++i) f[i] = rng.unit();
          CheckReport one;
          if (name == "split-bound")
            one = check_split_bound(f, rng.uniform(1.1, 4.0),
                                    rng.uniform(0.05, 0.95));
          else if (name == "powered-domination")
            one = check_powered_domination(f, rng.uniform(0.05, 0.95),
                                           rng.uniform(0.1, 2.0));
          else
            one = sharp_delta_bound_check(f, rng.uniform(0.1, 1.0));
          if (first) {
            agg = fresh_aggregate(one);
            first = false;
          } else {
            aggregate_worst(agg, one);
          }
        }
        report.items.push_back(item_from(agg));
      } else if (name == "local-of-maximal") {
        CheckReport agg;
        bool first = true;
        for (const GridFunction& f : family.members) {
          const CheckReport one = check_local_of_maximal(f, cfg.lambda);
          if (first) {
            agg = fresh_aggregate(one);
            first = false;
          } else {
            aggregate_worst(agg, one);
          }
        }
        report.items.push_back(item_from(agg));
      } else if (name == "coifman-rochberg") {
        CheckReport agg;
        bool first = true;
        for (const GridFunction& f : family.members) {
          const CheckReport one = coifman_rochberg_ratio(f, cfg.delta);
          if (one.status != CheckStatus::Recorded) continue;
          if (first) {
            agg = one;
            first = false;
          } else if (one.worst_violation > agg.worst_violation) {
            agg = one;
          }
        }
        if (!first) report.items.push_back(item_from(agg));
      } else if (name == "cr-stability") {
        const StabilityStudy s = cr_stability_study(
            cfg.family, cfg.radius, stability_ladder(cfg), cfg.delta);
        report.items.push_back(item_from(s.report));
        RefinementSeries series{"cr_stability", "N", {}};
        for (size_t i = 0; i < s.ladder.size(); ++i)
          series.points.emplace_back(s.ladder[i], s.recorded[i]);
        report.series.push_back(std::move(series));
      } else if (name == "local-stability") {
        const StabilityStudy s = local_of_maximal_stability_study(
            cfg.family, cfg.radius, stability_ladder(cfg), cfg.lambda);
        report.items.push_back(item_from(s.report));
        RefinementSeries series{"local_stability", "N", {}};
        for (size_t i = 0; i < s.ladder.size(); ++i)
          series.points.emplace_back(s.ladder[i], s.recorded[i]);
        report.series.push_back(std::move(series));
      } else if (name == "cf-stability") {
        const double r = cfg.r < 1.0 ? cfg.r : 0.5;
        const StabilityStudy s = cf_stability_study(
            cfg.family, cfg.radius, stability_ladder(cfg), r);
        report.items.push_back(item_from(s.report));
        RefinementSeries series{"cf_stability", "N", {}};
        for (size_t i = 0; i < s.ladder.size(); ++i)
          series.points.emplace_back(s.ladder[i], s.recorded[i]);
        report.series.push_back(std::move(series));
      } else if (name == "cf-pointwise") {
        const double r = cfg.r < 1.0 ? cfg.r : 0.5;
        CheckReport agg;
        bool first = true;
        for (const GridFunction& f : family.members) {
          const CheckReport one = cf_pointwise_check(f, r);
          if (one.status != CheckStatus::Recorded) continue;
          if (first) {
            agg = one;
            first = false;
          } else if (one.worst_violation > agg.worst_violation) {
            agg = one;
          }
        }
        if (!first) report.items.push_back(item_from(agg));
      } else if (name == "localization") {
        CheckReport agg;
        bool first = true;
        const int sizes[] = {g.n / 8, g.n / 6, g.n / 5, g.n / 4};
        for (int t = 0; t < cfg.trials; ++t) {
          const int m = std::max(4, sizes[t % 4]);
          const int lo = (t * g.n) / (3 * cfg.trials) % std::max(1, g.n - m);
          const CheckReport one = localization_check(
              g, cfg.lambda, cfg.epsilon, Window{lo, lo + m - 1});
          if (first) {
            agg = fresh_aggregate(one);
            first = false;
          } else {
            aggregate_worst(agg, one);
          }
        }
        report.items.push_back(item_from(agg));
      } else if (name == "support-radius") {
        const double r = 1.0 + 2.0 / cfg.lambda;
        const int max_m = std::max(2, static_cast<int>(g.n / r) - 2);
        CheckReport agg;
        bool first = true;
        for (int t = 0; t < cfg.trials; ++t) {
          const int m = 2 + (t * (max_m - 2)) / std::max(1, cfg.trials - 1);
          const Window q{(g.n - m) / 2, (g.n - m) / 2 + m - 1};
          const CheckReport one = support_check_rq(g, cfg.lambda, q);
          if (first) {
            agg = fresh_aggregate(one);
            first = false;
          } else {
            aggregate_worst(agg, one);
          }
        }
        report.items.push_back(item_from(agg));
      } else if (name == "doubling-step") {
        report.items.push_back(item_from(doubling_step_check(
            w, cfg.p, cfg.lambda, admissible_epsilon(cfg.lambda),
            cfg.windows)));
      } else if (name == "fs-ratio") {
        report.items.push_back(
            item_from(fs_inequality_ratio(w, cfg.p, cfg.delta, family)));
      } else if (name == "decay") {
        const std::vector<double> radii = {cfg.radius / 8.0, cfg.radius / 4.0,
                                           cfg.radius / 2.0,
                                           0.75 * cfg.radius};
        report.items.push_back(item_from(
            decay_check(w, cfg.p, decay_profile(g), g.n / 2, radii)));
        const Window q0{g.n / 2 - g.n / 32, g.n / 2 + g.n / 32};
        report.items.push_back(item_from(
            decay_check(w, cfg.p, indicator(g, q0), g.n / 2, radii)));
      } else if (name == "ml-lower-bound") {
        report.items.push_back(item_from(ml_lower_bound_check(
            w, cfg.p,
            {cfg.radius / 8.0, cfg.radius / 4.0, 3.0 * cfg.radius / 8.0,
             cfg.radius / 2.0})));
      } else if (name == "hilbert-l2") {
        CheckReport rep;
        rep.name = "hilbert-l2";
        rep.anchor = "hilbert-matrix-inequality";
        rep.grid_cells = g.n;
        rep.domain_radius = g.radius();
        rep.tolerance = kTolAnalytic;
        rep.worst_violation = -1.0;
        for (int t = 0; t < cfg.trials; ++t) {
          GridFunction f(g, 0.0);
          for (int i = 0; i < g.n; ++i) f[i] = rng.uniform(-1.0, 1.0);
          const double margin =
              rel_margin(l2_vector_norm(hilbert_transform(f)),
                         std::acos(-1.0) * l2_vector_norm(f));
          if (margin > rep.worst_violation) {
            rep.worst_violation = margin;
            rep.witness = "draw " + std::to_string(t);
          }
        }
        rep.status = rep.worst_violation <= rep.tolerance ? CheckStatus::Pass
                                                          : CheckStatus::Fail;
        report.items.push_back(item_from(rep));
      } else if (name == "nondegen-shifted" || name == "nondegen-paired") {
        const NondegeneracyReport nd =
            name == "nondegen-shifted"
                ? nondegeneracy_check_shifted(g, cfg.constant, cfg.trials,
                                              cfg.family.seed)
                : nondegeneracy_check_paired(g, cfg.constant, cfg.trials,
                                             cfg.family.seed);
        ReportItem item;
        item.check = "nondegeneracy-" + nd.mode;
        item.anchor = "nondegeneracy-" + nd.mode;
        item.status = nd.pass ? "pass" : "fail";
        item.worst_violation = std::max(nd.worst_ratio, nd.worst_ratio_cond2);
        item.witness = nd.witness + " (evaluated " +
                       std::to_string(nd.evaluated) + ", skipped " +
                       std::to_string(nd.skipped) + ")";
        item.cells = g.n;
        item.radius = g.radius();
        report.items.push_back(item);
      } else if (name == "coherence") {
        const std::vector<WeightSpec> gallery = {
            WeightSpec{},
            WeightSpec{WeightKind::Power, 1.0, 0.5, -1.0, 1.0, {}},
            WeightSpec{WeightKind::Power, 1.0, 2.0, -1.0, 1.0, {}},
            WeightSpec{WeightKind::Vanishing, 1.0, 0.0, -1.0, 1.0, {}}};
        const CoherenceTable table = coherence_table(
            gallery, cfg.p, cfg.radius, stability_ladder(cfg),
            {cfg.radius, 2.0 * cfg.radius, 4.0 * cfg.radius},
            cfg.family.seed);
        for (const CoherenceRow& row : table.rows) {
          ReportItem item;
          item.check = "coherence-row";
          item.anchor = "ap-characterization";
          item.status = row.consistent ? "pass" : "fail";
          item.worst_violation = row.ap_last;
          item.witness = row.weight + " lambda0=" +
                         (row.lambda0_found ? std::to_string(row.lambda0)
                                            : std::string("none")) +
                         " ap_growth=" + std::to_string(row.ap_growth) +
                         " np_growth=" + std::to_string(row.np_growth);
          item.p = cfg.p;
          item.cells = g.n;
          item.radius = g.radius();
          report.items.push_back(item);
        }
        report.items.push_back(item_from(table.report));
      } else {
        throw ParamError("unknown check: " + name);
      }
    });
  }

  report.elapsed_seconds = timer.seconds();
  return report;
}

RunReport run_search_lambda0(const ExperimentConfig& cfg) {
  Stopwatch timer;
  RunReport report;
  report.command = "search-lambda0";
  report.config_echo = cfg.echo;

  const Grid1D g = cfg.grid();
  const WeightFunction w = cfg.make_weight_on(g);
  const TestFamily family = make_test_family(cfg.family, g, &w, cfg.p);
  const LambdaSearchResult res =
      search_lambda0(w, cfg.p, family, cfg.lambda_grid);

  RefinementSeries series{"lambda_worst_ratio", "lambda", {}};
  for (size_t i = 0; i < res.lambda_grid.size(); ++i) {
    ReportItem item;
    item.check = "lambda-ratio";
    item.anchor = "factor-two-criterion";
    item.status = "recorded";
    item.worst_violation = res.worst_ratio[i];
    item.witness = res.worst_member[i] >= 0
                       ? family.labels[static_cast<size_t>(res.worst_member[i])]
                       : "none";
    item.p = cfg.p;
    item.lambda = res.lambda_grid[i];
    item.cells = g.n;
    item.radius = g.radius();
    report.items.push_back(item);
    series.points.emplace_back(res.lambda_grid[i], res.worst_ratio[i]);
  }
  report.series.push_back(std::move(series));

  ReportItem summary;
  summary.check = "lambda0";
  summary.anchor = "factor-two-criterion";
  summary.status = "recorded";
  summary.worst_violation = res.lambda0.value_or(
      std::numeric_limits<double>::quiet_NaN());
  summary.witness = res.lambda0 ? "found" : "none";
  if (res.skipped_members > 0)
    summary.witness +=
        " (skipped " + std::to_string(res.skipped_members) + " members)";
  summary.p = cfg.p;
  summary.cells = g.n;
  summary.radius = g.radius();
  report.items.push_back(summary);

  report.elapsed_seconds = timer.seconds();
  return report;
}

RunReport run_wp_ratio(const ExperimentConfig& cfg) {
  Stopwatch timer;
  RunReport report;
  report.command = "wp-ratio";
  report.config_echo = cfg.echo;

  const std::vector<int> ladder = cells_ladder(cfg);
  RefinementSeries series{"wp_ratio_refine", "N", {}};
  for (int n : ladder) {
    const Grid1D g = Grid1D::symmetric(cfg.radius, n);
    const WeightFunction w = cfg.make_weight_on(g);
    const TestFamily family = make_test_family(cfg.family, g, &w, cfg.p);
    CheckReport rep = wp_ratio(w, cfg.p, family);
    rep.p = cfg.p;
    report.items.push_back(item_from(rep));
    series.points.emplace_back(n, rep.worst_violation);
  }
  if (ladder.size() > 1) report.series.push_back(std::move(series));

  report.elapsed_seconds = timer.seconds();
  return report;
}

RunReport run_nondegen(const ExperimentConfig& cfg) {
  Stopwatch timer;
  RunReport report;
  report.command = "nondegen";
  report.config_echo = cfg.echo;

  const Grid1D g = cfg.grid();
  for (const char* mode : {"nondegen-shifted", "nondegen-paired"}) {
    const NondegeneracyReport nd =
        std::string(mode) == "nondegen-shifted"
            ? nondegeneracy_check_shifted(g, cfg.constant, cfg.trials,
                                          cfg.family.seed)
            : nondegeneracy_check_paired(g, cfg.constant, cfg.trials,
                                         cfg.family.seed);
    ReportItem item;
    item.check = "nondegeneracy-" + nd.mode;
    item.anchor = "nondegeneracy-" + nd.mode;
    item.status = nd.pass ? "pass" : "fail";
    item.worst_violation = std::max(nd.worst_ratio, nd.worst_ratio_cond2);
    item.witness = nd.witness + " (evaluated " + std::to_string(nd.evaluated) +
                   ", skipped " + std::to_string(nd.skipped) + ")";
    item.cells = g.n;
    item.radius = g.radius();
    report.items.push_back(item);
  }

  report.elapsed_seconds = timer.seconds();
  return report;
}

}  // namespace aplab
