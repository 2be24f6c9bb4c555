// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criterion 9 drives the CLI binary end to end; pass its path as
// argv[1] (the ctest registration wires in the built target).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "aplab/checks.hpp"
#include "aplab/hilbert.hpp"
#include "aplab/io.hpp"
#include "aplab/maximal.hpp"
#include "aplab/rng.hpp"
#include "aplab/weights.hpp"

using namespace aplab;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  int id;
  std::string title;
  bool ok = true;
  std::string detail;
  double seconds = 0.0;
  double limit_seconds = 0.0;

  Criterion(int i, std::string t) : id(i), title(std::move(t)) {}

  void fail(const std::string& why) {
    ok = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
  void expect(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
};

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

GridFunction random_fn(const Grid1D& g, Rng& rng) {
  GridFunction f(g, 0.0);
  for (int i = 0; i < g.n; ++i) f[i] = rng.unit();
  return f;
}

WeightSpec power_spec(double a) {
  WeightSpec s;
  s.kind = WeightKind::Power;
  s.exponent = a;
  return s;
}

WeightSpec vanishing_spec() {
  WeightSpec s;
  s.kind = WeightKind::Vanishing;
  return s;
}

// --------------------------------------------------------------------------

void criterion1(Criterion& c) {
  const Grid1D g = Grid1D::symmetric(8.0, 64);
  Rng rng(101);
  const std::vector<double> lambdas = {0.1, 0.3, 0.5, 0.7, 0.9};
  for (int t = 0; t < 100; ++t) {
    const GridFunction f = random_fn(g, rng);
    const AgreementResult a =
        oracle_agreement(f, lambdas[static_cast<size_t>(t) % 5]);
    if (a.max_rel_gap > 1e-9)
      c.fail("maximal gap " + std::to_string(a.max_rel_gap) + " on draw " +
             std::to_string(t));
    if (!a.local_bitwise)
      c.fail("local selection mismatch on draw " + std::to_string(t));
    if (!c.ok) return;
  }
  c.detail = "100 draws, N=64, bitwise local selections";
}

void criterion2(Criterion& c) {
  const Grid1D g = Grid1D::symmetric(8.0, 256);
  Rng rng(202);
  double worst = -1.0;
  for (int t = 0; t < 200; ++t) {
    const GridFunction f = random_fn(g, rng);
    const int m = rng.uniform_int(1, g.n);
    const int lo = rng.uniform_int(0, g.n - m);
    const CheckReport ch =
        check_chebyshev(f, Window{lo, lo + m - 1}, rng.uniform(0.05, 0.95),
                        rng.uniform(1.0, 4.0));
    const CheckReport sp =
        check_split_bound(f, rng.uniform(1.1, 4.0), rng.uniform(0.05, 0.95));
    const CheckReport pd = check_powered_domination(
        f, rng.uniform(0.05, 0.95), rng.uniform(0.1, 2.0));
    const CheckReport sd = sharp_delta_bound_check(f, rng.uniform(0.1, 1.0));
    for (const CheckReport* r : {&ch, &sp, &pd, &sd}) {
      worst = std::max(worst, r->worst_violation);
      if (r->failed()) {
        c.fail(r->name + " violated by " + std::to_string(r->worst_violation) +
               " on config " + std::to_string(t) + " (" + r->witness + ")");
        return;
      }
    }
  }
  c.detail = "200 configs x 4 checks, worst margin " + std::to_string(worst);
}

void criterion3(Criterion& c) {
  const Grid1D g = Grid1D::symmetric(8.0, 512);
  // 20 placements: five window sizes by four positions, all comfortably
  // inside the grid so the half-window and shrunken support resolve cleanly.
  const int sizes[5] = {64, 80, 96, 128, 160};
  int placements = 0;
  for (int si = 0; si < 5; ++si) {
    const int m = sizes[si];
    const int span = g.n - m;
    for (int pi = 0; pi < 4; ++pi) {
      const int lo = (span * (pi + 1)) / 5;
      const CheckReport r =
          localization_check(g, 0.3, 0.05, Window{lo, lo + m - 1});
      ++placements;
      if (r.status != CheckStatus::Pass) {
        c.fail("placement m=" + std::to_string(m) + " lo=" +
               std::to_string(lo) + " -> " + status_name(r.status) + " (" +
               r.witness + ")");
        return;
      }
    }
  }
  // indicator support: zero outside the five-fold window at lambda = 1/2
  for (const int m : {16, 32, 64, 96}) {
    for (const int shift : {0, 8}) {
      const int lo = (g.n - m) / 2 + shift;
      const CheckReport r = support_check_rq(g, 0.5, Window{lo, lo + m - 1});
      if (r.status != CheckStatus::Pass) {
        c.fail("support m=" + std::to_string(m) + " -> " +
               status_name(r.status) + " (" + r.witness + ")");
        return;
      }
    }
  }
  c.detail = std::to_string(placements) +
             " localization placements + 8 support windows, exact zeros";
}

void criterion4(Criterion& c) {
  // exact unit value
  for (double p : {1.5, 2.0, 3.0}) {
    const Grid1D g = Grid1D::symmetric(8.0, 128);
    const ConstantEstimate e = ap_constant(make_weight(WeightSpec{}, g), p);
    c.expect(e.value == 1.0, "unit weight should give exactly 1 at p=" +
                                 std::to_string(p) + ", got " +
                                 format_double(e.value));
  }
  // the two-cell example
  const WeightFunction pair(Grid1D{0.0, 1.0, 2}, {1.0, 4.0});
  const ConstantEstimate ep = ap_constant(pair, 2.0);
  c.expect(std::abs(ep.value - 1.5625) <= 1e-12,
           "pair weight gave " + format_double(ep.value));

  // quadratic power weight blows up under refinement
  std::vector<double> quad;
  for (int n : {128, 256, 512})
    quad.push_back(
        ap_constant(make_weight(power_spec(2.0), Grid1D::symmetric(8.0, n)),
                    2.0)
            .value);
  for (size_t i = 1; i < quad.size(); ++i)
    c.expect(quad[i] / quad[i - 1] >= 1.5,
             "quadratic growth " + std::to_string(quad[i] / quad[i - 1]) +
                 " below 1.5");

  // square-root power weight stays put
  std::vector<double> root;
  for (int n : {128, 256, 512})
    root.push_back(
        ap_constant(make_weight(power_spec(0.5), Grid1D::symmetric(8.0, n)),
                    2.0)
            .value);
  for (size_t i = 1; i < root.size(); ++i)
    c.expect(std::abs(root[i] / root[i - 1] - 1.0) < 0.05,
             "root weight moved by " +
                 std::to_string(root[i] / root[i - 1] - 1.0));
  c.detail = "unit exact, pair 1.5625, quad x" +
             std::to_string(quad[1] / quad[0]) + ", root drift " +
             std::to_string(std::abs(root[2] / root[1] - 1.0));
}

void criterion5(Criterion& c) {
  const Grid1D g = Grid1D::symmetric(4.0, 128);
  Rng rng(505);
  double worst_id = 0.0, worst_dual = 0.0;
  for (int t = 0; t < 50; ++t) {
    WeightFunction w(g, 0.0);
    for (int i = 0; i < g.n; ++i) w[i] = 0.1 + rng.unit();
    for (double p : {2.0, 3.0}) {
      const double pp = p / (p - 1.0);
      const double ap = ap_constant(w, p).value;
      const double am = am_functional(w, p).value;
      const double gap_id = std::abs(am - std::pow(ap, 1.0 / p)) /
                            std::pow(ap, 1.0 / p);
      worst_id = std::max(worst_id, gap_id);
      const double dual = ap_constant(dual_weight(w, p), pp).value;
      const double gap_dual =
          std::abs(dual - std::pow(ap, pp - 1.0)) / std::pow(ap, pp - 1.0);
      worst_dual = std::max(worst_dual, gap_dual);
    }
  }
  c.expect(worst_id <= 1e-9,
           "indicator-norm identity off by " + std::to_string(worst_id));
  c.expect(worst_dual <= 1e-9,
           "duality identity off by " + std::to_string(worst_dual));
  c.detail = "50 weights x p in {2,3}: identity gap " +
             std::to_string(worst_id) + ", duality gap " +
             std::to_string(worst_dual);
}

void criterion6(Criterion& c) {
  const std::vector<WeightSpec> gallery = {WeightSpec{}, power_spec(0.5),
                                           power_spec(2.0), vanishing_spec()};
  const CoherenceTable table =
      coherence_table(gallery, 2.0, 8.0, {128, 256, 512}, {8.0, 16.0, 32.0},
                      606);
  c.expect(table.report.status == CheckStatus::Pass,
           "coherence table inconsistent: " + table.report.witness);

  const CoherenceRow& unit = table.rows[0];
  const CoherenceRow& root = table.rows[1];
  const CoherenceRow& quad = table.rows[2];
  const CoherenceRow& vanish = table.rows[3];

  // (a) unit and square-root weights
  for (const CoherenceRow* row : {&unit, &root}) {
    c.expect(row->lambda0_found, row->weight + ": no lambda0");
    c.expect(row->doubling_step_pass, row->weight + ": doubling step failed");
    c.expect(row->ap_finite && row->ap_stable,
             row->weight + ": ap not finite/stable");
  }

  // (b) vanishing weight: degenerate on every side at once
  c.expect(!vanish.ap_finite, "vanishing weight: ap should be infinite");
  c.expect(!vanish.doubling_finite,
           "vanishing weight: doubling should be infinite");
  c.expect(!vanish.lambda0_found, "vanishing weight: lambda0 should not exist");
  {
    const Grid1D g = Grid1D::symmetric(8.0, 512);
    const WeightFunction w = make_weight(vanishing_spec(), g);
    const ConstantEstimate ap = ap_constant(w, 2.0);
    c.expect(ap.infinite() && w[ap.witness.lo] == 0.0,
             "vanishing weight: ap witness is not a zero cell");
    const ConstantEstimate db = doubling_constant(w);
    c.expect(db.infinite(), "vanishing weight: doubling witness missing");
    // the advertised mechanism: the shrunken central indicator annihilates
    // the local maximal norm for every lambda at or above 0.3
    const TestFamily fam =
        make_test_family(default_family_spec(606), g, &w, 2.0);
    const LambdaSearchResult search = search_lambda0(w, 2.0, fam);
    for (size_t i = 0; i < search.lambda_grid.size(); ++i) {
      if (search.lambda_grid[i] >= 0.3 - 1e-12)
        c.expect(std::isinf(search.worst_ratio[i]),
                 "expected infinite ratio at lambda=" +
                     std::to_string(search.lambda_grid[i]));
    }
    const Window q0{g.n / 2 - g.n / 32, g.n / 2 + g.n / 32 - 1};
    const Window eq = scale_window(g, q0, 0.05).window;
    const GridFunction feps = indicator(g, eq);
    c.expect(lp_w_norm(maximal(feps), w, 2.0) > 0.0,
             "shrunken indicator should keep a positive maximal norm");
    c.expect(lp_w_norm(local_maximal(feps, 0.3), w, 2.0) == 0.0,
             "shrunken indicator should annihilate the local maximal norm");
  }

  // (c) quadratic weight: the tail integral detects the failure
  c.expect(quad.np_growth >= 1.8, "quadratic tail growth " +
                                      std::to_string(quad.np_growth) +
                                      " below 1.8");
  c.detail = "gallery consistent; quad tail growth " +
             std::to_string(quad.np_growth);
}

void criterion7(Criterion& c) {
  FamilySpec fam;
  fam.generators = {{GenKind::Uniform, 3}, {GenKind::Spike, 2},
                    {GenKind::Decay, 1}};
  fam.seed = 707;
  const std::vector<int> ladder = {128, 256, 512};

  const StabilityStudy cr = cr_stability_study(fam, 8.0, ladder, 0.5);
  c.expect(cr.report.status == CheckStatus::Pass,
           "powered-maximal ratio unstable: " + cr.report.witness);

  const StabilityStudy loc =
      local_of_maximal_stability_study(fam, 8.0, ladder, 0.5);
  c.expect(loc.report.status == CheckStatus::Pass,
           "local-of-maximal unstable or chain bound violated: " +
               loc.report.witness);

  std::ostringstream msg;
  msg << "ratios ";
  for (double v : cr.recorded) msg << v << " ";
  msg << "/ ";
  for (double v : loc.recorded) msg << v << " ";
  c.detail = msg.str();
}

void criterion8(Criterion& c) {
  const Grid1D g = Grid1D::symmetric(8.0, 512);
  const NondegeneracyReport s = nondegeneracy_check_shifted(g, 2.0, 50, 808);
  c.expect(s.pass, "shifted probe worst ratio " + std::to_string(s.worst_ratio));
  c.expect(s.evaluated > 0, "no shifted trials evaluated");
  const NondegeneracyReport p = nondegeneracy_check_paired(g, 2.0, 50, 808);
  c.expect(p.pass, "paired probe worst ratios " +
                       std::to_string(p.worst_ratio) + " / " +
                       std::to_string(p.worst_ratio_cond2));

  Rng rng(809);
  const double pi = std::acos(-1.0);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    GridFunction f(g, 0.0);
    for (int i = 0; i < g.n; ++i) f[i] = rng.uniform(-1.0, 1.0);
    const double lhs = l2_vector_norm(hilbert_transform(f));
    const double rhs = pi * l2_vector_norm(f);
    worst = std::max(worst, lhs / rhs);
    if (lhs > rhs) {
      c.fail("matrix norm bound violated on draw " + std::to_string(t));
      return;
    }
  }
  c.detail = "probes pass at C=2; worst matrix-bound quotient " +
             std::to_string(worst);
}

// Criterion 9: end-to-end CLI fixtures.

int run_cli(const std::string& bin, const std::string& args,
            const fs::path& log) {
  const std::string cmd = bin + " " + args + " >" + log.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion9(Criterion& c, const std::string& bin) {
  if (bin.empty()) {
    c.fail("no CLI binary path supplied (argv[1])");
    return;
  }
  const fs::path dir = fs::temp_directory_path() / "aplab_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  using nlohmann::json;
  // all-pass fixture
  {
    json cfg = {{"grid", {{"radius", 4.0}, {"cells", 64}}},
                {"trials", 10},
                {"family", {{"seed", 12}}},
                {"checks", json::array({"chebyshev", "split-bound",
                                        "hilbert-l2", "oracle-agreement"})}};
    std::ofstream(dir / "pass.json") << cfg.dump(2);
    const int rc1 =
        run_cli(bin, "check --config " + (dir / "pass.json").string() +
                         " --out " + (dir / "out1").string(),
                dir / "log1.txt");
    c.expect(rc1 == 0, "all-pass run exited " + std::to_string(rc1));
    const int rc2 =
        run_cli(bin, "check --config " + (dir / "pass.json").string() +
                         " --out " + (dir / "out2").string(),
                dir / "log2.txt");
    c.expect(rc2 == 0, "second run exited " + std::to_string(rc2));
    const std::string csv1 = slurp(dir / "out1" / "report.csv");
    const std::string csv2 = slurp(dir / "out2" / "report.csv");
    c.expect(!csv1.empty() && csv1 == csv2,
             "CSV bodies differ between identical runs");
  }
  // deliberately violated inequality: the doubling step fails on a weight
  // that vanishes on the inner half of its windows
  {
    json cfg = {{"grid", {{"radius", 4.0}, {"cells", 64}}},
                {"weight", {{"kind", "vanishing"}}},
                {"exponents", {{"p", 2.0}, {"lambda", 0.3}}},
                {"checks", json::array({"doubling-step"})}};
    std::ofstream(dir / "fail.json") << cfg.dump(2);
    const int rc =
        run_cli(bin, "check --config " + (dir / "fail.json").string() +
                         " --out " + (dir / "out3").string(),
                dir / "log3.txt");
    c.expect(rc == 1, "violated run exited " + std::to_string(rc));
  }
  // malformed config
  {
    std::ofstream(dir / "bad.json") << "{\"grid\": {\"cellz\": 64}}";
    const int rc =
        run_cli(bin, "check --config " + (dir / "bad.json").string() +
                         " --out " + (dir / "out4").string(),
                dir / "log4.txt");
    c.expect(rc == 2, "malformed config exited " + std::to_string(rc));
  }
  // the environment variable overrides the --out flag
  {
    const fs::path env_out = dir / "env_out";
    const std::string cmd = "APLAB_OUT_DIR=" + env_out.string() + " " + bin +
                            " check --config " + (dir / "pass.json").string() +
                            " --out " + (dir / "ignored").string() + " >" +
                            (dir / "log5.txt").string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    c.expect(rc != -1 && WEXITSTATUS(rc) == 0, "env-override run failed");
    c.expect(fs::exists(env_out / "report.csv") && !fs::exists(dir / "ignored"),
             "APLAB_OUT_DIR did not take precedence");
  }
  if (c.ok) c.detail = "exit codes 0/1/2, env override, byte-identical CSV";
}

}  // namespace

int main(int argc, char** argv) {
  const std::string bin = argc > 1 ? argv[1] : "";
  std::vector<Criterion> criteria = {
      {1, "fast vs exhaustive agreement (100 draws, N=64)"},
      {2, "pointwise inequality suite (200 configs, N=256)"},
      {3, "localization exact zeros (N=512)"},
      {4, "A_p estimator sanity"},
      {5, "indicator-norm and duality identities (50 weights, N=128)"},
      {6, "characterization coherence over the gallery"},
      {7, "powered-maximal and local-of-maximal stability"},
      {8, "non-degeneracy probes and the matrix norm bound"},
      {9, "CLI determinism and exit codes"},
  };
  criteria[0].limit_seconds = 30.0;
  criteria[1].limit_seconds = 300.0;
  criteria[5].limit_seconds = 600.0;

  bool all_ok = true;
  for (Criterion& c : criteria) {
    Timer timer;
    switch (c.id) {
      case 1: criterion1(c); break;
      case 2: criterion2(c); break;
      case 3: criterion3(c); break;
      case 4: criterion4(c); break;
      case 5: criterion5(c); break;
      case 6: criterion6(c); break;
      case 7: criterion7(c); break;
      case 8: criterion8(c); break;
      case 9: criterion9(c, bin); break;
    }
    c.seconds = timer.seconds();
    if (c.limit_seconds > 0.0 && c.seconds > c.limit_seconds)
      c.fail("runtime " + std::to_string(c.seconds) + "s over the " +
             std::to_string(c.limit_seconds) + "s limit");
    all_ok = all_ok && c.ok;
    std::printf("[%s] criterion %d: %s (%.1fs)%s%s\n", c.ok ? "PASS" : "FAIL",
                c.id, c.title.c_str(), c.seconds,
                c.detail.empty() ? "" : " -- ", c.detail.c_str());
    std::fflush(stdout);
  }
  return all_ok ? 0 : 1;
}
