#include "aplab/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aplab/hilbert.hpp"
#include "aplab/maximal.hpp"
#include "aplab/rng.hpp"

namespace aplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string cell_tag(const Grid1D& g, int i) {
  return "cell " + std::to_string(i) + " (x=" + std::to_string(g.center(i)) +
         ")";
}

std::string window_tag(Window q) {
  return "[" + std::to_string(q.lo) + "," + std::to_string(q.hi) + "]";
}

CheckReport make_report(std::string name, std::string anchor, const Grid1D& g) {
  CheckReport r;
  r.name = std::move(name);
  r.anchor = std::move(anchor);
  r.grid_cells = g.n;
  r.domain_radius = g.radius();
  return r;
}

// Worst signed margin of lhs <= rhs over all cells.
struct PointwiseWorst {
  double margin = -kInf;
  int cell = -1;

  void offer(double lhs, double rhs, int i) {
    const double m = rel_margin(lhs, rhs);
    if (m > margin) {
      margin = m;
      cell = i;
    }
  }
};

bool identically_zero(const GridFunction& f) {
  for (int i = 0; i < f.size(); ++i)
    if (f[i] != 0.0) return false;
  return true;
}

Window centered_window(const Grid1D& g, int cells) {
  const int m = std::clamp(cells, 1, g.n);
  const int lo = (g.n - m) / 2;
  return Window{lo, lo + m - 1};
}

}  // namespace

std::string status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "pass";
    case CheckStatus::Fail:
      return "fail";
    case CheckStatus::Inconclusive:
      return "inconclusive";
    case CheckStatus::Recorded:
      return "recorded";
  }
  return "unknown";
}

double rel_margin(double lhs, double rhs) {
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-30});
  return (lhs - rhs) / scale;
}

// ---------------------------------------------------------------------------
// Test families

GenKind gen_kind_from_name(const std::string& name) {
  if (name == "uniform") return GenKind::Uniform;
  if (name == "spike") return GenKind::Spike;
  if (name == "indicator") return GenKind::Indicator;
  if (name == "dual") return GenKind::DualShaped;
  if (name == "decay") return GenKind::Decay;
  throw ValidationError("unknown generator kind: " + name);
}

std::string gen_kind_name(GenKind k) {
  switch (k) {
    case GenKind::Uniform:
      return "uniform";
    case GenKind::Spike:
      return "spike";
    case GenKind::Indicator:
      return "indicator";
    case GenKind::DualShaped:
      return "dual";
    case GenKind::Decay:
      return "decay";
  }
  return "unknown";
}

FamilySpec default_family_spec(std::uint64_t seed) {
  FamilySpec spec;
  spec.generators = {{GenKind::Uniform, 4},
                     {GenKind::Spike, 2},
                     {GenKind::Indicator, 2},
                     {GenKind::DualShaped, 1},
                     {GenKind::Decay, 1}};
  spec.seed = seed;
  return spec;
}

TestFamily make_test_family(const FamilySpec& spec, const Grid1D& g,
                            const WeightFunction* w, double p) {
  TestFamily fam;
  fam.spec = spec;
  Rng rng(spec.seed);
  const int n = g.n;
  // Placement range: the whole grid, or its central half.
  const int place_lo = spec.inner_half ? n / 4 : 0;
  const int place_hi = spec.inner_half ? (3 * n) / 4 - 1 : n - 1;

  auto push = [&](GridFunction f, std::string label) {
    if (identically_zero(f)) {
      ++fam.dropped;
      return;
    }
    fam.members.push_back(std::move(f));
    fam.labels.push_back(std::move(label));
  };

  for (const GeneratorSpec& gen : spec.generators) {
    for (int c = 0; c < gen.count; ++c) {
      switch (gen.kind) {
        case GenKind::Uniform: {
          GridFunction f(g, 0.0);
          for (int i = place_lo; i <= place_hi; ++i) f[i] = rng.unit();
          push(std::move(f), "uniform#" + std::to_string(c));
          break;
        }
        case GenKind::Spike: {
          const int cell = c == 0 ? n / 2 : rng.uniform_int(place_lo, place_hi);
          GridFunction f(g, 0.0);
          f[cell] = 1.0;
          push(std::move(f), "spike@" + std::to_string(cell));
          break;
        }
        case GenKind::Indicator: {
          // Central window spanning one sixteenth of the domain; even members
          // shrink it by the configured factor, odd members keep it whole.
          const Window q0 = centered_window(g, std::max(1, n / 16));
          if (c % 2 == 0) {
            const Window eq = scale_window(g, q0, spec.epsilon).window;
            push(indicator(g, eq),
                 "indicator-eps" + window_tag(eq));
          } else {
            push(indicator(g, q0), "indicator" + window_tag(q0));
          }
          break;
        }
        case GenKind::DualShaped: {
          const Window qd = centered_window(g, std::max(1, n / 8));
          GridFunction f(g, 0.0);
          for (int i = qd.lo; i <= qd.hi; ++i) {
            const double wv = w != nullptr ? (*w)[i] : 1.0;
            f[i] = wv > 0.0 ? std::pow(wv, -1.0 / (p - 1.0)) : 0.0;
          }
          push(std::move(f), "dual" + window_tag(qd));
          break;
        }
        case GenKind::Decay: {
          const double shift = c == 0 ? 0.0 : g.radius() / (2.0 * (c + 1));
          GridFunction f(g, 0.0);
          for (int i = 0; i < n; ++i) {
            const double x = g.center(i) - shift;
            f[i] = 1.0 / ((1.0 + std::abs(x)) * (1.0 + std::abs(x)));
          }
          push(std::move(f), "decay#" + std::to_string(c));
          break;
        }
      }
    }
  }
  return fam;
}

// ---------------------------------------------------------------------------
// Pointwise inequality checks

CheckReport check_chebyshev(const GridFunction& f, Window q, double tau,
                            double r) {
  if (!(tau > 0.0 && tau < 1.0)) throw ParamError("tau must lie in (0,1)");
  if (!(r >= 1.0)) throw ParamError("power must be >= 1");
  CheckReport rep = make_report("chebyshev", "rearrangement-chebyshev", f.grid);
  rep.tolerance = kTolAnalytic;
  const double lhs = rearrangement_value(f, q, tau);
  const double rhs = std::pow(tau, -1.0 / r) *
                     std::pow(powered_window_average(f, q, r), 1.0 / r);
  rep.worst_violation = rel_margin(lhs, rhs);
  rep.status =
      rep.worst_violation <= rep.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
  rep.witness = "window " + window_tag(q) + " tau=" + std::to_string(tau) +
                " r=" + std::to_string(r);
  return rep;
}

CheckReport check_split_bound(const GridFunction& f, double r, double lambda) {
  if (!(r > 1.0)) throw ParamError("split bound needs r > 1");
  if (!(lambda > 0.0 && lambda < 1.0))
    throw ParamError("lambda must lie in (0,1)");
  CheckReport rep = make_report("split-bound", "maximal-split-bound", f.grid);
  rep.tolerance = kTolBisection;
  rep.lambda = lambda;
  const double coef = r / (r - 1.0) * std::pow(lambda, (r - 1.0) / r);
  const GridFunction mf = maximal(f);
  const GridFunction mrf = maximal_r(f, r);
  const GridFunction loc = local_maximal(f, lambda);
  PointwiseWorst worst;
  for (int i = 0; i < f.size(); ++i)
    worst.offer(mf[i], coef * mrf[i] + loc[i], i);
  rep.worst_violation = worst.margin;
  rep.status =
      rep.worst_violation <= rep.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
  rep.witness = cell_tag(f.grid, worst.cell) + " r=" + std::to_string(r);
  return rep;
}

CheckReport check_powered_domination(const GridFunction& f, double lambda,
                                     double delta) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw ParamError("lambda must lie in (0,1)");
  if (!(delta > 0.0)) throw ParamError("delta must be positive");
  CheckReport rep =
      make_report("powered-domination", "local-maximal-vs-powered-maximal",
                  f.grid);
  rep.tolerance = kTolBisection;
  rep.lambda = lambda;
  rep.delta = delta;
  const double coef = std::pow(lambda, -1.0 / delta);
  const GridFunction loc = local_maximal(f, lambda);
  const GridFunction md = maximal_r(f, delta);
  PointwiseWorst worst;
  for (int i = 0; i < f.size(); ++i) worst.offer(loc[i], coef * md[i], i);
  rep.worst_violation = worst.margin;
  rep.status =
      rep.worst_violation <= rep.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
  rep.witness = cell_tag(f.grid, worst.cell);
  return rep;
}

CheckReport check_local_of_maximal(const GridFunction& f, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw ParamError("lambda must lie in (0,1)");
  CheckReport rep =
      make_report("local-of-maximal", "local-maximal-of-maximal", f.grid);
  rep.tolerance = kTolBisection;
  rep.lambda = lambda;
  if (identically_zero(f)) {
    rep.status = CheckStatus::Inconclusive;
    rep.witness = "input vanishes identically";
    return rep;
  }
  const GridFunction mf = maximal(f);
  const GridFunction loc = local_maximal(mf, lambda);
  const GridFunction mhalf = maximal_r(mf, 0.5);
  double c_obs = 0.0, c_cr = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    c_obs = std::max(c_obs, loc[i] / mf[i]);
    c_cr = std::max(c_cr, mhalf[i] / mf[i]);
  }
  rep.worst_violation = rel_margin(c_obs, c_cr / (lambda * lambda));
  rep.status =
      rep.worst_violation <= rep.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
  rep.witness = "C_obs=" + std::to_string(c_obs) +
                " C_ratio=" + std::to_string(c_cr);
  return rep;
}

CheckReport coifman_rochberg_ratio(const GridFunction& f, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw ParamError("powered-maximal ratio needs delta in (0,1)");
  CheckReport rep =
      make_report("powered-maximal-ratio", "coifman-rochberg", f.grid);
  rep.delta = delta;
  if (identically_zero(f)) {
    rep.status = CheckStatus::Inconclusive;
    rep.witness = "input vanishes identically";
    return rep;
  }
  const GridFunction mf = maximal(f);
  const GridFunction md = maximal_r(mf, delta);
  double ratio = 0.0;
  int arg = 0;
  for (int i = 0; i < f.size(); ++i) {
    const double v = md[i] / mf[i];
    if (v > ratio) {
      ratio = v;
      arg = i;
    }
  }
  rep.status = CheckStatus::Recorded;
  rep.worst_violation = ratio;
  rep.witness = cell_tag(f.grid, arg);
  return rep;
}

CheckReport sharp_delta_bound_check(const GridFunction& f, double delta) {
  if (!(delta > 0.0 && delta <= 1.0))
    throw ParamError("sharp power must lie in (0,1]");
  CheckReport rep =
      make_report("sharp-delta-bound", "powered-sharp-vs-powered-maximal",
                  f.grid);
  rep.tolerance = kTolBisection;
  rep.delta = delta;
  const GridFunction sd = sharp_delta(f, delta);
  const GridFunction md = maximal_r(f, delta);
  PointwiseWorst worst;
  for (int i = 0; i < f.size(); ++i) worst.offer(sd[i], 2.0 * md[i], i);
  rep.worst_violation = worst.margin;
  rep.status =
      rep.worst_violation <= rep.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
  rep.witness = cell_tag(f.grid, worst.cell);
  return rep;
}

CheckReport cf_pointwise_check(const GridFunction& f, double r) {
  if (!(r > 0.0 && r < 1.0)) throw ParamError("power must lie in (0,1)");
  CheckReport rep =
      make_report("singular-pointwise-ratio", "maximal-truncated-singular",
                  f.grid);
  if (identically_zero(f)) {
    rep.status = CheckStatus::Inconclusive;
    rep.witness = "input vanishes identically";
    return rep;
  }
  const GridFunction hf = hilbert_transform(f);
  const GridFunction mr = maximal_r(hf, r);
  const GridFunction hstar = hilbert_truncated_max(f);
  const GridFunction mf = maximal(f);
  double ratio = 0.0;
  int arg = 0;
  for (int i = 0; i < f.size(); ++i) {
    const double den = hstar[i] + mf[i];
    if (den == 0.0) continue;
    const double v = mr[i] / den;
    if (v > ratio) {
      ratio = v;
      arg = i;
    }
  }
  rep.status = CheckStatus::Recorded;
  rep.worst_violation = ratio;
  rep.witness = cell_tag(f.grid, arg) + " r=" + std::to_string(r);
  return rep;
}

// ---------------------------------------------------------------------------
// Structural experiments

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 19; ++i) grid.push_back(i / 20.0);
  return grid;
}

LambdaSearchResult search_lambda0(const WeightFunction& w, double p,
                                  const TestFamily& family,
                                  std::vector<double> lambda_grid) {
  if (family.members.empty()) throw ParamError("empty test family");
  LambdaSearchResult res;
  res.lambda_grid =
      lambda_grid.empty() ? default_lambda_grid() : std::move(lambda_grid);

  std::vector<double> numerators(family.members.size(), 0.0);
  std::vector<bool> usable(family.members.size(), true);
  for (size_t i = 0; i < family.members.size(); ++i) {
    numerators[i] = lp_w_norm(maximal(family.members[i]), w, p);
    if (numerators[i] == 0.0) {
      usable[i] = false;  // weight annihilates even the maximal function
      ++res.skipped_members;
    }
  }

  res.worst_ratio.assign(res.lambda_grid.size(), 0.0);
  res.worst_member.assign(res.lambda_grid.size(), -1);
  for (size_t li = 0; li < res.lambda_grid.size(); ++li) {
    const double lambda = res.lambda_grid[li];
    double worst = 0.0;
    int arg = -1;
    for (size_t i = 0; i < family.members.size(); ++i) {
      if (!usable[i]) continue;
      const double den =
          lp_w_norm(local_maximal(family.members[i], lambda), w, p);
      const double ratio = den == 0.0 ? kInf : numerators[i] / den;
      if (ratio > worst) {
        worst = ratio;
        arg = static_cast<int>(i);
      }
    }
    res.worst_ratio[li] = worst;
    res.worst_member[li] = arg;
    if (!res.lambda0 && arg >= 0 && worst <= 2.0) res.lambda0 = lambda;
  }
  return res;
}

CheckReport wp_ratio(const WeightFunction& w, double p,
                     const TestFamily& family) {
  if (family.members.empty()) throw ParamError("empty test family");
  CheckReport rep =
      make_report("iterated-maximal-ratio", "maximal-on-maximal-norms",
                  w.grid);
  rep.p = p;
  double best = 0.0;
  int arg = -1;
  int skipped = 0;
  for (size_t i = 0; i < family.members.size(); ++i) {
    const GridFunction mf = maximal(family.members[i]);
    const double den = lp_w_norm(mf, w, p);
    if (den == 0.0) {
      ++skipped;
      continue;
    }
    const double ratio = lp_w_norm(maximal(mf), w, p) / den;
    if (ratio > best) {
      best = ratio;
      arg = static_cast<int>(i);
    }
  }
  rep.status = CheckStatus::Recorded;
  rep.worst_violation = best;
  rep.witness = arg >= 0 ? family.labels[static_cast<size_t>(arg)]
                         : "all members degenerate";
  if (skipped > 0)
    rep.witness += " (skipped " + std::to_string(skipped) + ")";
  return rep;
}

CheckReport localization_check(const Grid1D& g, double lambda0, double epsilon,
                               Window q) {
  if (!(lambda0 > 0.0 && lambda0 < 1.0))
    throw ParamError("lambda0 must lie in (0,1)");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ParamError("epsilon must lie in (0,1)");
  CheckReport rep =
      make_report("localization", "small-indicator-localization", g);
  rep.lambda = lambda0;
  require_window(g, q);
  const Window half = scale_window(g, q, 0.5).window;
  const Window eq = scale_window(g, q, epsilon).window;
  const GridFunction loc = local_maximal(indicator(g, eq), lambda0);

  double worst_outside = 0.0;
  int worst_cell = -1;
  for (int i = 0; i < g.n; ++i) {
    if (half.contains(i)) continue;
    if (loc[i] != 0.0 && loc[i] > worst_outside) {
      worst_outside = loc[i];
      worst_cell = i;
    }
  }

  const bool admissible = epsilon < lambda0 * (0.25 - 0.5 * epsilon);
  rep.witness = "window " + window_tag(q) + " eps-window " + window_tag(eq) +
                " half " + window_tag(half);
  if (!admissible) {
    rep.status = CheckStatus::Recorded;
    rep.worst_violation = worst_outside;
    rep.witness += " (inadmissible eps, report-only)";
    return rep;
  }
  if (worst_cell < 0) {
    rep.status = CheckStatus::Pass;
    rep.worst_violation = 0.0;
    return rep;
  }
  // The continuum margin holds but a cell-count inflation of the shrunken
  // support can still defeat the integer geometry; that is a truncation
  // artifact, not a disproof. The provable discrete criterion bounds the
  // support cell count by lambda0 times the worst reach on either side.
  const int s = eq.cells();
  const bool provable = s <= lambda0 * (half.hi - eq.lo + 2) &&
                        s <= lambda0 * (eq.hi - half.lo + 2);
  rep.worst_violation = worst_outside;
  rep.status = provable ? CheckStatus::Fail : CheckStatus::Inconclusive;
  rep.witness += " nonzero at " + cell_tag(g, worst_cell);
  return rep;
}

CheckReport support_check_rq(const Grid1D& g, double lambda0, Window q) {
  if (!(lambda0 > 0.0 && lambda0 < 1.0))
    throw ParamError("lambda0 must lie in (0,1)");
  CheckReport rep =
      make_report("support-radius", "indicator-support-radius", g);
  rep.lambda = lambda0;
  require_window(g, q);
  const double r = 1.0 + 2.0 / lambda0;
  const ScaleResult rq = scale_window(g, q, r);
  rep.witness = "window " + window_tag(q) + " r=" + std::to_string(r) +
                " enlarged " + window_tag(rq.window);
  if (rq.clamped) {
    rep.status = CheckStatus::Inconclusive;
    rep.witness += " (clamped)";
    return rep;
  }
  const GridFunction loc = local_maximal(indicator(g, q), lambda0);
  for (int i = 0; i < g.n; ++i) {
    if (rq.window.contains(i)) continue;
    if (loc[i] != 0.0) {
      rep.status = CheckStatus::Fail;
      rep.worst_violation = loc[i];
      rep.witness += " nonzero at " + cell_tag(g, i);
      return rep;
    }
  }
  rep.status = CheckStatus::Pass;
  return rep;
}

CheckReport doubling_step_check(const WeightFunction& w, double p,
                                double lambda0, double epsilon,
                                WindowFamily fam) {
  if (!(p > 1.0)) throw ParamError("doubling step needs p > 1");
  if (!(epsilon > 0.0 && epsilon < lambda0 * (0.25 - 0.5 * epsilon)))
    throw ParamError("epsilon outside the localization margin");
  CheckReport rep =
      make_report("doubling-step", "doubling-from-localization", w.grid);
  rep.tolerance = kTolAnalytic;
  rep.p = p;
  rep.lambda = lambda0;
  const double factor = std::pow(2.0 / epsilon, p);
  PrefixSums pw(w.values);
  double worst = -kInf;
  Window worst_q{};
  for_each_window(w.grid.n, fam, [&](Window q) {
    const Window half = scale_window(w.grid, q, 0.5).window;
    const double lhs = pw.range(q.lo, q.hi);
    const double rhs = factor * pw.range(half.lo, half.hi);
    const double m = rel_margin(lhs, rhs);
    if (m > worst) {
      worst = m;
      worst_q = q;
    }
  });
  rep.worst_violation = worst;
  rep.status =
      worst <= rep.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
  rep.witness = "window " + window_tag(worst_q) + " eps=" +
                std::to_string(epsilon);
  return rep;
}

CheckReport fs_inequality_ratio(const WeightFunction& w, double p,
                                double delta, const TestFamily& family) {
  if (family.members.empty()) throw ParamError("empty test family");
  CheckReport rep =
      make_report("sharp-norm-ratio", "fefferman-stein-ratio", w.grid);
  rep.p = p;
  rep.delta = delta;
  double best = 0.0;
  int arg = -1;
  int skipped = 0;
  for (size_t i = 0; i < family.members.size(); ++i) {
    const double den =
        lp_w_norm(sharp_delta(family.members[i], delta), w, p);
    if (den == 0.0) {
      ++skipped;
      continue;
    }
    const double ratio = lp_w_norm(maximal(family.members[i]), w, p) / den;
    if (ratio > best) {
      best = ratio;
      arg = static_cast<int>(i);
    }
  }
  rep.status = CheckStatus::Recorded;
  rep.worst_violation = best;
  rep.witness = arg >= 0 ? family.labels[static_cast<size_t>(arg)]
                         : "all members degenerate";
  if (skipped > 0)
    rep.witness += " (skipped " + std::to_string(skipped) + ")";
  return rep;
}

CheckReport decay_check(const WeightFunction& w, double p,
                        const GridFunction& f, int cell,
                        const std::vector<double>& radii) {
  if (radii.empty()) throw ParamError("empty radius list");
  for (size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1]))
      throw ParamError("radius list must increase strictly");
  CheckReport rep = make_report("tail-decay", "far-tail-maximal-decay",
                                f.grid);
  rep.tolerance = kTolBisection;
  rep.p = p;

  double support_radius = 0.0;
  for (int i = 0; i < f.size(); ++i)
    if (f[i] != 0.0)
      support_radius = std::max(support_radius, std::abs(f.grid.center(i)));

  std::vector<double> seq;
  seq.reserve(radii.size());
  for (double r : radii) seq.push_back(maximal_at(mask_beyond(f, r), cell));

  double worst = -kInf;
  std::string note;
  for (size_t i = 1; i < seq.size(); ++i) {
    const double m = rel_margin(seq[i], seq[i - 1]);
    if (m > worst) {
      worst = m;
      note = "rise at R=" + std::to_string(radii[i]);
    }
  }
  for (size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] >= support_radius && seq[i] != 0.0) {
      rep.status = CheckStatus::Fail;
      rep.worst_violation = seq[i];
      rep.witness = "nonzero past the support at R=" + std::to_string(radii[i]);
      return rep;
    }
  }
  rep.worst_violation = std::max(worst, -1.0);
  rep.status =
      rep.worst_violation <= rep.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
  rep.witness = note.empty() ? "single radius" : note;
  rep.witness += "; tail maximal norm at R_max = " +
                 std::to_string(
                     lp_w_norm(maximal(mask_beyond(f, radii.back())), w, p));
  return rep;
}

CheckReport ml_lower_bound_check(const WeightFunction& w, double p,
                                 const std::vector<double>& cutoffs) {
  if (cutoffs.empty()) throw ParamError("empty cutoff list");
  for (double j : cutoffs)
    if (!(j > 0.0 && j < w.grid.radius()))
      throw ParamError("cutoffs must lie strictly inside the domain");
  CheckReport rep =
      make_report("tail-indicator-norms", "maximal-norm-lower-bound", w.grid);
  rep.p = p;
  double lo = kInf, hi = 0.0;
  for (double j : cutoffs) {
    GridFunction fj(w.grid, 0.0);
    for (int i = 0; i < w.grid.n; ++i)
      if (std::abs(w.grid.center(i)) >= j) fj[i] = 1.0;
    const double norm = lp_w_norm(maximal(fj), w, p);
    lo = std::min(lo, norm);
    hi = std::max(hi, norm);
  }
  rep.worst_violation = lo;
  rep.status = (lo > 0.0 && lo >= 0.05 * hi) ? CheckStatus::Pass
                                             : CheckStatus::Fail;
  rep.witness = "min norm " + std::to_string(lo) + ", max norm " +
                std::to_string(hi);
  return rep;
}

double admissible_epsilon(double lambda0) {
  if (!(lambda0 > 0.0 && lambda0 < 1.0))
    throw ParamError("lambda0 must lie in (0,1)");
  int k = static_cast<int>(
      std::floor(1024.0 * lambda0 / (4.0 + 2.0 * lambda0))) + 1;
  for (; k >= 1; --k) {
    const double eps = k / 1024.0;
    if (eps < lambda0 * (0.25 - 0.5 * eps)) return eps;
  }
  throw ParamError("no admissible epsilon on the 1/1024 ladder");
}

CheckReport run_oracle_agreement(const Grid1D& g, int count,
                                 std::uint64_t seed) {
  CheckReport rep = make_report("oracle-agreement", "fast-vs-exhaustive", g);
  rep.tolerance = kMaximalRelTol;
  Rng rng(seed);
  double worst = 0.0;
  std::string note = "all draws agree";
  const std::vector<double> lambdas = {0.1, 0.3, 0.5, 0.7, 0.9};
  for (int t = 0; t < count; ++t) {
    GridFunction f(g, 0.0);
    for (int i = 0; i < g.n; ++i) f[i] = rng.unit();
    const double lambda = lambdas[static_cast<size_t>(t) % lambdas.size()];
    const AgreementResult a = oracle_agreement(f, lambda);
    if (a.max_rel_gap > worst) {
      worst = a.max_rel_gap;
      note = "draw " + std::to_string(t) + " cell " +
             std::to_string(a.worst_cell);
    }
    if (!a.local_bitwise) {
      rep.status = CheckStatus::Fail;
      rep.worst_violation = 1.0;
      rep.witness = "local selection mismatch on draw " + std::to_string(t) +
                    " lambda=" + std::to_string(lambda);
      return rep;
    }
  }
  rep.worst_violation = worst;
  rep.status =
      worst <= rep.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
  rep.witness = note;
  return rep;
}

// ---------------------------------------------------------------------------
// Refinement studies

namespace {

StabilityStudy ratio_stability(const std::string& name,
                               const std::string& anchor,
                               const FamilySpec& famspec, double radius,
                               const std::vector<int>& ladder,
                               double param,
                               double (*per_member)(const GridFunction&,
                                                    double),
                               bool* chain_ok) {
  StabilityStudy study;
  study.ladder = ladder;
  Grid1D last_grid = Grid1D::symmetric(radius, ladder.front());
  for (int n : ladder) {
    const Grid1D g = Grid1D::symmetric(radius, n);
    last_grid = g;
    const TestFamily fam = make_test_family(famspec, g);
    double rec = 0.0;
    for (const GridFunction& f : fam.members)
      rec = std::max(rec, per_member(f, param));
    study.recorded.push_back(rec);
  }
  study.report = make_report(name, anchor, last_grid);
  double worst_growth = 0.0;
  for (size_t i = 1; i < study.recorded.size(); ++i)
    worst_growth = std::max(
        worst_growth, study.recorded[i] / study.recorded[i - 1] - 1.0);
  study.report.worst_violation = worst_growth - 0.10;
  const bool grown_ok = worst_growth <= 0.10;
  const bool ok = grown_ok && (chain_ok == nullptr || *chain_ok);
  study.report.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  study.report.witness =
      "recorded " + std::to_string(study.recorded.front()) + " -> " +
      std::to_string(study.recorded.back());
  if (chain_ok != nullptr && !*chain_ok)
    study.report.witness += " (per-trial chain bound violated)";
  return study;
}

double cr_member_ratio(const GridFunction& f, double delta) {
  const CheckReport r = coifman_rochberg_ratio(f, delta);
  return r.status == CheckStatus::Recorded ? r.worst_violation : 0.0;
}

}  // namespace

StabilityStudy cr_stability_study(const FamilySpec& fam, double radius,
                                  const std::vector<int>& ladder,
                                  double delta) {
  StabilityStudy s = ratio_stability("powered-maximal-stability",
                                     "coifman-rochberg", fam, radius, ladder,
                                     delta, &cr_member_ratio, nullptr);
  s.report.delta = delta;
  return s;
}

StabilityStudy local_of_maximal_stability_study(const FamilySpec& famspec,
                                                double radius,
                                                const std::vector<int>& ladder,
                                                double lambda) {
  // Records sup m_lambda(Mf)/Mf per rung and enforces the chain bound
  // against the powered-maximal ratio on every member.
  StabilityStudy study;
  study.ladder = ladder;
  bool chain_ok = true;
  std::string chain_note;
  Grid1D last_grid = Grid1D::symmetric(radius, ladder.front());
  for (int n : ladder) {
    const Grid1D g = Grid1D::symmetric(radius, n);
    last_grid = g;
    const TestFamily fam = make_test_family(famspec, g);
    double rec = 0.0;
    for (size_t i = 0; i < fam.members.size(); ++i) {
      const GridFunction& f = fam.members[i];
      const GridFunction mf = maximal(f);
      const GridFunction loc = local_maximal(mf, lambda);
      double c_obs = 0.0;
      for (int x = 0; x < f.size(); ++x)
        c_obs = std::max(c_obs, loc[x] / mf[x]);
      rec = std::max(rec, c_obs);
      const CheckReport chain = check_local_of_maximal(f, lambda);
      if (chain.failed()) {
        chain_ok = false;
        chain_note = "n=" + std::to_string(n) + " member " + fam.labels[i];
      }
    }
    study.recorded.push_back(rec);
  }
  study.report = make_report("local-of-maximal-stability",
                             "local-maximal-of-maximal", last_grid);
  study.report.lambda = lambda;
  double worst_growth = 0.0;
  for (size_t i = 1; i < study.recorded.size(); ++i)
    worst_growth = std::max(
        worst_growth, study.recorded[i] / study.recorded[i - 1] - 1.0);
  study.report.worst_violation = worst_growth - 0.10;
  study.report.status = (worst_growth <= 0.10 && chain_ok)
                            ? CheckStatus::Pass
                            : CheckStatus::Fail;
  study.report.witness =
      "recorded " + std::to_string(study.recorded.front()) + " -> " +
      std::to_string(study.recorded.back());
  if (!chain_ok) study.report.witness += " chain violated at " + chain_note;
  return study;
}

namespace {

double cf_member_ratio(const GridFunction& f, double r) {
  const CheckReport rep = cf_pointwise_check(f, r);
  return rep.status == CheckStatus::Recorded ? rep.worst_violation : 0.0;
}

}  // namespace

StabilityStudy cf_stability_study(const FamilySpec& fam, double radius,
                                  const std::vector<int>& ladder, double r) {
  return ratio_stability("singular-ratio-stability",
                         "maximal-truncated-singular", fam, radius, ladder, r,
                         &cf_member_ratio, nullptr);
}

// ---------------------------------------------------------------------------
// Coherence table

CoherenceTable coherence_table(const std::vector<WeightSpec>& gallery,
                               double p, double radius,
                               const std::vector<int>& ap_ladder,
                               const std::vector<double>& np_radii,
                               std::uint64_t seed) {
  if (gallery.empty()) throw ParamError("empty gallery");
  if (ap_ladder.size() < 2 || np_radii.size() < 2)
    throw ParamError("refinement ladders need at least two rungs");
  CoherenceTable table;
  const Grid1D search_grid = Grid1D::symmetric(radius, ap_ladder.back());
  const double h_np = 2.0 * radius / ap_ladder.back();

  for (const WeightSpec& spec : gallery) {
    CoherenceRow row;
    row.weight = spec.label();

    // Factor-2 criterion on the finest grid.
    const WeightFunction w = make_weight(spec, search_grid);
    const TestFamily fam =
        make_test_family(default_family_spec(seed), search_grid, &w, p);
    const LambdaSearchResult search = search_lambda0(w, p, fam);
    row.lambda0_found = search.lambda0.has_value();
    row.lambda0 = search.lambda0.value_or(0.0);
    if (row.lambda0_found) {
      const double eps = admissible_epsilon(row.lambda0);
      row.doubling_step_pass =
          !doubling_step_check(w, p, row.lambda0, eps).failed();
    }

    // A_p across the cell ladder on the fixed domain.
    std::vector<double> ap_values;
    bool ap_inf = false;
    for (int n : ap_ladder) {
      const Grid1D g = Grid1D::symmetric(radius, n);
      const ConstantEstimate e = ap_constant(make_weight(spec, g), p);
      if (e.infinite()) ap_inf = true;
      ap_values.push_back(e.value);
    }
    row.ap_finite = !ap_inf;
    row.ap_last = ap_values.back();
    if (row.ap_finite) {
      for (size_t i = 1; i < ap_values.size(); ++i)
        row.ap_growth =
            std::max(row.ap_growth, ap_values[i] / ap_values[i - 1]);
      row.ap_stable = row.ap_growth < 1.25;
    }

    // Tail integral across the domain ladder at fixed cell width.
    std::vector<double> np_values;
    for (double L : np_radii) {
      const int n = static_cast<int>(std::lround(2.0 * L / h_np));
      const Grid1D g = Grid1D::symmetric(L, n % 2 == 0 ? n : n + 1);
      np_values.push_back(np_integral(make_weight(spec, g), p));
    }
    for (size_t i = 1; i < np_values.size(); ++i)
      row.np_growth = std::max(row.np_growth,
                               np_values[i] / np_values[i - 1]);
    row.np_bounded = row.np_growth < 1.5;

    // Subset-vs-maximal estimate on the two coarser rungs.
    std::vector<double> cp_values;
    bool cp_inf = false;
    for (size_t i = 0; i + 1 < ap_ladder.size() && i < 2; ++i) {
      const Grid1D g = Grid1D::symmetric(radius, ap_ladder[i]);
      const ConstantEstimate e =
          cp_estimate(make_weight(spec, g), p, 0.5);
      if (e.infinite()) cp_inf = true;
      cp_values.push_back(e.value);
    }
    row.cp_finite = !cp_inf;
    row.cp_last = cp_values.back();
    row.cp_stable =
        row.cp_finite &&
        (cp_values.size() < 2 ||
         cp_values.back() / cp_values.front() < 1.25);

    row.doubling_finite = !doubling_constant(w).infinite();

    // The characterization, read at grid scale: the three-part antecedent
    // forces a finite, refinement-stable A_p estimate, and a successful
    // factor-two search always carries its doubling consequence.
    const bool antecedent =
        row.lambda0_found && row.cp_finite && row.cp_stable && row.np_bounded;
    row.consistent = (!antecedent || (row.ap_finite && row.ap_stable)) &&
                     (!row.lambda0_found || row.doubling_step_pass);
    table.rows.push_back(row);
  }

  table.report = make_report("coherence-table", "ap-characterization",
                             search_grid);
  table.report.p = p;
  bool all_ok = true;
  std::string bad;
  for (const CoherenceRow& row : table.rows) {
    if (!row.consistent) {
      all_ok = false;
      bad += row.weight + " ";
    }
  }
  table.report.status = all_ok ? CheckStatus::Pass : CheckStatus::Fail;
  table.report.witness =
      all_ok ? "all gallery rows consistent" : "inconsistent: " + bad;
  return table;
}

}  // namespace aplab
