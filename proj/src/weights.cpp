#include "aplab/weights.hpp"

#include <algorithm>
#include <limits>

#include "aplab/maximal.hpp"

namespace aplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int first_zero_cell(const WeightFunction& w) {
  for (int i = 0; i < w.size(); ++i)
    if (w[i] == 0.0) return i;
  return -1;
}

struct ArgBest {
  double value = -kInf;
  Window window{};
  int k = 0;
  long key = std::numeric_limits<long>::max();

  void offer(double v, Window q, int n, int kk = 0) {
    const long ord = window_order_key(n, q);
    if (v > value || (v == value && ord < key)) {
      value = v;
      window = q;
      k = kk;
      key = ord;
    }
  }
  bool valid() const { return value > -kInf; }
};

ConstantEstimate base_estimate(const WeightFunction& w, double p, double delta,
                               WindowFamily fam) {
  ConstantEstimate e;
  e.p = p;
  e.delta = delta;
  e.family = fam;
  e.grid_cells = w.grid.n;
  e.domain_radius = w.grid.radius();
  return e;
}

double dual_exponent_value(double wv, double p) {
  if (wv == 0.0) return kInf;
  return std::pow(wv, -1.0 / (p - 1.0));
}

}  // namespace

std::string WeightSpec::label() const {
  switch (kind) {
    case WeightKind::Constant:
      return "constant(" + std::to_string(value) + ")";
    case WeightKind::Power:
      return "power(" + std::to_string(exponent) + ")";
    case WeightKind::Vanishing:
      return "vanishing";
    case WeightKind::Complement:
      return "complement[" + std::to_string(s) + "," + std::to_string(t) + "]";
    case WeightKind::Custom:
      return "custom";
  }
  return "unknown";
}

WeightFunction make_weight(const WeightSpec& spec, const Grid1D& g) {
  WeightFunction w(g, 0.0);
  switch (spec.kind) {
    case WeightKind::Constant:
      if (!(spec.value >= 0.0) || !std::isfinite(spec.value))
        throw ValidationError("constant weight level must be finite and >= 0");
      for (int i = 0; i < g.n; ++i) w[i] = spec.value;
      break;
    case WeightKind::Power:
      for (int i = 0; i < g.n; ++i) {
        const double v = std::pow(std::abs(g.center(i)), spec.exponent);
        if (!std::isfinite(v))
          throw ValidationError(
              "power weight blows up at a cell center; use a grid whose "
              "centers avoid x = 0");
        w[i] = v;
      }
      break;
    case WeightKind::Vanishing:
      for (int i = 0; i < g.n; ++i)
        w[i] = std::abs(g.center(i)) >= 1.0 ? 1.0 : 0.0;
      break;
    case WeightKind::Complement:
      if (!(spec.s <= spec.t))
        throw ValidationError("complement weight needs s <= t");
      for (int i = 0; i < g.n; ++i) {
        const double x = g.center(i);
        w[i] = (x < spec.s || x > spec.t) ? 1.0 : 0.0;
      }
      break;
    case WeightKind::Custom: {
      if (static_cast<int>(spec.custom.size()) != g.n)
        throw ValidationError("custom weight cell count mismatch");
      GridFunction candidate(g, spec.custom);
      validate_values(candidate, /*require_nonnegative=*/true, "custom weight");
      w = std::move(candidate);
      break;
    }
  }
  return w;
}

WeightFunction dual_weight(const WeightFunction& w, double p) {
  if (!(p > 1.0)) throw ParamError("dual weight needs p > 1");
  WeightFunction s(w.grid, 0.0);
  for (int i = 0; i < w.size(); ++i) s[i] = dual_exponent_value(w[i], p);
  return s;
}

WeightFunction perturb_weight(const WeightFunction& w, double eps) {
  if (!(eps >= 0.0)) throw ParamError("perturbation must be >= 0");
  WeightFunction out(w.grid, 0.0);
  for (int i = 0; i < w.size(); ++i) out[i] = w[i] + eps;
  return out;
}

double ap_window_value(const WeightFunction& w, double p, Window q) {
  require_window(w.grid, q);
  for (int i = q.lo; i <= q.hi; ++i)
    if (w[i] == 0.0) return kInf;
  std::vector<double> sigma;
  sigma.reserve(static_cast<size_t>(q.cells()));
  for (int i = q.lo; i <= q.hi; ++i)
    sigma.push_back(dual_exponent_value(w[i], p));
  const double avg_w = window_average(w, q);
  const double avg_s = pairwise_sum(sigma) / q.cells();
  return avg_w * std::pow(avg_s, p - 1.0);
}

ConstantEstimate ap_constant(const WeightFunction& w, double p,
                             WindowFamily fam) {
  if (!(p > 1.0)) throw ParamError("A_p estimate needs p > 1");
  ConstantEstimate e = base_estimate(w, p, 0.0, fam);
  const int zero = first_zero_cell(w);
  if (zero >= 0) {
    // The singleton window at the first zero cell is the earliest degenerate
    // window in canonical order for either family.
    e.value = kInf;
    e.witness = Window{zero, zero};
    return e;
  }
  const int n = w.grid.n;
  std::vector<double> sigma(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    sigma[static_cast<size_t>(i)] = dual_exponent_value(w[i], p);
  PrefixSums pw(w.values), psig(sigma);

  ArgBest best;
  for_each_window(n, fam, [&](Window q) {
    const int m = q.cells();
    const double v = (pw.range(q.lo, q.hi) / m) *
                     std::pow(psig.range(q.lo, q.hi) / m, p - 1.0);
    best.offer(v, q, n);
  });
  e.witness = best.window;
  e.value = ap_window_value(w, p, best.window);
  return e;
}

double ainfty_window_value(const WeightFunction& w, double delta, Window q,
                           int k) {
  const CellSet ek = heaviest_subset(w, q, k);
  const double wq = weighted_measure(w, q);
  if (wq == 0.0) return 0.0;
  return weighted_measure(w, ek) *
         std::pow(static_cast<double>(q.cells()) / k, delta) / wq;
}

namespace {

// Shared sweep for the two subset-growth estimates: for each window (grown
// one cell at a time so the descending value order is maintained by
// insertion) scan all subset sizes k against a window-dependent denominator.
template <class DenomFn>
void subset_growth_sweep(const WeightFunction& w, double delta,
                         WindowFamily fam, DenomFn&& denom, ArgBest& best) {
  const int n = w.grid.n;
  std::vector<double> sorted;
  sorted.reserve(static_cast<size_t>(n));
  for (int lo = 0; lo < n; ++lo) {
    sorted.clear();
    for (int hi = lo; hi < n; ++hi) {
      const double v = w[hi];
      sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), v,
                                     std::greater<>()),
                    v);
      const int m = hi - lo + 1;
      if (fam == WindowFamily::DyadicShifts && (m & (m - 1)) != 0) continue;
      const Window q{lo, hi};
      const double den = denom(q);
      if (den == 0.0) continue;
      double topk = 0.0;
      for (int k = 1; k <= m; ++k) {
        topk += sorted[static_cast<size_t>(k - 1)];
        if (topk == 0.0) continue;
        const double val = w.grid.h * topk *
                           std::pow(static_cast<double>(m) / k, delta) / den;
        best.offer(val, q, n, k);
      }
    }
  }
}

}  // namespace

ConstantEstimate ainfty_estimate(const WeightFunction& w, double delta,
                                 WindowFamily fam) {
  if (!(delta > 0.0 && delta <= 1.0))
    throw ParamError("subset-growth exponent must lie in (0,1]");
  ConstantEstimate e = base_estimate(w, 0.0, delta, fam);
  PrefixSums pw(w.values);
  ArgBest best;
  subset_growth_sweep(w, delta, fam,
                      [&](Window q) { return w.grid.h * pw.range(q.lo, q.hi); },
                      best);
  if (!best.valid()) {
    e.value = 0.0;  // weight vanishes identically
    return e;
  }
  e.witness = best.window;
  e.witness_k = best.k;
  e.witness_subset = heaviest_subset(w, best.window, best.k);
  e.value = ainfty_window_value(w, delta, best.window, best.k);
  return e;
}

namespace {

// h * sum over the grid of (M chi_q)^p w, with the indicator maximal function
// in closed form: cells/(reach) and reach = span from the far edge of q.
double cp_denominator(const WeightFunction& w, double p, Window q) {
  const int n = w.grid.n;
  const double m = q.cells();
  std::vector<double> terms(static_cast<size_t>(n));
  for (int x = 0; x < n; ++x) {
    const int reach = std::max(x, q.hi) - std::min(x, q.lo) + 1;
    terms[static_cast<size_t>(x)] = std::pow(m / reach, p) * w[x];
  }
  return w.grid.h * pairwise_sum(terms);
}

}  // namespace

double cp_window_value(const WeightFunction& w, double p, double delta,
                       Window q, int k) {
  const CellSet ek = heaviest_subset(w, q, k);
  const double den = cp_denominator(w, p, q);
  if (den == 0.0) return 0.0;
  return weighted_measure(w, ek) *
         std::pow(static_cast<double>(q.cells()) / k, delta) / den;
}

ConstantEstimate cp_estimate(const WeightFunction& w, double p, double delta,
                             WindowFamily fam) {
  if (!(p > 1.0)) throw ParamError("C_p estimate needs p > 1");
  if (!(delta > 0.0 && delta <= 1.0))
    throw ParamError("subset-growth exponent must lie in (0,1]");
  ConstantEstimate e = base_estimate(w, p, delta, fam);
  const int n = w.grid.n;

  // Denominator via one O(n) pass per window: split the integrand into the
  // in-window plateau and the two decaying tails. pow(d, p) over integer
  // spans is tabulated once.
  std::vector<double> dpow(static_cast<size_t>(n) + 1, 0.0);
  for (int d = 1; d <= n; ++d)
    dpow[static_cast<size_t>(d)] = std::pow(static_cast<double>(d), p);

  ArgBest best;
  subset_growth_sweep(
      w, delta, fam,
      [&](Window q) {
        const int m = q.cells();
        double acc = 0.0;
        for (int x = 0; x < q.lo; ++x)
          acc += w[x] / dpow[static_cast<size_t>(q.hi - x + 1)];
        for (int x = q.lo; x <= q.hi; ++x)
          acc += w[x] / dpow[static_cast<size_t>(m)];
        for (int x = q.hi + 1; x < n; ++x)
          acc += w[x] / dpow[static_cast<size_t>(x - q.lo + 1)];
        return w.grid.h * dpow[static_cast<size_t>(m)] * acc;
      },
      best);
  if (!best.valid()) {
    e.value = 0.0;
    return e;
  }
  e.witness = best.window;
  e.witness_k = best.k;
  e.witness_subset = heaviest_subset(w, best.window, best.k);
  e.value = cp_window_value(w, p, delta, best.window, best.k);
  return e;
}

double doubling_window_value(const WeightFunction& w, Window q) {
  const ScaleResult doubled = scale_window(w.grid, q, 2.0);
  const double wq = weighted_measure(w, q);
  const double w2q = weighted_measure(w, doubled.window);
  if (wq == 0.0) return w2q > 0.0 ? kInf : 0.0;
  return w2q / wq;
}

ConstantEstimate doubling_constant(const WeightFunction& w, WindowFamily fam) {
  ConstantEstimate e = base_estimate(w, 0.0, 0.0, fam);
  const int n = w.grid.n;
  PrefixSums pw(w.values);

  bool found_inf = false;
  Window inf_witness{};
  long inf_key = std::numeric_limits<long>::max();
  ArgBest best;
  for_each_window(n, fam, [&](Window q) {
    const ScaleResult doubled = scale_window(w.grid, q, 2.0);
    if (doubled.clamped) return;  // only fully resolved doubled windows count
    const double wq = pw.range(q.lo, q.hi);
    const double w2q = pw.range(doubled.window.lo, doubled.window.hi);
    if (wq == 0.0) {
      if (w2q > 0.0) {
        const long key = window_order_key(n, q);
        if (!found_inf || key < inf_key) {
          found_inf = true;
          inf_witness = q;
          inf_key = key;
        }
      }
      return;  // 0/0 carries no information
    }
    best.offer(w2q / wq, q, n);
  });

  if (found_inf) {
    e.value = kInf;
    e.witness = inf_witness;
    return e;
  }
  if (!best.valid()) {
    e.value = 0.0;
    return e;
  }
  e.witness = best.window;
  e.value = doubling_window_value(w, best.window);
  return e;
}

double np_integral(const WeightFunction& w, double p) {
  if (!(p > 1.0)) throw ParamError("tail integral needs p > 1");
  std::vector<double> terms(static_cast<size_t>(w.size()));
  for (int i = 0; i < w.size(); ++i)
    terms[static_cast<size_t>(i)] =
        w[i] / std::pow(1.0 + std::abs(w.grid.center(i)), p);
  return w.grid.h * pairwise_sum(terms);
}

double am_window_value(const WeightFunction& w, double p, Window q) {
  require_window(w.grid, q);
  for (int i = q.lo; i <= q.hi; ++i)
    if (w[i] == 0.0) return kInf;
  std::vector<double> sigma;
  sigma.reserve(static_cast<size_t>(q.cells()));
  for (int i = q.lo; i <= q.hi; ++i)
    sigma.push_back(dual_exponent_value(w[i], p));
  const double pp = p / (p - 1.0);
  const double wq = weighted_measure(w, q);
  const double sq = w.grid.h * pairwise_sum(sigma);
  return std::pow(wq, 1.0 / p) * std::pow(sq, 1.0 / pp) /
         window_measure(w.grid, q);
}

ConstantEstimate am_functional(const WeightFunction& w, double p,
                               WindowFamily fam) {
  if (!(p > 1.0)) throw ParamError("indicator-norm product needs p > 1");
  ConstantEstimate e = base_estimate(w, p, 0.0, fam);
  const int zero = first_zero_cell(w);
  if (zero >= 0) {
    e.value = kInf;
    e.witness = Window{zero, zero};
    return e;
  }
  const int n = w.grid.n;
  std::vector<double> sigma(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    sigma[static_cast<size_t>(i)] = dual_exponent_value(w[i], p);
  PrefixSums pw(w.values), psig(sigma);
  const double pp = p / (p - 1.0);

  ArgBest best;
  for_each_window(n, fam, [&](Window q) {
    const double wq = w.grid.h * pw.range(q.lo, q.hi);
    const double sq = w.grid.h * psig.range(q.lo, q.hi);
    const double v = std::pow(wq, 1.0 / p) * std::pow(sq, 1.0 / pp) /
                     window_measure(w.grid, q);
    best.offer(v, q, n);
  });
  e.witness = best.window;
  e.value = am_window_value(w, p, best.window);
  return e;
}

}  // namespace aplab
