#include "aplab/hilbert.hpp"

#include <algorithm>
#include <limits>

#include "aplab/maximal.hpp"
#include "aplab/parallel.hpp"
#include "aplab/rng.hpp"

namespace aplab {

namespace {

double hilbert_at(const GridFunction& f, int i, std::vector<double>& scratch) {
  scratch.clear();
  for (int j = 0; j < f.size(); ++j) {
    if (j == i) continue;
    scratch.push_back(f[j] / static_cast<double>(i - j));
  }
  return pairwise_sum(scratch);
}

}  // namespace

GridFunction hilbert_transform(const GridFunction& f) {
  GridFunction out(f.grid, 0.0);
  parallel_for(f.size(), [&](int i) {
    thread_local std::vector<double> scratch;
    out[i] = hilbert_at(f, i, scratch);
  });
  return out;
}

GridFunction hilbert_truncated_max(const GridFunction& f) {
  const int n = f.size();
  const GridFunction full = hilbert_transform(f);
  GridFunction out(f.grid, 0.0);
  parallel_for(n, [&](int i) {
    double tail = 0.0;
    double best = 0.0;
    for (int k = n - 1; k >= 1; --k) {
      if (i - k >= 0) tail += f[i - k] / static_cast<double>(k);
      if (i + k < n) tail -= f[i + k] / static_cast<double>(k);
      best = std::max(best, std::abs(tail));
    }
    out[i] = std::max(best, std::abs(full[i]));
  });
  return out;
}

namespace {

struct Probe {
  Window support{};
  GridFunction f;
};

// One seeded trial: window of at most n/3 cells and nonnegative values on it.
Probe draw_trial(const Grid1D& g, Rng& rng) {
  const int max_m = std::max(1, g.n / 3);
  const int m = rng.uniform_int(1, max_m);
  const int lo = rng.uniform_int(0, g.n - m);
  Probe p{Window{lo, lo + m - 1}, GridFunction(g, 0.0)};
  for (int i = p.support.lo; i <= p.support.hi; ++i) p.f[i] = rng.unit();
  return p;
}

void probe_cells(const Grid1D& g, Window q, std::vector<int>& cells) {
  // Both shifted copies of q, one window length away, clipped to the grid.
  cells.clear();
  const int m = q.cells();
  for (int x = q.lo - m; x <= q.hi - m; ++x)
    if (x >= 0 && x < g.n) cells.push_back(x);
  for (int x = q.lo + m; x <= q.hi + m; ++x)
    if (x >= 0 && x < g.n) cells.push_back(x);
}

double ratio_or_inf(double avg, double habs) {
  if (avg == 0.0) return 0.0;  // vacuous
  if (habs == 0.0) return std::numeric_limits<double>::infinity();
  return avg / habs;
}

}  // namespace

NondegeneracyReport nondegeneracy_check_shifted(const Grid1D& g, double c,
                                                int trials,
                                                std::uint64_t seed) {
  if (!(c > 0.0)) throw ParamError("non-degeneracy constant must be positive");
  NondegeneracyReport rep;
  rep.mode = "shifted";
  rep.constant = c;
  rep.trials = trials;
  Rng rng(seed);
  std::vector<int> cells;
  for (int t = 0; t < trials; ++t) {
    const Probe p = draw_trial(g, rng);
    probe_cells(g, p.support, cells);
    if (cells.empty()) {
      ++rep.skipped;
      continue;
    }
    ++rep.evaluated;
    const double avg = window_average(p.f, p.support);
    const GridFunction hf = hilbert_transform(p.f);
    for (int x : cells) {
      const double r = ratio_or_inf(avg, std::abs(hf[x]));
      if (r > rep.worst_ratio) {
        rep.worst_ratio = r;
        rep.witness = "trial " + std::to_string(t) + " window [" +
                      std::to_string(p.support.lo) + "," +
                      std::to_string(p.support.hi) + "] cell " +
                      std::to_string(x);
      }
    }
  }
  rep.pass = rep.worst_ratio <= c;
  return rep;
}

NondegeneracyReport nondegeneracy_check_paired(const Grid1D& g, double c,
                                               int trials,
                                               std::uint64_t seed) {
  if (!(c > 0.0)) throw ParamError("non-degeneracy constant must be positive");
  NondegeneracyReport rep;
  rep.mode = "paired";
  rep.constant = c;
  rep.trials = trials;
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const Probe p = draw_trial(g, rng);
    const int m = p.support.cells();
    const Window paired{p.support.lo + m, p.support.hi + m};
    if (paired.hi >= g.n) {  // the paired window must resolve fully in-grid
      ++rep.skipped;
      continue;
    }
    ++rep.evaluated;
    const double avg = window_average(p.f, p.support);
    const GridFunction hf = hilbert_transform(p.f);
    for (int x = paired.lo; x <= paired.hi; ++x) {
      const double r = ratio_or_inf(avg, std::abs(hf[x]));
      if (r > rep.worst_ratio) {
        rep.worst_ratio = r;
        rep.witness = "trial " + std::to_string(t) + " window [" +
                      std::to_string(p.support.lo) + "," +
                      std::to_string(p.support.hi) + "] cell " +
                      std::to_string(x);
      }
    }
    const GridFunction hpair =
        hilbert_transform(indicator(g, paired));
    for (int x = p.support.lo; x <= p.support.hi; ++x) {
      const double r = ratio_or_inf(1.0, std::abs(hpair[x]));
      rep.worst_ratio_cond2 = std::max(rep.worst_ratio_cond2, r);
    }
  }
  rep.pass = rep.worst_ratio <= c && rep.worst_ratio_cond2 <= c;
  return rep;
}

}  // namespace aplab
