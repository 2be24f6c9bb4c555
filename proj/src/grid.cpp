#include "aplab/grid.hpp"

#include <algorithm>
#include <numeric>

namespace aplab {

namespace {

double pairwise_rec(const double* v, size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  size_t half = n / 2;
  return pairwise_rec(v, half) + pairwise_rec(v + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> v) {
  return pairwise_rec(v.data(), v.size());
}

Grid1D Grid1D::symmetric(double radius, int cells) {
  if (!(radius > 0.0)) throw ParamError("grid radius must be positive");
  if (cells < 2 || cells % 2 != 0)
    throw ParamError("symmetric grid needs an even cell count >= 2");
  return Grid1D{-radius, 2.0 * radius / cells, cells};
}

GridFunction::GridFunction(Grid1D g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
  if (static_cast<int>(values.size()) != grid.n)
    throw ParamError("value count does not match grid cell count");
}

GridFunction::GridFunction(Grid1D g, double fill)
    : grid(g), values(static_cast<size_t>(g.n), fill) {}

double GridFunction::integral() const { return grid.h * pairwise_sum(values); }

void validate_values(const GridFunction& f, bool require_nonnegative,
                     const std::string& what) {
  for (int i = 0; i < f.size(); ++i) {
    if (!std::isfinite(f[i]))
      throw ValidationError(what + ": non-finite value at cell " +
                            std::to_string(i));
    if (require_nonnegative && f[i] < 0.0)
      throw ValidationError(what + ": negative value at cell " +
                            std::to_string(i));
  }
}

void require_window(const Grid1D& g, Window q) {
  if (q.lo < 0 || q.hi >= g.n || q.lo > q.hi)
    throw ParamError("window [" + std::to_string(q.lo) + "," +
                     std::to_string(q.hi) + "] not inside grid of " +
                     std::to_string(g.n) + " cells");
}

double window_measure(const Grid1D& g, Window q) { return q.cells() * g.h; }

double window_center(const Grid1D& g, Window q) {
  return g.origin + q.center_units() * g.h;
}

ScaleResult scale_window(const Grid1D& g, Window q, double c) {
  require_window(g, q);
  if (!(c > 0.0)) throw ParamError("scale factor must be positive");
  const int m = q.cells();
  const int mc = std::max(1, static_cast<int>(std::ceil(c * m)));
  // Left edge of the centered placement in cell-edge units; a half-integer
  // placement rounds toward the lower index.
  const double left = q.center_units() - 0.5 * mc;
  int lo = static_cast<int>(std::floor(left));
  int hi = lo + mc - 1;
  bool clamped = false;
  if (lo < 0) {
    lo = 0;
    clamped = true;
  }
  if (hi > g.n - 1) {
    hi = g.n - 1;
    clamped = true;
  }
  if (lo > hi) lo = hi;  // degenerate only when mc ends fully off-grid
  return ScaleResult{Window{lo, hi}, clamped};
}

namespace {

std::vector<double> window_abs_values(const GridFunction& f, Window q) {
  std::vector<double> v;
  v.reserve(static_cast<size_t>(q.cells()));
  for (int i = q.lo; i <= q.hi; ++i) v.push_back(std::abs(f[i]));
  return v;
}

}  // namespace

double window_average(const GridFunction& f, Window q) {
  require_window(f.grid, q);
  const auto v = window_abs_values(f, q);
  return pairwise_sum(v) / q.cells();
}

double powered_window_average(const GridFunction& f, Window q, double r) {
  require_window(f.grid, q);
  if (!(r > 0.0)) throw ParamError("power must be positive");
  std::vector<double> v;
  v.reserve(static_cast<size_t>(q.cells()));
  for (int i = q.lo; i <= q.hi; ++i) v.push_back(std::pow(std::abs(f[i]), r));
  return pairwise_sum(v) / q.cells();
}

double rearrangement_value(const GridFunction& f, Window q, double lambda) {
  require_window(f.grid, q);
  if (!(lambda > 0.0 && lambda < 1.0))
    throw ParamError("rearrangement parameter must lie in (0,1)");
  auto v = window_abs_values(f, q);
  const int m = q.cells();
  const int k = static_cast<int>(std::floor(lambda * m));
  if (k >= m) return 0.0;  // unreachable for lambda < 1
  std::nth_element(v.begin(), v.begin() + k, v.end(), std::greater<>());
  return v[static_cast<size_t>(k)];
}

double lp_w_norm(const GridFunction& f, const WeightFunction& w, double p) {
  if (!f.grid.same_as(w.grid)) throw ParamError("function/weight grid mismatch");
  if (!(p > 0.0)) throw ParamError("norm exponent must be positive");
  std::vector<double> terms(static_cast<size_t>(f.size()));
  for (int i = 0; i < f.size(); ++i)
    terms[static_cast<size_t>(i)] = std::pow(std::abs(f[i]), p) * w[i];
  return std::pow(f.grid.h * pairwise_sum(terms), 1.0 / p);
}

double l2_vector_norm(const GridFunction& f) {
  std::vector<double> terms(static_cast<size_t>(f.size()));
  for (int i = 0; i < f.size(); ++i)
    terms[static_cast<size_t>(i)] = f[i] * f[i];
  return std::sqrt(pairwise_sum(terms));
}

double weighted_measure(const WeightFunction& w, Window q) {
  require_window(w.grid, q);
  std::vector<double> v(w.values.begin() + q.lo, w.values.begin() + q.hi + 1);
  return w.grid.h * pairwise_sum(v);
}

double weighted_measure(const WeightFunction& w, const CellSet& e) {
  std::vector<double> v;
  v.reserve(e.cells.size());
  for (int i : e.cells) {
    if (i < 0 || i >= w.grid.n) throw ParamError("cell set leaves the grid");
    v.push_back(w[i]);
  }
  return w.grid.h * pairwise_sum(v);
}

CellSet heaviest_subset(const WeightFunction& w, Window q, int k) {
  require_window(w.grid, q);
  const int m = q.cells();
  if (k < 1 || k > m) throw ParamError("subset size out of range");
  std::vector<int> idx(static_cast<size_t>(m));
  std::iota(idx.begin(), idx.end(), q.lo);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (w[a] != w[b]) return w[a] > w[b];
    return a < b;
  });
  idx.resize(static_cast<size_t>(k));
  std::sort(idx.begin(), idx.end());
  return CellSet{std::move(idx)};
}

PrefixSums::PrefixSums(std::span<const double> v) {
  p.resize(v.size() + 1, 0.0);
  for (size_t i = 0; i < v.size(); ++i) p[i + 1] = p[i] + v[i];
}

std::string family_name(WindowFamily fam) {
  return fam == WindowFamily::All ? "all" : "dyadic";
}

WindowFamily family_from_name(const std::string& name) {
  if (name == "all") return WindowFamily::All;
  if (name == "dyadic") return WindowFamily::DyadicShifts;
  throw ValidationError("unknown window family: " + name);
}

}  // namespace aplab
