#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aplab {

// Argument outside an operation's stated range.
struct ParamError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input exceeds a size cap (oracle guards).
struct SizeError : std::length_error {
  using std::length_error::length_error;
};

// Malformed external input (config file, CSV).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic balanced-tree summation. The tree shape depends only on the
// element count, so the result is independent of call site and scheduler.
double pairwise_sum(std::span<const double> v);

/// Uniform 1-D grid of n cells; cell i covers [origin + i*h, origin + (i+1)*h).
struct Grid1D {
  double origin = 0.0;
  double h = 1.0;
  int n = 1;

  // Symmetric grid on [-radius, radius]. Requires an even cell count so that
  // no cell center lands exactly at x = 0 (centers sit at half-integer
  // multiples of h), which keeps |x|^a weights finite for a < 0.
  static Grid1D symmetric(double radius, int cells);

  double center(int i) const { return origin + (i + 0.5) * h; }
  double cell_left(int i) const { return origin + i * h; }
  double measure() const { return n * h; }
  double radius() const { return 0.5 * n * h; }

  bool same_as(const Grid1D& o) const {
    return origin == o.origin && h == o.h && n == o.n;
  }
};

/// Piecewise-constant function on a grid, one value per cell.
/// A weight is the same object with all values >= 0.
struct GridFunction {
  Grid1D grid;
  std::vector<double> values;

  GridFunction() = default;
  GridFunction(Grid1D g, std::vector<double> v);
  GridFunction(Grid1D g, double fill);

  int size() const { return grid.n; }
  double& operator[](int i) { return values[static_cast<size_t>(i)]; }
  double operator[](int i) const { return values[static_cast<size_t>(i)]; }

  // h * sum of values via the fixed summation tree.
  double integral() const;
};

using WeightFunction = GridFunction;

// Throws ValidationError if any value is non-finite (or negative when
// require_nonnegative is set). Applied at external boundaries; internal
// operators assume it already holds.
void validate_values(const GridFunction& f, bool require_nonnegative,
                     const std::string& what);

/// Contiguous cell interval [lo, hi], both inclusive; models a cube.
struct Window {
  int lo = 0;
  int hi = 0;

  int cells() const { return hi - lo + 1; }
  bool contains(int i) const { return lo <= i && i <= hi; }
  // Center in cell-edge units (may be a half-integer).
  double center_units() const { return 0.5 * (lo + hi + 1); }

  bool operator==(const Window&) const = default;
};

void require_window(const Grid1D& g, Window q);

double window_measure(const Grid1D& g, Window q);
double window_center(const Grid1D& g, Window q);

struct ScaleResult {
  Window window;
  bool clamped = false;
};

// Concentric scaling: same center, ceil(c*m) cells (at least one); a
// fractional placement offset shifts toward the lower index; the result is
// clamped to the grid with a flag. For c >= 1 the unclamped window contains q.
ScaleResult scale_window(const Grid1D& g, Window q, double c);

/// Sorted distinct cell indices inside a parent window.
struct CellSet {
  std::vector<int> cells;

  int count() const { return static_cast<int>(cells.size()); }
  double measure(const Grid1D& g) const { return count() * g.h; }
};

// (1/m) * sum of |f| over q, fixed summation order.
double window_average(const GridFunction& f, Window q);

// (1/m) * sum of |f|^r over q, then no root; helper for Chebyshev-type bounds.
double powered_window_average(const GridFunction& f, Window q, double r);

// Value of the non-increasing rearrangement of f restricted to q at lambda*|q|:
// with window values of |f| sorted descending v1 >= ... >= vm, returns
// v_{k+1} for k = floor(lambda*m). Realizes inf{a : |{x in q : |f|>a}| <= lambda|q|}.
double rearrangement_value(const GridFunction& f, Window q, double lambda);

// (h * sum |f_i|^p w_i)^{1/p}, fixed summation order.
double lp_w_norm(const GridFunction& f, const WeightFunction& w, double p);

// Plain euclidean norm of the value vector (no h scaling); the natural scale
// for the Hilbert-matrix inequality.
double l2_vector_norm(const GridFunction& f);

double weighted_measure(const WeightFunction& w, Window q);
double weighted_measure(const WeightFunction& w, const CellSet& e);

// The k cells of q with largest weight, ties broken toward lower index.
// Maximizes weighted_measure over all k-cell subsets of q.
CellSet heaviest_subset(const WeightFunction& w, Window q, int k);

// Sequential prefix sums, computed once and shared by window sweeps; range
// sums of nonnegative data are monotone, so differences never go negative.
struct PrefixSums {
  std::vector<double> p;  // p[i] = sum of first i values

  PrefixSums() = default;
  explicit PrefixSums(std::span<const double> v);

  double range(int lo, int hi) const {  // cells lo..hi inclusive
    return p[static_cast<size_t>(hi) + 1] - p[static_cast<size_t>(lo)];
  }
};

enum class WindowFamily { All, DyadicShifts };

std::string family_name(WindowFamily fam);
WindowFamily family_from_name(const std::string& name);

// Canonical sweep order: lengths ascending, then lo ascending. All estimator
// argmax ties resolve toward the smaller order key, independent of sweep
// partitioning.
template <class Fn>
void for_each_window(int n, WindowFamily fam, Fn&& fn) {
  if (fam == WindowFamily::All) {
    for (int m = 1; m <= n; ++m)
      for (int lo = 0; lo + m <= n; ++lo) fn(Window{lo, lo + m - 1});
  } else {
    for (int m = 1; m <= n; m *= 2)
      for (int lo = 0; lo + m <= n; ++lo) fn(Window{lo, lo + m - 1});
  }
}

inline long window_order_key(int n, Window q) {
  return static_cast<long>(q.cells()) * (n + 1) + q.lo;
}

}  // namespace aplab
