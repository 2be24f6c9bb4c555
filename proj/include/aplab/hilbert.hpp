#pragma once

#include <cstdint>
#include <string>

#include "aplab/grid.hpp"

namespace aplab {

// Convolution kernel 1/t at cell-center differences. On a uniform grid the
// cell width cancels: h * f_j / (x_i - x_j) = f_j / (i - j), so the operator
// is the classical matrix with entries 1/(i-j).
struct KernelModel {
  static constexpr double lower_bound_constant = 1.0;

  static double at(double t) { return 1.0 / t; }
  // |K(t)| * |t| == lower_bound_constant exactly, for every t != 0.
};

// Discrete principal-value transform: Hf(x_i) = sum_{j != i} f_j / (i - j),
// each cell's sum taken with the fixed summation tree.
GridFunction hilbert_transform(const GridFunction& f);

// Maximal truncated transform: at each cell the largest |tail sum| over all
// truncation radii k = 1..n, tails accumulated from the far end so that every
// radius is visited once. The full-sum candidate (radius 1) is additionally
// evaluated through the same fixed tree as hilbert_transform, which keeps
// H* >= |Hf| exact.
GridFunction hilbert_truncated_max(const GridFunction& f);

struct NondegeneracyReport {
  std::string mode;          // "shifted" or "paired"
  double constant = 0.0;     // the C under test
  int trials = 0;
  int evaluated = 0;         // trials with at least one in-grid probe cell
  int skipped = 0;           // trials whose probe windows left the grid
  double worst_ratio = 0.0;  // max over probes of average / (|Hf|)
  double worst_ratio_cond2 = 0.0;  // paired mode only
  bool pass = false;         // worst ratio(s) <= C
  std::string witness;

  // paired mode re-checks the same trials, so its probes mirror shifted ones
};

// Shifted probe: for seeded random windows q of length l = m*h and random
// nonnegative f supported on q, with the probe shift of one window length,
// checks avg_q f <= C * |H(f chi_q)(x)| at every in-grid cell of the two
// shifted copies of q.
NondegeneracyReport nondegeneracy_check_shifted(const Grid1D& g, double c,
                                                int trials,
                                                std::uint64_t seed);

// Paired probe: with q' = q shifted right by one window length, checks both
// avg_q f <= C * |H(f chi_q)(x)| for all x in q', and 1 <= C * |H(chi_q')(x)|
// for all x in q.
NondegeneracyReport nondegeneracy_check_paired(const Grid1D& g, double c,
                                               int trials, std::uint64_t seed);

}  // namespace aplab
