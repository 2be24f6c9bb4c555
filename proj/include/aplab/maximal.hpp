#pragma once

#include "aplab/grid.hpp"

namespace aplab {

// Relative tolerance of the bisection evaluator; exhaustive oracles are exact.
// The early-stop width sits one decade inside the contract tolerance.
inline constexpr double kMaximalRelTol = 1e-9;
inline constexpr double kMaximalStopTol = 1e-10;
inline constexpr int kMaximalMaxIter = 60;
inline constexpr int kOracleCap = 256;

// All suprema range over windows fully inside the grid, so every operator
// value here is a lower bound for its whole-line counterpart; refinement
// ladders (growing n, growing domain) are the tool for spotting divergence.

// Hardy-Littlewood maximal function: at each cell, the largest average of |f|
// over windows containing it. Evaluated per point by bisection on the level t
// with the prefix-sum feasibility test "some window through x has
// sum(|f| - t) >= 0"; the two-sided optimum is not a max of one-sided scans.
GridFunction maximal(const GridFunction& f);

// Single-point evaluation, same algorithm.
double maximal_at(const GridFunction& f, int cell);

// Exhaustive reference: every window average, propagated to covered cells by
// max-update. Exact; guarded by the size cap.
GridFunction maximal_oracle(const GridFunction& f, int cap = kOracleCap);

// Powered variant M(|f|^r)^{1/r}.
GridFunction maximal_r(const GridFunction& f, double r);

// Maximal function of a window indicator in closed form: starting from the
// window itself, the best average through an outside cell is cells/(reach),
// where reach is the span from the far window edge to the cell. Exact, and
// equal to what maximal() computes on the indicator (checked against the
// oracle in tests); used where full-window sweeps need it cheaply.
GridFunction indicator_maximal(const Grid1D& g, Window q);

GridFunction indicator(const Grid1D& g, Window q);

// Local maximal function: at each cell, the largest rearrangement value
// (f restricted to a window, taken at lambda * window measure) over windows
// containing the cell. Per window length, a sliding order-statistic tree
// yields each window's selected value; a sliding max propagates window values
// to covered cells. Values are exact element selections.
GridFunction local_maximal(const GridFunction& f, double lambda);

// Exhaustive reference, sorting every window; bitwise-equal to the fast path.
GridFunction local_maximal_oracle(const GridFunction& f, double lambda,
                                  int cap = kOracleCap);

// Mean-oscillation sharp function: at each cell, the largest mean absolute
// deviation from the signed window mean over windows containing the cell.
GridFunction sharp_function(const GridFunction& f);

// Powered sharp function: sharp of |f|^delta, then the 1/delta root.
GridFunction sharp_delta(const GridFunction& f, double delta);

// Cellwise min(|f|, level) where |x| <= level, else 0; level acts as both the
// value cap and the support radius.
GridFunction truncate_level(const GridFunction& f, double level);

// Cellwise f * indicator(|x| > radius); the far-tail remainder.
GridFunction mask_beyond(const GridFunction& f, double radius);

// Fast-vs-oracle agreement on one input, for the self-consistency protocol.
struct AgreementResult {
  double max_rel_gap = 0.0;  // maximal vs oracle
  bool local_bitwise = true; // local_maximal vs oracle
  int worst_cell = -1;
};
AgreementResult oracle_agreement(const GridFunction& f, double lambda);

}  // namespace aplab
