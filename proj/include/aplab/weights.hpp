#pragma once

#include <optional>

#include "aplab/grid.hpp"

namespace aplab {

enum class WeightKind { Constant, Power, Vanishing, Complement, Custom };

struct WeightSpec {
  WeightKind kind = WeightKind::Constant;
  double value = 1.0;          // constant level
  double exponent = 0.0;       // |x|^a at cell centers
  double s = -1.0, t = 1.0;    // complement: 1 outside [s, t]
  std::vector<double> custom;  // explicit cell values

  std::string label() const;
};

// Nonnegative grid function per spec; rejects negative or non-finite custom
// values, and power weights whose evaluation is infinite at a cell center.
WeightFunction make_weight(const WeightSpec& spec, const Grid1D& g);

// Cellwise w^{-1/(p-1)}; zero-weight cells map to +inf, which every estimator
// treats as a first-class flag.
WeightFunction dual_weight(const WeightFunction& w, double p);

// Cellwise w + eps.
WeightFunction perturb_weight(const WeightFunction& w, double eps);

/// A supremum-type constant with the window (and subset, where applicable)
/// that attains it. Window suprema run over windows inside the grid only, so
/// every value is a lower bound of its whole-line counterpart; the refinement
/// metadata records the grid it was measured on.
struct ConstantEstimate {
  double value = 0.0;  // +inf flags a degenerate witness
  Window witness{};
  std::optional<CellSet> witness_subset;
  int witness_k = 0;
  double p = 0.0;
  double delta = 0.0;
  WindowFamily family = WindowFamily::All;
  int grid_cells = 0;
  double domain_radius = 0.0;

  bool infinite() const { return std::isinf(value); }
};

// Canonical single-window evaluators. Estimator sweeps locate the extremal
// window with prefix-sum arithmetic, then report the canonical value of that
// window, so a stored witness always reproduces the reported value exactly.
double ap_window_value(const WeightFunction& w, double p, Window q);
double ainfty_window_value(const WeightFunction& w, double delta, Window q,
                           int k);
double cp_window_value(const WeightFunction& w, double p, double delta,
                       Window q, int k);
double doubling_window_value(const WeightFunction& w, Window q);
double am_window_value(const WeightFunction& w, double p, Window q);

// sup over the family of avg(w) * avg(w^{-1/(p-1)})^{p-1}; +inf with witness
// as soon as some family window contains a zero-weight cell.
ConstantEstimate ap_constant(const WeightFunction& w, double p,
                             WindowFamily fam = WindowFamily::All);

// sup over windows q and subset sizes k of w(E_k) * (m/k)^delta / w(q) with
// E_k the k heaviest cells; windows of zero weight carry no information and
// are skipped.
ConstantEstimate ainfty_estimate(const WeightFunction& w, double delta,
                                 WindowFamily fam = WindowFamily::All);

// Like the subset-growth estimate, but against the tail-aware denominator
// integral (M chi_q)^p w over the whole grid. The indicator maximal function
// is evaluated in closed form (exact; see indicator_maximal).
ConstantEstimate cp_estimate(const WeightFunction& w, double p, double delta,
                             WindowFamily fam = WindowFamily::All);

// sup over windows q (with the doubled window unclamped) of w(2q)/w(q);
// +inf with witness when w(q) = 0 < w(2q).
ConstantEstimate doubling_constant(const WeightFunction& w,
                                   WindowFamily fam = WindowFamily::All);

// h * sum of w_i / (1 + |x_i|)^p; the tail-integrability gauge.
double np_integral(const WeightFunction& w, double p);

// sup over windows of w(q)^{1/p} * sigma(q)^{1/p'} / |q|, the indicator-norm
// product; equals the window A_p product to the 1/p power.
ConstantEstimate am_functional(const WeightFunction& w, double p,
                               WindowFamily fam = WindowFamily::All);

}  // namespace aplab
