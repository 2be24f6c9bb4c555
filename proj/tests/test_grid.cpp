#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "aplab/grid.hpp"
#include "aplab/rng.hpp"

using namespace aplab;

namespace {

Grid1D unit_grid(int n) { return Grid1D{0.0, 1.0, n}; }

GridFunction gf(std::vector<double> v, double h = 1.0, double origin = 0.0) {
  const int n = static_cast<int>(v.size());
  return GridFunction(Grid1D{origin, h, n}, std::move(v));
}

GridFunction random_fn(const Grid1D& g, Rng& rng) {
  GridFunction f(g, 0.0);
  for (int i = 0; i < g.n; ++i) f[i] = rng.unit();
  return f;
}

// Reference average by a plain running prefix sum.
double prefix_average(const GridFunction& f, Window q) {
  double s = 0.0;
  for (int i = q.lo; i <= q.hi; ++i) s += std::abs(f[i]);
  return s / q.cells();
}

}  // namespace

TEST_CASE("window_average basics") {
  const GridFunction f = gf({1, 2, 3});
  CHECK(window_average(f, {0, 2}) == doctest::Approx(2.0).epsilon(1e-15));

  const GridFunction c(unit_grid(7), -3.5);
  for (int lo = 0; lo < 7; ++lo)
    for (int hi = lo; hi < 7; ++hi)
      CHECK(window_average(c, {lo, hi}) == doctest::Approx(3.5).epsilon(1e-15));

  const GridFunction spiky = gf({10, 0, 10});
  const double expected = prefix_average(spiky, {0, 2});
  CHECK(expected == doctest::Approx(20.0 / 3.0).epsilon(1e-15));
  CHECK(window_average(spiky, {0, 2}) ==
        doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("window_average lies between min and max of |f|") {
  Rng rng(11);
  const Grid1D g = unit_grid(40);
  for (int t = 0; t < 50; ++t) {
    GridFunction f = random_fn(g, rng);
    const int m = rng.uniform_int(1, g.n);
    const int lo = rng.uniform_int(0, g.n - m);
    const Window q{lo, lo + m - 1};
    double mn = 1e300, mx = 0.0;
    for (int i = q.lo; i <= q.hi; ++i) {
      mn = std::min(mn, std::abs(f[i]));
      mx = std::max(mx, std::abs(f[i]));
    }
    const double avg = window_average(f, q);
    CHECK(avg >= mn - 1e-15);
    CHECK(avg <= mx + 1e-15);
  }
}

TEST_CASE("rearrangement_value selects by the floor rule") {
  const GridFunction f = gf({3, 1, 2});
  CHECK(rearrangement_value(f, {0, 2}, 0.5) == 2.0);
  CHECK(rearrangement_value(f, {0, 2}, 0.9) == 1.0);

  const GridFunction c(unit_grid(9), 4.25);
  CHECK(rearrangement_value(c, {2, 7}, 0.3) == 4.25);

  CHECK_THROWS_AS(rearrangement_value(f, {0, 2}, 0.0), ParamError);
  CHECK_THROWS_AS(rearrangement_value(f, {0, 2}, 1.0), ParamError);
}

TEST_CASE("rearrangement_value realizes the distribution-function infimum") {
  // Brute force the definition: the smallest window value v such that the
  // count of strictly larger values is at most lambda * m.
  Rng rng(5);
  const Grid1D g = unit_grid(24);
  for (int t = 0; t < 100; ++t) {
    GridFunction f = random_fn(g, rng);
    const int m = rng.uniform_int(1, g.n);
    const int lo = rng.uniform_int(0, g.n - m);
    const Window q{lo, lo + m - 1};
    const double lambda = rng.uniform(0.01, 0.99);

    double best = 1e300;
    for (int i = q.lo; i <= q.hi; ++i) {
      const double alpha = std::abs(f[i]);
      int above = 0;
      for (int j = q.lo; j <= q.hi; ++j)
        if (std::abs(f[j]) > alpha) ++above;
      if (above <= lambda * m) best = std::min(best, alpha);
    }
    CHECK(rearrangement_value(f, q, lambda) == best);
  }
}

TEST_CASE("rearrangement_value monotonicity") {
  Rng rng(7);
  const Grid1D g = unit_grid(32);
  for (int t = 0; t < 50; ++t) {
    GridFunction f = random_fn(g, rng);
    const int m = rng.uniform_int(1, g.n);
    const int lo = rng.uniform_int(0, g.n - m);
    const Window q{lo, lo + m - 1};
    const double l1 = rng.uniform(0.05, 0.5);
    const double l2 = rng.uniform(l1, 0.99);
    CHECK(rearrangement_value(f, q, l1) >= rearrangement_value(f, q, l2));

    double mx = 0.0;
    for (int i = q.lo; i <= q.hi; ++i) mx = std::max(mx, std::abs(f[i]));
    CHECK(rearrangement_value(f, q, l1) <= mx);
    CHECK(rearrangement_value(f, q, l1) >= 0.0);

    // pointwise increase of |f| never lowers the selection
    GridFunction bigger = f;
    for (int i = 0; i < g.n; ++i) bigger[i] = f[i] + rng.unit();
    CHECK(rearrangement_value(bigger, q, l1) >=
          rearrangement_value(f, q, l1));
  }
}

TEST_CASE("lp_w_norm basics") {
  const Grid1D g4 = unit_grid(4);
  CHECK(lp_w_norm(GridFunction(g4, 1.0), GridFunction(g4, 1.0), 2.0) ==
        doctest::Approx(2.0).epsilon(1e-15));

  Rng rng(3);
  GridFunction f = random_fn(g4, rng);
  CHECK(lp_w_norm(f, GridFunction(g4, 0.0), 2.0) == 0.0);

  const GridFunction f2 = gf({1, 2});
  const GridFunction w2 = gf({1, 4});
  CHECK(lp_w_norm(f2, w2, 2.0) ==
        doctest::Approx(std::sqrt(17.0)).epsilon(1e-15));
}

TEST_CASE("scale_window rounding rules") {
  const Grid1D g = unit_grid(16);
  const Window q{4, 7};

  CHECK(scale_window(g, q, 1.0).window == q);
  CHECK_FALSE(scale_window(g, q, 1.0).clamped);

  CHECK(scale_window(g, q, 2.0).window == Window{2, 9});
  CHECK(scale_window(g, q, 0.5).window == Window{5, 6});

  // identity after rescale by one
  for (double c : {0.3, 0.7, 1.4, 2.5}) {
    const Window s = scale_window(g, q, c).window;
    CHECK(scale_window(g, s, 1.0).window == s);
  }

  // containment for growth factors, before clamping matters
  const Window mid{6, 9};
  for (double c : {1.0, 1.25, 1.5, 2.0}) {
    const Window s = scale_window(g, mid, c).window;
    CHECK(s.lo <= mid.lo);
    CHECK(s.hi >= mid.hi);
  }

  // clamping is reported
  const ScaleResult clamped = scale_window(g, {0, 7}, 2.0);
  CHECK(clamped.clamped);
  CHECK(clamped.window.lo == 0);
}

TEST_CASE("weighted_measure basics and additivity") {
  const Grid1D g = unit_grid(3);
  CHECK(weighted_measure(GridFunction(g, 1.0), Window{0, 2}) ==
        doctest::Approx(3.0));

  const GridFunction w = gf({1, 0, 4}, 0.5);
  CHECK(weighted_measure(w, CellSet{{0, 2}}) ==
        doctest::Approx(2.5).epsilon(1e-15));
  CHECK(weighted_measure(w, CellSet{{}}) == 0.0);

  Rng rng(13);
  const Grid1D g2 = unit_grid(20);
  GridFunction wr = random_fn(g2, rng);
  CellSet left, right, both;
  for (int i = 0; i < 20; ++i) {
    if (i % 2 == 0)
      left.cells.push_back(i);
    else
      right.cells.push_back(i);
    both.cells.push_back(i);
  }
  CHECK(weighted_measure(wr, both) ==
        doctest::Approx(weighted_measure(wr, left) +
                        weighted_measure(wr, right))
            .epsilon(1e-13));
}

TEST_CASE("heaviest_subset picks the top cells with low-index ties") {
  const Grid1D g = unit_grid(4);
  const GridFunction flat(g, 2.0);
  CHECK(heaviest_subset(flat, {0, 3}, 2).cells == std::vector<int>{0, 1});

  const GridFunction w = gf({4, 1, 1, 1});
  CHECK(heaviest_subset(w, {0, 3}, 1).cells == std::vector<int>{0});
  CHECK(heaviest_subset(w, {0, 3}, 4).cells == std::vector<int>{0, 1, 2, 3});

  CHECK_THROWS_AS(heaviest_subset(w, {0, 3}, 0), ParamError);
  CHECK_THROWS_AS(heaviest_subset(w, {0, 3}, 5), ParamError);
}

TEST_CASE("heaviest_subset maximizes over all k-subsets (exhaustive m<=12)") {
  Rng rng(17);
  const Grid1D g = unit_grid(12);
  for (int t = 0; t < 30; ++t) {
    GridFunction w = random_fn(g, rng);
    const int m = rng.uniform_int(1, 12);
    const Window q{0, m - 1};
    const int k = rng.uniform_int(1, m);
    const double picked = weighted_measure(w, heaviest_subset(w, q, k));

    double best = 0.0;
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      if (__builtin_popcount(mask) != k) continue;
      CellSet s;
      for (int i = 0; i < m; ++i)
        if (mask & (1u << i)) s.cells.push_back(q.lo + i);
      best = std::max(best, weighted_measure(w, s));
    }
    CHECK(picked == doctest::Approx(best).epsilon(1e-13));
  }
}

TEST_CASE("grids reject bad parameters and keep centers off zero") {
  CHECK_THROWS_AS(Grid1D::symmetric(8.0, 511), ParamError);
  CHECK_THROWS_AS(Grid1D::symmetric(-1.0, 512), ParamError);
  const Grid1D g = Grid1D::symmetric(8.0, 512);
  for (int i = 0; i < g.n; ++i) CHECK(g.center(i) != 0.0);
  CHECK(g.measure() == doctest::Approx(16.0));
}

TEST_CASE("pairwise_sum matches plain summation on nonnegative data") {
  Rng rng(23);
  for (int n : {0, 1, 5, 16, 17, 100, 1000}) {
    std::vector<double> v(static_cast<size_t>(n));
    double plain = 0.0;
    for (auto& x : v) {
      x = rng.unit();
      plain += x;
    }
    CHECK(pairwise_sum(v) == doctest::Approx(plain).epsilon(1e-12));
  }
}
