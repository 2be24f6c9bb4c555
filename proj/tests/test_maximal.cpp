#include <doctest.h>

#include <cmath>

#include "aplab/maximal.hpp"
#include "aplab/parallel.hpp"
#include "aplab/rng.hpp"

using namespace aplab;

namespace {

GridFunction gf(std::vector<double> v) {
  const int n = static_cast<int>(v.size());
  return GridFunction(Grid1D{0.0, 1.0, n}, std::move(v));
}

GridFunction random_fn(const Grid1D& g, Rng& rng) {
  GridFunction f(g, 0.0);
  for (int i = 0; i < g.n; ++i) f[i] = rng.unit();
  return f;
}

}  // namespace

TEST_CASE("maximal on constants and the two-sided example") {
  const Grid1D g = Grid1D{0.0, 1.0, 8};
  const GridFunction c(g, -2.5);
  const GridFunction mc = maximal(c);
  for (int i = 0; i < g.n; ++i) CHECK(mc[i] == 2.5);

  // the two-sided optimum beats both one-sided scans
  const GridFunction f = gf({10, 0, 10});
  const GridFunction mf = maximal(f);
  CHECK(mf[1] == doctest::Approx(20.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("maximal of a unit spike has the covering-window closed form") {
  const Grid1D g = Grid1D{0.0, 1.0, 33};
  for (int spike : {0, 7, 16, 32}) {
    GridFunction f(g, 0.0);
    f[spike] = 1.0;
    const GridFunction mf = maximal(f);
    const GridFunction oracle = maximal_oracle(f);
    for (int j = 0; j < g.n; ++j) {
      const double expect = 1.0 / (std::abs(j - spike) + 1);
      CHECK(mf[j] == doctest::Approx(expect).epsilon(1e-9));
      CHECK(oracle[j] == doctest::Approx(expect).epsilon(1e-14));
    }
  }
}

TEST_CASE("maximal dominates |f| exactly and is sublinear") {
  Rng rng(101);
  const Grid1D g = Grid1D::symmetric(4.0, 64);
  for (int t = 0; t < 10; ++t) {
    const GridFunction f = random_fn(g, rng);
    const GridFunction h = random_fn(g, rng);
    const GridFunction mf = maximal(f);
    const GridFunction mh = maximal(h);
    GridFunction sum(g, 0.0);
    for (int i = 0; i < g.n; ++i) sum[i] = f[i] + h[i];
    const GridFunction msum = maximal(sum);
    for (int i = 0; i < g.n; ++i) {
      CHECK(mf[i] >= std::abs(f[i]));  // exact: singleton window
      CHECK(msum[i] <= (mf[i] + mh[i]) * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("fast and oracle agree on random inputs") {
  Rng rng(2024);
  const Grid1D g = Grid1D::symmetric(8.0, 64);
  for (int t = 0; t < 20; ++t) {
    const GridFunction f = random_fn(g, rng);
    const AgreementResult a = oracle_agreement(f, 0.1 + 0.2 * (t % 5));
    CHECK(a.max_rel_gap <= 1e-9);
    CHECK(a.local_bitwise);
  }
}

TEST_CASE("oracle guards its size cap and zero input") {
  const Grid1D big = Grid1D::symmetric(8.0, 512);
  CHECK_THROWS_AS(maximal_oracle(GridFunction(big, 1.0)), SizeError);
  CHECK_THROWS_AS(local_maximal_oracle(GridFunction(big, 1.0), 0.5),
                  SizeError);
  const Grid1D g = Grid1D{0.0, 1.0, 16};
  const GridFunction zero(g, 0.0);
  const GridFunction m = maximal_oracle(zero);
  for (int i = 0; i < g.n; ++i) CHECK(m[i] == 0.0);
}

TEST_CASE("powered maximal collapses at r = 1 and powers indicators") {
  Rng rng(55);
  const Grid1D g = Grid1D::symmetric(4.0, 48);
  const GridFunction f = random_fn(g, rng);
  const GridFunction m1 = maximal_r(f, 1.0);
  const GridFunction mf = maximal(f);
  for (int i = 0; i < g.n; ++i) CHECK(m1[i] == mf[i]);

  // indicators are idempotent under powers
  GridFunction ind(g, 0.0);
  for (int i = 10; i < 20; ++i) ind[i] = 1.0;
  const GridFunction m2 = maximal_r(ind, 2.0);
  const GridFunction mi = maximal(ind);
  for (int i = 0; i < g.n; ++i)
    CHECK(m2[i] == doctest::Approx(std::sqrt(mi[i])).epsilon(1e-9));

  // unit spike at r = 2
  GridFunction spike(g, 0.0);
  spike[24] = 1.0;
  const GridFunction ms = maximal_r(spike, 2.0);
  for (int j = 0; j < g.n; ++j)
    CHECK(ms[j] == doctest::Approx(std::sqrt(1.0 / (std::abs(j - 24) + 1)))
                       .epsilon(1e-9));
}

TEST_CASE("local maximal basics") {
  const GridFunction f = gf({3, 1, 2});
  const GridFunction loc = local_maximal(f, 0.5);
  CHECK(loc[0] == 3.0);  // singleton window dominates [0,1] -> 1 and [0,2] -> 2

  const Grid1D g = Grid1D{0.0, 1.0, 10};
  const GridFunction c(g, 7.0);
  const GridFunction lc = local_maximal(c, 0.3);
  for (int i = 0; i < g.n; ++i) CHECK(lc[i] == 7.0);

  Rng rng(77);
  const GridFunction r = random_fn(g, rng);
  const GridFunction lr = local_maximal(r, 0.9);
  for (int i = 0; i < g.n; ++i) CHECK(lr[i] >= std::abs(r[i]));
  CHECK_THROWS_AS(local_maximal(r, 1.0), ParamError);
}

TEST_CASE("local maximal is non-increasing in lambda") {
  Rng rng(78);
  const Grid1D g = Grid1D::symmetric(4.0, 50);
  const GridFunction f = random_fn(g, rng);
  const GridFunction a = local_maximal(f, 0.2);
  const GridFunction b = local_maximal(f, 0.6);
  const GridFunction c = local_maximal(f, 0.9);
  for (int i = 0; i < g.n; ++i) {
    CHECK(a[i] >= b[i]);
    CHECK(b[i] >= c[i]);
  }
}

TEST_CASE("sharp function basics") {
  const Grid1D g = Grid1D{0.0, 1.0, 6};
  const GridFunction c(g, 3.25);
  const GridFunction sc = sharp_function(c);
  for (int i = 0; i < g.n; ++i) CHECK(sc[i] == 0.0);

  const GridFunction pair = gf({0, 1});
  const GridFunction sp = sharp_function(pair);
  CHECK(sp[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sp[1] == doctest::Approx(0.5).epsilon(1e-15));

  // translation invariance
  Rng rng(31);
  const GridFunction f = random_fn(g, rng);
  GridFunction shifted = f;
  for (int i = 0; i < g.n; ++i) shifted[i] = f[i] + 17.5;
  const GridFunction sf = sharp_function(f);
  const GridFunction ss = sharp_function(shifted);
  for (int i = 0; i < g.n; ++i)
    CHECK(ss[i] == doctest::Approx(sf[i]).epsilon(1e-12));
}

TEST_CASE("sharp matches a brute-force oscillation oracle") {
  Rng rng(32);
  const Grid1D g = Grid1D::symmetric(2.0, 40);
  for (int t = 0; t < 10; ++t) {
    GridFunction f(g, 0.0);
    for (int i = 0; i < g.n; ++i) f[i] = rng.uniform(-1.0, 1.0);
    const GridFunction fast = sharp_function(f);
    for (int x = 0; x < g.n; ++x) {
      double best = 0.0;
      for (int lo = 0; lo <= x; ++lo) {
        for (int hi = x; hi < g.n; ++hi) {
          const int m = hi - lo + 1;
          double mean = 0.0;
          for (int i = lo; i <= hi; ++i) mean += f[i];
          mean /= m;
          double osc = 0.0;
          for (int i = lo; i <= hi; ++i) osc += std::abs(f[i] - mean);
          best = std::max(best, osc / m);
        }
      }
      CHECK(fast[x] == doctest::Approx(best).epsilon(1e-9));
    }
  }
}

TEST_CASE("sharp is dominated by twice the maximal function") {
  Rng rng(33);
  const Grid1D g = Grid1D::symmetric(4.0, 64);
  for (int t = 0; t < 10; ++t) {
    const GridFunction f = random_fn(g, rng);
    const GridFunction s = sharp_function(f);
    const GridFunction m = maximal(f);
    for (int i = 0; i < g.n; ++i)
      CHECK(s[i] <= 2.0 * m[i] * (1.0 + 1e-12) + 1e-300);
  }
}

TEST_CASE("powered sharp collapse and closed form") {
  const GridFunction pair = gf({0, 1});
  const GridFunction sd = sharp_delta(pair, 0.5);
  CHECK(sd[0] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(sd[1] == doctest::Approx(0.25).epsilon(1e-14));

  Rng rng(41);
  const Grid1D g = Grid1D::symmetric(2.0, 30);
  GridFunction f(g, 0.0);
  for (int i = 0; i < g.n; ++i) f[i] = rng.uniform(-1.0, 1.0);
  const GridFunction s1 = sharp_delta(f, 1.0);
  GridFunction absf(g, 0.0);
  for (int i = 0; i < g.n; ++i) absf[i] = std::abs(f[i]);
  const GridFunction sa = sharp_function(absf);
  for (int i = 0; i < g.n; ++i) CHECK(s1[i] == sa[i]);
}

TEST_CASE("truncation caps values and support") {
  const Grid1D g = Grid1D::symmetric(8.0, 64);
  Rng rng(51);
  GridFunction f(g, 0.0);
  for (int i = 0; i < g.n; ++i) f[i] = rng.uniform(-2.0, 2.0);

  const GridFunction big = truncate_level(f, 100.0);
  for (int i = 0; i < g.n; ++i) CHECK(big[i] == std::abs(f[i]));

  const GridFunction tiny = truncate_level(f, 1e-12);
  for (int i = 0; i < g.n; ++i)
    CHECK(tiny[i] <= 1e-12);

  const GridFunction a = truncate_level(f, 1.0);
  const GridFunction b = truncate_level(f, 3.0);
  for (int i = 0; i < g.n; ++i) CHECK(a[i] <= b[i]);
}

TEST_CASE("truncations climb pointwise to the maximal function") {
  Rng rng(52);
  const Grid1D g = Grid1D::symmetric(8.0, 64);
  GridFunction f(g, 0.0);
  for (int i = 0; i < g.n; ++i) f[i] = rng.uniform(0.0, 3.0);
  const GridFunction mf = maximal(f);
  double prev = -1.0;
  for (double level : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    const GridFunction ml = maximal(truncate_level(f, level));
    double total = 0.0;
    for (int i = 0; i < g.n; ++i) {
      CHECK(ml[i] <= mf[i] * (1.0 + 1e-9));
      total += ml[i];
    }
    CHECK(total >= prev - 1e-9);
    prev = total;
  }
  // once the level clears both the peak and the domain radius, exact equality
  const GridFunction mfull = maximal(truncate_level(f, 16.0));
  for (int i = 0; i < g.n; ++i) CHECK(mfull[i] == mf[i]);
}

TEST_CASE("indicator maximal closed form equals the oracle") {
  const Grid1D g = Grid1D::symmetric(4.0, 96);
  Rng rng(61);
  for (int t = 0; t < 25; ++t) {
    const int m = rng.uniform_int(1, g.n);
    const int lo = rng.uniform_int(0, g.n - m);
    const Window q{lo, lo + m - 1};
    const GridFunction closed = indicator_maximal(g, q);
    const GridFunction oracle = maximal_oracle(indicator(g, q));
    for (int i = 0; i < g.n; ++i)
      CHECK(closed[i] == doctest::Approx(oracle[i]).epsilon(1e-14));
  }
}

TEST_CASE("results are bit-identical across thread counts") {
  Rng rng(71);
  const Grid1D g = Grid1D::symmetric(4.0, 80);
  const GridFunction f = random_fn(g, rng);

  set_default_threads(1);
  const GridFunction m1 = maximal(f);
  const GridFunction l1 = local_maximal(f, 0.37);
  const GridFunction s1 = sharp_function(f);
  set_default_threads(4);
  const GridFunction m4 = maximal(f);
  const GridFunction l4 = local_maximal(f, 0.37);
  const GridFunction s4 = sharp_function(f);
  set_default_threads(0);

  for (int i = 0; i < g.n; ++i) {
    CHECK(m1[i] == m4[i]);
    CHECK(l1[i] == l4[i]);
    CHECK(s1[i] == s4[i]);
  }
}
