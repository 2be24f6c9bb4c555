#include "aplab/maximal.hpp"

#include <algorithm>
#include <deque>

#include "aplab/parallel.hpp"

namespace aplab {

namespace {

std::vector<double> abs_values(const GridFunction& f) {
  std::vector<double> a(static_cast<size_t>(f.size()));
  for (int i = 0; i < f.size(); ++i) a[static_cast<size_t>(i)] = std::abs(f[i]);
  return a;
}

double peak(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, v);
  return m;
}

// Largest window average of a through x, by bisection on the level.
double max_average_through(const std::vector<double>& a, int x, double top) {
  const int n = static_cast<int>(a.size());
  auto feasible = [&](double t) {
    double left = 0.0, s = 0.0;
    for (int i = x - 1; i >= 0; --i) {
      s += a[static_cast<size_t>(i)] - t;
      left = std::max(left, s);
    }
    double right = 0.0;
    s = 0.0;
    for (int i = x + 1; i < n; ++i) {
      s += a[static_cast<size_t>(i)] - t;
      right = std::max(right, s);
    }
    return left + (a[static_cast<size_t>(x)] - t) + right >= 0.0;
  };

  double lo = 0.0, hi = top;
  if (feasible(hi)) return hi;
  for (int it = 0; it < kMaximalMaxIter && hi - lo > kMaximalStopTol * lo; ++it) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  // The singleton window through x is always admissible.
  return std::max(lo, a[static_cast<size_t>(x)]);
}

// Fenwick tree over compressed value ranks; counts only.
class RankCounts {
 public:
  explicit RankCounts(int ranks) : tree_(static_cast<size_t>(ranks) + 1, 0) {}

  void add(int rank, int delta) {
    for (int i = rank + 1; i < static_cast<int>(tree_.size()); i += i & -i)
      tree_[static_cast<size_t>(i)] += delta;
  }

  // Rank of the k-th smallest stored value (k is 1-based).
  int select(int k) const {
    int pos = 0;
    int bit = 1;
    while (2 * bit < static_cast<int>(tree_.size())) bit *= 2;
    for (; bit > 0; bit /= 2) {
      const int next = pos + bit;
      if (next < static_cast<int>(tree_.size()) &&
          tree_[static_cast<size_t>(next)] < k) {
        pos = next;
        k -= tree_[static_cast<size_t>(next)];
      }
    }
    return pos;  // 0-based rank
  }

  void clear() { std::fill(tree_.begin(), tree_.end(), 0); }

 private:
  std::vector<int> tree_;
};

// Fenwick tree with per-rank counts and value sums, for oscillation queries.
class RankCountSums {
 public:
  explicit RankCountSums(int ranks)
      : count_(static_cast<size_t>(ranks) + 1, 0),
        sum_(static_cast<size_t>(ranks) + 1, 0.0) {}

  void add(int rank, int dcount, double dsum) {
    for (int i = rank + 1; i < static_cast<int>(count_.size()); i += i & -i) {
      count_[static_cast<size_t>(i)] += dcount;
      sum_[static_cast<size_t>(i)] += dsum;
    }
  }

  // Count and sum of stored values with rank <= r.
  void prefix(int r, int& count, double& sum) const {
    count = 0;
    sum = 0.0;
    for (int i = r + 1; i > 0; i -= i & -i) {
      count += count_[static_cast<size_t>(i)];
      sum += sum_[static_cast<size_t>(i)];
    }
  }

  void clear() {
    std::fill(count_.begin(), count_.end(), 0);
    std::fill(sum_.begin(), sum_.end(), 0.0);
  }

 private:
  std::vector<int> count_;
  std::vector<double> sum_;
};

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

int rank_of(const std::vector<double>& sorted, double v) {
  return static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), v) -
                          sorted.begin());
}

// out[x] = max(out[x], max_{j in [x-m+1, x]} win[j]) via a monotone deque.
void propagate_window_values(const std::vector<double>& win, int m,
                             std::vector<double>& out) {
  const int n = static_cast<int>(out.size());
  const int starts = n - m + 1;
  std::deque<int> dq;
  for (int x = 0; x < n; ++x) {
    const int j = x;  // window starting at x enters when valid
    if (j < starts) {
      while (!dq.empty() && win[static_cast<size_t>(dq.back())] <=
                                win[static_cast<size_t>(j)])
        dq.pop_back();
      dq.push_back(j);
    }
    while (!dq.empty() && dq.front() < x - m + 1) dq.pop_front();
    if (!dq.empty())
      out[static_cast<size_t>(x)] =
          std::max(out[static_cast<size_t>(x)],
                   win[static_cast<size_t>(dq.front())]);
  }
}

}  // namespace

GridFunction maximal(const GridFunction& f) {
  const auto a = abs_values(f);
  const double top = peak(a);
  GridFunction out(f.grid, 0.0);
  if (top == 0.0) return out;
  parallel_for(f.size(), [&](int x) {
    out[x] = max_average_through(a, x, top);
  });
  return out;
}

double maximal_at(const GridFunction& f, int cell) {
  if (cell < 0 || cell >= f.size()) throw ParamError("cell outside grid");
  const auto a = abs_values(f);
  const double top = peak(a);
  if (top == 0.0) return 0.0;
  return max_average_through(a, cell, top);
}

GridFunction maximal_oracle(const GridFunction& f, int cap) {
  const int n = f.size();
  if (n > cap)
    throw SizeError("maximal_oracle: " + std::to_string(n) +
                    " cells exceeds cap " + std::to_string(cap));
  const auto a = abs_values(f);
  PrefixSums ps(a);
  GridFunction out(f.grid, 0.0);
  for (int lo = 0; lo < n; ++lo) {
    for (int hi = lo; hi < n; ++hi) {
      const double avg = ps.range(lo, hi) / (hi - lo + 1);
      for (int x = lo; x <= hi; ++x) out[x] = std::max(out[x], avg);
    }
  }
  return out;
}

GridFunction maximal_r(const GridFunction& f, double r) {
  if (!(r > 0.0)) throw ParamError("maximal power must be positive");
  GridFunction powered(f.grid, 0.0);
  for (int i = 0; i < f.size(); ++i) powered[i] = std::pow(std::abs(f[i]), r);
  GridFunction m = maximal(powered);
  for (int i = 0; i < m.size(); ++i) m[i] = std::pow(m[i], 1.0 / r);
  return m;
}

GridFunction indicator(const Grid1D& g, Window q) {
  require_window(g, q);
  GridFunction f(g, 0.0);
  for (int i = q.lo; i <= q.hi; ++i) f[i] = 1.0;
  return f;
}

GridFunction indicator_maximal(const Grid1D& g, Window q) {
  require_window(g, q);
  GridFunction out(g, 0.0);
  const double m = q.cells();
  for (int x = 0; x < g.n; ++x) {
    const int reach = std::max(x, q.hi) - std::min(x, q.lo) + 1;
    out[x] = m / reach;
  }
  return out;
}

GridFunction local_maximal(const GridFunction& f, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw ParamError("local maximal parameter must lie in (0,1)");
  const int n = f.size();
  const auto a = abs_values(f);
  const auto ranks = sorted_unique(a);
  std::vector<int> cell_rank(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    cell_rank[static_cast<size_t>(i)] = rank_of(ranks, a[static_cast<size_t>(i)]);

  GridFunction out(f.grid, 0.0);
  const int chunks = plan_chunks(n);
  std::vector<std::vector<double>> acc(
      static_cast<size_t>(chunks),
      std::vector<double>(static_cast<size_t>(n), 0.0));

  parallel_chunks(n, chunks, [&](int chunk, int m_begin, int m_end) {
    RankCounts tree(static_cast<int>(ranks.size()));
    std::vector<double> win;
    auto& local = acc[static_cast<size_t>(chunk)];
    for (int mi = m_begin; mi < m_end; ++mi) {
      const int m = mi + 1;  // window length
      const int k = static_cast<int>(std::floor(lambda * m));
      const int target = m - k;  // (k+1)-th largest == (m-k)-th smallest
      const int starts = n - m + 1;
      tree.clear();
      for (int i = 0; i < m; ++i) tree.add(cell_rank[static_cast<size_t>(i)], 1);
      win.assign(static_cast<size_t>(starts), 0.0);
      win[0] = ranks[static_cast<size_t>(tree.select(target))];
      for (int j = 1; j < starts; ++j) {
        tree.add(cell_rank[static_cast<size_t>(j - 1)], -1);
        tree.add(cell_rank[static_cast<size_t>(j + m - 1)], 1);
        win[static_cast<size_t>(j)] =
            ranks[static_cast<size_t>(tree.select(target))];
      }
      propagate_window_values(win, m, local);
    }
  });

  for (const auto& local : acc)
    for (int x = 0; x < n; ++x)
      out[x] = std::max(out[x], local[static_cast<size_t>(x)]);
  return out;
}

GridFunction local_maximal_oracle(const GridFunction& f, double lambda,
                                  int cap) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw ParamError("local maximal parameter must lie in (0,1)");
  const int n = f.size();
  if (n > cap)
    throw SizeError("local_maximal_oracle: " + std::to_string(n) +
                    " cells exceeds cap " + std::to_string(cap));
  const auto a = abs_values(f);
  GridFunction out(f.grid, 0.0);
  std::vector<double> v;
  for (int lo = 0; lo < n; ++lo) {
    for (int hi = lo; hi < n; ++hi) {
      const int m = hi - lo + 1;
      const int k = static_cast<int>(std::floor(lambda * m));
      v.assign(a.begin() + lo, a.begin() + hi + 1);
      std::nth_element(v.begin(), v.begin() + k, v.end(), std::greater<>());
      const double val = v[static_cast<size_t>(k)];
      for (int x = lo; x <= hi; ++x) out[x] = std::max(out[x], val);
    }
  }
  return out;
}

GridFunction sharp_function(const GridFunction& f) {
  const int n = f.size();
  const auto ranks = sorted_unique(f.values);
  std::vector<int> cell_rank(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    cell_rank[static_cast<size_t>(i)] = rank_of(ranks, f[i]);
  PrefixSums ps(f.values);

  // next_diff[i]: first index past i holding a different value; windows that
  // never cross it are constant and have exactly zero oscillation.
  std::vector<int> next_diff(static_cast<size_t>(n), n);
  for (int i = n - 2; i >= 0; --i)
    next_diff[static_cast<size_t>(i)] =
        f[i] == f[i + 1] ? next_diff[static_cast<size_t>(i) + 1] : i + 1;

  GridFunction out(f.grid, 0.0);
  const int chunks = plan_chunks(n);
  std::vector<std::vector<double>> acc(
      static_cast<size_t>(chunks),
      std::vector<double>(static_cast<size_t>(n), 0.0));

  parallel_chunks(n, chunks, [&](int chunk, int m_begin, int m_end) {
    RankCountSums tree(static_cast<int>(ranks.size()));
    std::vector<double> win;
    auto& local = acc[static_cast<size_t>(chunk)];
    for (int mi = m_begin; mi < m_end; ++mi) {
      const int m = mi + 1;
      const int starts = n - m + 1;
      tree.clear();
      for (int i = 0; i < m; ++i)
        tree.add(cell_rank[static_cast<size_t>(i)], 1, f[i]);
      win.assign(static_cast<size_t>(starts), 0.0);
      for (int j = 0; j < starts; ++j) {
        if (j > 0) {
          tree.add(cell_rank[static_cast<size_t>(j - 1)], -1, -f[j - 1]);
          tree.add(cell_rank[static_cast<size_t>(j + m - 1)], 1, f[j + m - 1]);
        }
        if (next_diff[static_cast<size_t>(j)] >= j + m) {
          win[static_cast<size_t>(j)] = 0.0;
          continue;
        }
        const double total = ps.range(j, j + m - 1);
        const double mean = total / m;
        // Mean absolute deviation, split at the mean; ties at the mean
        // contribute zero either way.
        const int r = static_cast<int>(std::upper_bound(ranks.begin(),
                                                        ranks.end(), mean) -
                                       ranks.begin()) -
                      1;
        int below_count = 0;
        double below_sum = 0.0;
        if (r >= 0) tree.prefix(r, below_count, below_sum);
        const double above_sum = total - below_sum;
        const int above_count = m - below_count;
        win[static_cast<size_t>(j)] =
            ((above_sum - mean * above_count) +
             (mean * below_count - below_sum)) /
            m;
      }
      propagate_window_values(win, m, local);
    }
  });

  for (const auto& local : acc)
    for (int x = 0; x < n; ++x)
      out[x] = std::max(out[x], local[static_cast<size_t>(x)]);
  return out;
}

GridFunction sharp_delta(const GridFunction& f, double delta) {
  if (!(delta > 0.0 && delta <= 1.0))
    throw ParamError("sharp power must lie in (0,1]");
  GridFunction powered(f.grid, 0.0);
  for (int i = 0; i < f.size(); ++i)
    powered[i] = std::pow(std::abs(f[i]), delta);
  GridFunction s = sharp_function(powered);
  for (int i = 0; i < s.size(); ++i) s[i] = std::pow(s[i], 1.0 / delta);
  return s;
}

GridFunction truncate_level(const GridFunction& f, double level) {
  if (!(level > 0.0)) throw ParamError("truncation level must be positive");
  GridFunction out(f.grid, 0.0);
  for (int i = 0; i < f.size(); ++i) {
    if (std::abs(f.grid.center(i)) <= level)
      out[i] = std::min(std::abs(f[i]), level);
  }
  return out;
}

GridFunction mask_beyond(const GridFunction& f, double radius) {
  GridFunction out(f.grid, 0.0);
  for (int i = 0; i < f.size(); ++i) {
    if (std::abs(f.grid.center(i)) > radius) out[i] = f[i];
  }
  return out;
}

AgreementResult oracle_agreement(const GridFunction& f, double lambda) {
  AgreementResult res;
  const GridFunction fast = maximal(f);
  const GridFunction slow = maximal_oracle(f);
  for (int i = 0; i < f.size(); ++i) {
    const double scale = std::max({std::abs(fast[i]), std::abs(slow[i]), 1e-300});
    const double gap = std::abs(fast[i] - slow[i]) / scale;
    if (gap > res.max_rel_gap) {
      res.max_rel_gap = gap;
      res.worst_cell = i;
    }
  }
  const GridFunction lfast = local_maximal(f, lambda);
  const GridFunction lslow = local_maximal_oracle(f, lambda);
  for (int i = 0; i < f.size(); ++i) {
    if (lfast[i] != lslow[i]) {
      res.local_bitwise = false;
      res.worst_cell = i;
      break;
    }
  }
  return res;
}

}  // namespace aplab
