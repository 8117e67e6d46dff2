#pragma once

// Grid-then-zoom maximizer for max-min objectives over boxes of dimension <= 3.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <vector>

#include <Eigen/Dense>

namespace relaybounds::detail {

using Point = std::array<double, 3>;

inline constexpr int kZoomHalfWidth = 4;
inline constexpr int kMaxZoomIterations = 4000;

struct SearchState {
  Point best{};
  double value = -HUGE_VAL;
  double spacing = 0.0;
  long long evaluations = 0;
};

// Problem interface:
//   int dims() const;
//   bool project(Point&) const;             // clamp into the domain, false if empty
//   double eval(const Point&, double floor); // may return any value <= floor once
//                                            // the true value is known to be <= floor
//
// Each pass scans a (2K+1)^d lattice of spacing h centered on the incumbent.
// h halves when the incumbent stays in the lattice interior and is kept when
// it moves to the lattice edge. Stops once h <= stop.
template <class Problem>
void zoom_refine(Problem& p, SearchState& s, double start, double stop) {
  const int d = p.dims();
  const int width = 2 * kZoomHalfWidth + 1;
  int total = 1;
  for (int k = 0; k < d; ++k) total *= width;
  double h = start;
  for (int iter = 0; h > stop && iter < kMaxZoomIterations; ++iter) {
    const Point center = s.best;
    bool on_edge = false;
    for (int idx = 0; idx < total; ++idx) {
      Point q = center;
      int rem = idx;
      int reach = 0;
      for (int k = d - 1; k >= 0; --k) {
        const int off = rem % width - kZoomHalfWidth;
        rem /= width;
        q[static_cast<std::size_t>(k)] += off * h;
        reach = std::max(reach, std::abs(off));
      }
      if (reach == 0) continue;
      if (!p.project(q) || q == center) continue;
      ++s.evaluations;
      const double v = p.eval(q, s.value);
      if (v > s.value) {
        s.value = v;
        s.best = q;
        on_edge = reach == kZoomHalfWidth;
      }
    }
    if (!on_edge) h *= 0.5;
  }
  s.spacing = h;
}

inline constexpr int kMaxSlpIterations = 400;
inline constexpr double kGradientStep = 1e-7;

// max t subject to t - g_i.d <= f_i and lb <= d <= ub, by enumerating
// vertices (k+1 active rows). Returns t and writes d. k <= 3.
inline double solve_small_lp(const std::vector<std::vector<double>>& grads, const std::vector<double>& f,
                             const std::vector<double>& lb, const std::vector<double>& ub, std::vector<double>& d) {
  using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;
  using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;
  const int k = static_cast<int>(lb.size());
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::vector<double> r(static_cast<std::size_t>(k) + 1);
    for (int j = 0; j < k; ++j) r[static_cast<std::size_t>(j)] = -grads[i][static_cast<std::size_t>(j)];
    r[static_cast<std::size_t>(k)] = 1.0;
    rows.push_back(r);
    rhs.push_back(f[i]);
  }
  for (int j = 0; j < k; ++j) {
    std::vector<double> up(static_cast<std::size_t>(k) + 1, 0.0), down(static_cast<std::size_t>(k) + 1, 0.0);
    up[static_cast<std::size_t>(j)] = 1.0;
    down[static_cast<std::size_t>(j)] = -1.0;
    rows.push_back(up);
    rhs.push_back(ub[static_cast<std::size_t>(j)]);
    rows.push_back(down);
    rhs.push_back(-lb[static_cast<std::size_t>(j)]);
  }
  const int n_rows = static_cast<int>(rows.size());
  const int pick = k + 1;
  double best_t = -HUGE_VAL;
  std::vector<int> idx(static_cast<std::size_t>(pick));
  for (int i = 0; i < pick; ++i) idx[static_cast<std::size_t>(i)] = i;
  Mat a(pick, pick);
  Vec b(pick);
  while (pick <= n_rows) {
    for (int r = 0; r < pick; ++r) {
      for (int c = 0; c < pick; ++c) a(r, c) = rows[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])][static_cast<std::size_t>(c)];
      b(r) = rhs[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])];
    }
    const auto lu = a.fullPivLu();
    if (lu.isInvertible()) {
      const Vec z = lu.solve(b);
      bool ok = z(k) > best_t;
      for (int r = 0; ok && r < n_rows; ++r) {
        double lhs = 0.0;
        for (int c = 0; c < pick; ++c) lhs += rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] * z(c);
        const double slack = rhs[static_cast<std::size_t>(r)];
        ok = lhs <= slack + 1e-12 * (1.0 + std::abs(slack));
      }
      if (ok) {
        best_t = z(k);
        for (int j = 0; j < k; ++j) d[static_cast<std::size_t>(j)] = z(j);
      }
    }
    int pos = pick - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n_rows - pick + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int r = pos + 1; r < pick; ++r) idx[static_cast<std::size_t>(r)] = idx[static_cast<std::size_t>(r - 1)] + 1;
  }
  return best_t;
}

// Trust-region sequential linear programming on min_i f_i. Problem additionally provides
//   std::vector<double> cut_values(const Point&);
//   void bounds(const Point&, int coord, double& lo, double& hi) const;
// Returns true if the incumbent improved.
template <class Problem>
bool slp_refine(Problem& p, SearchState& s, double radius, double stop) {
  const int k = p.dims();
  const double max_radius = radius;
  bool improved = false;
  auto min_of = [](const std::vector<double>& v) {
    double m = HUGE_VAL;
    for (double x : v) m = std::min(m, x);
    return m;
  };
  for (int iter = 0; iter < kMaxSlpIterations && radius > stop; ++iter) {
    const std::vector<double> f = p.cut_values(s.best);
    ++s.evaluations;
    const double fmin = min_of(f);
    const std::size_t n_cuts = f.size();
    std::vector<std::vector<double>> g(n_cuts, std::vector<double>(static_cast<std::size_t>(k), 0.0));
    std::vector<char> usable(n_cuts, 1);
    for (int j = 0; j < k; ++j) {
      Point xp = s.best, xm = s.best;
      xp[static_cast<std::size_t>(j)] += kGradientStep;
      xm[static_cast<std::size_t>(j)] -= kGradientStep;
      if (!p.project(xp)) xp = s.best;
      if (!p.project(xm)) xm = s.best;
      const double span = xp[static_cast<std::size_t>(j)] - xm[static_cast<std::size_t>(j)];
      if (!(span > 0.0)) continue;
      const auto fp = p.cut_values(xp);
      const auto fm = p.cut_values(xm);
      s.evaluations += 2;
      for (std::size_t i = 0; i < n_cuts; ++i) {
        const double gi = (fp[i] - fm[i]) / span;
        if (std::isfinite(gi)) {
          g[i][static_cast<std::size_t>(j)] = gi;
        } else {
          usable[i] = 0;
        }
      }
    }
    std::vector<double> lb(static_cast<std::size_t>(k)), ub(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
      double lo, hi;
      p.bounds(s.best, j, lo, hi);
      const double x = s.best[static_cast<std::size_t>(j)];
      lb[static_cast<std::size_t>(j)] = std::min(0.0, std::max(-radius, lo - x));
      ub[static_cast<std::size_t>(j)] = std::max(0.0, std::min(radius, hi - x));
    }
    // A cut can only be active inside the box if its linear model can reach the current min.
    std::size_t arg = 0;
    for (std::size_t i = 1; i < n_cuts; ++i) {
      if (f[i] < f[arg]) arg = i;
    }
    auto reach = [&](std::size_t i) {
      double r = 0.0;
      for (int j = 0; j < k; ++j) r += std::abs(g[i][static_cast<std::size_t>(j)]) * radius;
      return r;
    };
    std::vector<std::vector<double>> lg;
    std::vector<double> lf;
    for (std::size_t i = 0; i < n_cuts; ++i) {
      if (!usable[i] || !std::isfinite(f[i])) continue;
      if (f[i] - reach(i) > fmin + reach(arg)) continue;
      lg.push_back(g[i]);
      lf.push_back(f[i]);
    }
    if (lf.empty()) break;
    std::vector<double> d(static_cast<std::size_t>(k), 0.0);
    const double t = solve_small_lp(lg, lf, lb, ub, d);
    const double predicted = t - fmin;
    if (!(predicted > 0.0)) {
      radius *= 0.5;
      continue;
    }
    Point trial = s.best;
    for (int j = 0; j < k; ++j) trial[static_cast<std::size_t>(j)] += d[static_cast<std::size_t>(j)];
    if (!p.project(trial)) {
      radius *= 0.5;
      continue;
    }
    ++s.evaluations;
    const double v = min_of(p.cut_values(trial));
    if (v > s.value) {
      const double actual = v - s.value;
      s.value = v;
      s.best = trial;
      improved = true;
      if (actual >= 0.5 * predicted) radius = std::min(2.0 * radius, max_radius);
    } else {
      radius *= 0.5;
    }
  }
  return improved;
}

// Grid coordinates lo + i*step clamped into [lo, hi_grid]; always nonempty.
inline std::vector<double> grid_axis(double origin, double step, double lo, double hi_grid) {
  std::vector<double> out;
  if (hi_grid < lo) {
    out.push_back(lo);
    return out;
  }
  const auto first = static_cast<long long>(std::ceil((lo - origin) / step - 1e-9));
  const auto last = static_cast<long long>(std::floor((hi_grid - origin) / step + 1e-9));
  for (long long i = first; i <= last; ++i) {
    double x = origin + static_cast<double>(i) * step;
    x = std::min(std::max(x, lo), hi_grid);
    if (out.empty() || x > out.back()) out.push_back(x);
  }
  if (out.empty()) out.push_back(lo);
  return out;
}

// Points hi - step * 2^-k, k = 1, 2, ..., strictly above hi - step and at most
// cap. Samples the approach to an excluded right endpoint.
inline void append_endpoint_ladder(std::vector<double>& axis, double step, double hi, double cap) {
  for (double gap = 0.5 * step; hi - gap <= cap; gap *= 0.5) {
    const double x = hi - gap;
    if (axis.empty() || x > axis.back()) axis.push_back(x);
    if (x == cap) break;
  }
  if (cap > axis.back()) axis.push_back(cap);
}

}  // namespace relaybounds::detail
