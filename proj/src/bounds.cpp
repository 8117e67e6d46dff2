#include "relaybounds/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <thread>

#include "maxmin.hpp"
#include "relaybounds/errors.hpp"

namespace relaybounds {

namespace {

using detail::Point;
using detail::SearchState;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPosInf = std::numeric_limits<double>::infinity();

// Refinement stops once the zoom spacing reaches refine_tol / kSpacingRatio.
constexpr double kSpacingRatio = 1e3;

// Alternations of linearized steps and lattice zooms after the grid scan.
constexpr int kRefineRounds = 8;

double half_log(LogBase base, double x) { return x > 0.0 ? 0.5 * log_in(base, x) : kNegInf; }

// Right end of the half-open correlation ranges: sups are approached, not attained.
double rho_cap(const OptimizerConfig& cfg) { return 1.0 - cfg.refine_tol; }

double intra_lower(int relays) { return relays >= 2 ? std::max(-1.0, -1.0 / (relays - 1.0)) : 0.0; }

std::vector<Cut> minimizers(const std::vector<Cut>& cuts, const std::vector<double>& values, double tol) {
  const double lo = *std::min_element(values.begin(), values.end());
  std::vector<Cut> out;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    if (values[i] <= lo + tol) out.push_back(cuts[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// min over cuts of the two-layer objective; the layer-1 part is cached per
// rho1, the layer-2 part per rho2 (zero mode) or per point (joint mode).
class LayeredProblem {
 public:
  LayeredProblem(const NetworkParams& net, ObjectiveVariant variant, const OptimizerConfig& cfg)
      : net_(net), variant_(variant), cfg_(cfg), joint_(cfg.rho12_mode == Rho12Mode::Joint) {
    for (const Cut& c : enumerate_cuts(net.relays)) {
      if (variant == ObjectiveVariant::V2 && c.m == net.relays) continue;
      cuts_.push_back(c);
    }
    const std::size_t k = cuts_.size();
    head_.assign(k, 0.0);
    layer2_.assign(k, 0.0);
    dynamic_.assign(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
      const Cut& c = cuts_[i];
      dynamic_[i] = joint_ && c.m > 0 && c.n < net.relays;
      head_const_.push_back(half_log(cfg.log_base, 1.0 + (net.relays - c.n) * net.r1) +
                            (variant == ObjectiveVariant::V2
                                 ? 0.5 * v2_constant(net.relays, c.m, cfg.log_base, cfg.v2_constant)
                                 : 0.0));
    }
    rho_lo_ = intra_lower(net.relays);
    rho_hi_ = net.relays >= 2 ? rho_cap(cfg) : 0.0;
  }

  int dims() const { return joint_ ? 3 : 2; }
  double rho_lo() const { return rho_lo_; }
  double rho_hi() const { return rho_hi_; }
  const std::vector<Cut>& cuts() const { return cuts_; }

  ZetaInterval rho12_range(double rho1, double rho2) const {
    const ZetaInterval z = zeta_interval(net_.relays, rho1, rho2);
    const ZetaInterval p = psd_rho12_interval(net_.relays, rho1, rho2);
    return {std::max(z.lo, p.lo), std::min(z.hi, p.hi)};
  }

  bool project(Point& q) const {
    q[0] = std::clamp(q[0], rho_lo_, rho_hi_);
    q[1] = std::clamp(q[1], rho_lo_, rho_hi_);
    if (!joint_) {
      q[2] = 0.0;
      return true;
    }
    const ZetaInterval r = rho12_range(q[0], q[1]);
    if (r.empty()) return false;
    q[2] = std::clamp(q[2], r.lo, r.hi);
    return true;
  }

  double eval(const Point& q, double floor) {
    load(q[0], q[1]);
    double running = kPosInf;
    const std::size_t k = cuts_.size();
    for (std::size_t j = 0; j <= k; ++j) {
      const std::size_t i = j == 0 ? hint_ : j - 1;
      if (j > 0 && i == hint_) continue;
      const double v = cut_value(i, q[2]);
      if (v < running) {
        running = v;
        hint_ = i;
      }
      if (running <= floor) break;
    }
    return running;
  }

  void bounds(const Point& q, int coord, double& lo, double& hi) const {
    if (coord < 2) {
      lo = rho_lo_;
      hi = rho_hi_;
      return;
    }
    const ZetaInterval r = joint_ ? rho12_range(q[0], q[1]) : ZetaInterval{0.0, 0.0};
    lo = r.lo;
    hi = r.hi;
  }

  std::vector<double> cut_values(const Point& q) {
    load(q[0], q[1]);
    std::vector<double> out(cuts_.size());
    for (std::size_t i = 0; i < cuts_.size(); ++i) out[i] = cut_value(i, q[2]);
    return out;
  }

 private:
  void load(double rho1, double rho2) {
    if (rho1 != cur_rho1_) {
      cur_rho1_ = rho1;
      const int N = net_.relays;
      std::vector<double> l1(static_cast<std::size_t>(N) + 1);
      for (int n = 0; n <= N; ++n) {
        double psi_n;
        try {
          psi_n = psi(N, n, rho1);
        } catch (const DegenerateDenominator&) {
          psi_n = -kPosInf;
        }
        l1[static_cast<std::size_t>(n)] = half_log(cfg_.log_base, 1.0 + psi_n * net_.r2);
      }
      for (std::size_t i = 0; i < cuts_.size(); ++i) {
        const Cut& c = cuts_[i];
        const double mult = variant_ == ObjectiveVariant::V1 ? N - c.m : 1.0;
        head_[i] = head_const_[i] + (mult == 0.0 ? 0.0 : mult * l1[static_cast<std::size_t>(c.n)]);
      }
      cur_rho2_ = std::numeric_limits<double>::quiet_NaN();
    }
    if (!(rho2 == cur_rho2_)) {
      cur_rho2_ = rho2;
      const int N = net_.relays;
      for (std::size_t i = 0; i < cuts_.size(); ++i) {
        if (dynamic_[i]) continue;
        const Cut& c = cuts_[i];
        // rho12 does not enter when m = 0 or n = N; in zero mode phi reduces to psi(m, rho2).
        double form;
        if (joint_) {
          form = evaluate_phi(N, c, {cur_rho1_, rho2, 0.0});
        } else {
          try {
            form = psi(N, c.m, rho2);
          } catch (const DegenerateDenominator&) {
            form = evaluate_phi(N, c, {cur_rho1_, rho2, 0.0});
          }
        }
        layer2_[i] = half_log(cfg_.log_base, 1.0 + form * net_.r3);
      }
    }
  }

  double cut_value(std::size_t i, double rho12) const {
    double tail = layer2_[i];
    if (dynamic_[i]) {
      const double form = evaluate_phi(net_.relays, cuts_[i], {cur_rho1_, cur_rho2_, rho12});
      tail = half_log(cfg_.log_base, 1.0 + form * net_.r3);
    }
    return head_[i] + tail;
  }

  NetworkParams net_;
  ObjectiveVariant variant_;
  OptimizerConfig cfg_;
  bool joint_;
  std::vector<Cut> cuts_;
  std::vector<double> head_const_;
  std::vector<double> head_;
  std::vector<double> layer2_;
  std::vector<char> dynamic_;
  double rho_lo_ = 0.0;
  double rho_hi_ = 0.0;
  double cur_rho1_ = std::numeric_limits<double>::quiet_NaN();
  double cur_rho2_ = std::numeric_limits<double>::quiet_NaN();
  std::size_t hint_ = 0;
};

// Scans rows [first, last) of the rho1 axis; the best point is the first
// maximum in lexicographic (rho1, rho2, rho12) order.
SearchState scan_rows(LayeredProblem p, const std::vector<double>& axis1, const std::vector<double>& axis2,
                      std::size_t first, std::size_t last, double step) {
  SearchState s;
  for (std::size_t a = first; a < last; ++a) {
    for (double rho2 : axis2) {
      if (p.dims() == 2) {
        const Point q{axis1[a], rho2, 0.0};
        ++s.evaluations;
        const double v = p.eval(q, s.value);
        if (v > s.value) {
          s.value = v;
          s.best = q;
        }
        continue;
      }
      const ZetaInterval r = p.rho12_range(axis1[a], rho2);
      if (r.empty()) continue;
      for (double rho12 : detail::grid_axis(0.0, step, r.lo, r.hi)) {
        const Point q{axis1[a], rho2, rho12};
        ++s.evaluations;
        const double v = p.eval(q, s.value);
        if (v > s.value) {
          s.value = v;
          s.best = q;
        }
      }
    }
  }
  return s;
}

SearchState grid_scan(const LayeredProblem& p, const OptimizerConfig& cfg) {
  const double grid_hi = p.rho_hi() > p.rho_lo() ? std::min(p.rho_hi(), 1.0 - cfg.grid_step) : p.rho_lo();
  auto axis = detail::grid_axis(-1.0, cfg.grid_step, p.rho_lo(), grid_hi);
  if (p.rho_hi() > p.rho_lo()) detail::append_endpoint_ladder(axis, cfg.grid_step, 1.0, p.rho_hi());
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), axis.size());
  if (threads <= 1) return scan_rows(p, axis, axis, 0, axis.size(), cfg.grid_step);

  std::vector<SearchState> parts(threads);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t first = axis.size() * t / threads;
    const std::size_t last = axis.size() * (t + 1) / threads;
    pool.emplace_back([&, t, first, last] { parts[t] = scan_rows(p, axis, axis, first, last, cfg.grid_step); });
  }
  for (auto& th : pool) th.join();
  SearchState s;
  for (const auto& part : parts) {
    s.evaluations += part.evaluations;
    if (part.value > s.value) {
      s.value = part.value;
      s.best = part.best;
    }
  }
  return s;
}

BoundVariant lemma_variant(ObjectiveVariant v) {
  return v == ObjectiveVariant::V1 ? BoundVariant::Lemma2V1 : BoundVariant::Lemma2V2;
}

BoundResult layered_single(const NetworkParams& net, ObjectiveVariant variant, const OptimizerConfig& cfg) {
  LayeredProblem p(net, variant, cfg);
  SearchState s = grid_scan(p, cfg);
  const double stop = cfg.refine_tol / kSpacingRatio;
  zoom_refine(p, s, 0.5 * cfg.grid_step, stop);
  for (int round = 0; round < kRefineRounds && detail::slp_refine(p, s, cfg.grid_step, stop); ++round) {
    zoom_refine(p, s, 0.5 * cfg.grid_step, stop);
  }

  BoundResult r;
  r.variant = lemma_variant(variant);
  r.achieved_by = r.variant;
  r.log_base = cfg.log_base;
  const auto values = p.cut_values(s.best);
  r.value = *std::min_element(values.begin(), values.end());
  r.minimizer_pairs = minimizers(p.cuts(), values, cfg.refine_tol);
  r.argmax_corr = {s.best[0], s.best[1], s.best[2]};
  r.meta = {cfg.grid_step, cfg.refine_tol, s.spacing, s.evaluations, cfg.rho12_mode};
  return r;
}

// One-dimensional max of f over [lo, hi]: grid on [lo, grid_hi] then zoom.
struct Line {
  std::function<double(double)> f;
  double lo;
  double hi;
  int dims() const { return 1; }
  bool project(Point& q) const {
    q[0] = std::clamp(q[0], lo, hi);
    return true;
  }
  double eval(const Point& q, double) const { return f(q[0]); }
};

SearchState maximize_line(const Line& line, double origin, double grid_hi, const OptimizerConfig& cfg) {
  SearchState s;
  auto axis = detail::grid_axis(origin, cfg.grid_step, line.lo, std::min(grid_hi, line.hi));
  detail::append_endpoint_ladder(axis, cfg.grid_step, 1.0, line.hi);
  for (double x : axis) {
    ++s.evaluations;
    const double v = line.f(x);
    if (v > s.value) {
      s.value = v;
      s.best = {x, 0.0, 0.0};
    }
  }
  Line copy = line;
  zoom_refine(copy, s, 0.5 * cfg.grid_step, cfg.refine_tol / kSpacingRatio);
  return s;
}

// Max-min over cuts n = 0..N of the diamond objective at one rho.
struct DiamondProblem {
  int relays;
  double r1;
  double r2;
  LogBase base;
  double hi;
  int dims() const { return 1; }
  bool project(Point& q) const {
    q[0] = std::clamp(q[0], 0.0, hi);
    return true;
  }
  double value(int n, double rho) const {
    return half_log(base, 1.0 + (relays - n) * r1) + half_log(base, 1.0 + psi(relays, n, rho) * r2);
  }
  double eval(const Point& q, double floor) const {
    double running = kPosInf;
    for (int n = relays; n >= 0 && running > floor; --n) running = std::min(running, value(n, q[0]));
    return running;
  }
};

double psi_or_neg_inf(int relays, int n, double rho) {
  try {
    return psi(relays, n, rho);
  } catch (const DegenerateDenominator&) {
    return kNegInf;
  }
}

double pair_v1(const NetworkParams& net, const Cut& c, double s1, double s2, LogBase base) {
  const double mult = net.relays - c.m;
  return half_log(base, 1.0 + (net.relays - c.n) * net.r1) + (mult == 0.0 ? 0.0 : mult * s1) + s2;
}

double pair_v2(const NetworkParams& net, const Cut& c, double s1, double s2, const OptimizerConfig& cfg) {
  return half_log(cfg.log_base, 1.0 + (net.relays - c.n) * net.r1) +
         0.5 * v2_constant(net.relays, c.m, cfg.log_base, cfg.v2_constant) + s1 + s2;
}

}  // namespace

std::string to_string(BoundVariant v) {
  switch (v) {
    case BoundVariant::ND: return "nd";
    case BoundVariant::Lemma2V1: return "lemma2_v1";
    case BoundVariant::Lemma2V2: return "lemma2_v2";
    case BoundVariant::Lemma2Min: return "lemma2_min";
    case BoundVariant::Theorem2V1: return "theorem2_v1";
    case BoundVariant::Theorem2V2: return "theorem2_v2";
    case BoundVariant::SpecialMu: return "special_mu";
  }
  return "unknown";
}

std::string to_string(LogBase b) { return b == LogBase::Two ? "2" : "e"; }

std::string to_string(Rho12Mode m) { return m == Rho12Mode::Zero ? "zero" : "joint"; }

void OptimizerConfig::validate() const {
  if (!(refine_tol > 0.0)) throw InvalidArgument("refine_tol must be > 0");
  if (!(grid_step >= refine_tol)) throw InvalidArgument("grid_step must be >= refine_tol");
  if (!(grid_step <= 0.5)) throw InvalidArgument("grid_step must be <= 0.5");
  if (threads < 1) throw InvalidArgument("threads must be >= 1");
}

std::vector<Cut> enumerate_cuts(int relays) {
  if (relays < 1) throw InvalidArgument("relays must be >= 1, got " + std::to_string(relays));
  std::vector<Cut> out{{0, 0}};
  for (int n = 1; n <= relays; ++n) {
    for (int m = 0; m <= relays; ++m) out.push_back({n, m});
  }
  return out;
}

double log_in(LogBase base, double x) { return base == LogBase::Two ? std::log2(x) : std::log(x); }

double v2_constant(int relays, int m, LogBase base, ConstantUnit unit) {
  const double k = relays - m - 1.0;
  if (unit == ConstantUnit::Literal || base == LogBase::Two) return k;
  return k * std::log(2.0);
}

double lemma2_objective(const NetworkParams& net, const Cut& cut, const CorrelationParams& c,
                        ObjectiveVariant variant, LogBase base, ConstantUnit unit) {
  net.validate();
  cut.validate(net.relays);
  const int N = net.relays;
  if (variant == ObjectiveVariant::V2 && N - cut.m < 1)
    throw InvalidArgument("second objective requires N - m >= 1");
  const double form = match_special(N, cut, c) ? phi_special(N, cut, c) : phi(N, cut, c);
  const double layer1 = half_log(base, 1.0 + psi(N, cut.n, c.rho1) * net.r2);
  double v = half_log(base, 1.0 + (N - cut.n) * net.r1) + half_log(base, 1.0 + form * net.r3);
  if (variant == ObjectiveVariant::V1) {
    const double mult = N - cut.m;
    if (mult != 0.0) v += mult * layer1;
  } else {
    v += 0.5 * v2_constant(N, cut.m, base, unit) + layer1;
  }
  return v;
}

BoundResult nd_bound(int relays, double r1, double r2, const OptimizerConfig& cfg) {
  NetworkParams{relays, r1, r2, 1.0}.validate();
  cfg.validate();
  DiamondProblem p{relays, r1, r2, cfg.log_base, rho_cap(cfg)};
  SearchState s;
  auto axis = detail::grid_axis(0.0, cfg.grid_step, 0.0, 1.0 - cfg.grid_step);
  detail::append_endpoint_ladder(axis, cfg.grid_step, 1.0, p.hi);
  for (double x : axis) {
    ++s.evaluations;
    const double v = p.eval({x, 0.0, 0.0}, s.value);
    if (v > s.value) {
      s.value = v;
      s.best = {x, 0.0, 0.0};
    }
  }
  zoom_refine(p, s, 0.5 * cfg.grid_step, cfg.refine_tol / kSpacingRatio);

  std::vector<Cut> cuts;
  std::vector<double> values;
  for (int n = 0; n <= relays; ++n) {
    cuts.push_back({n, 0});
    values.push_back(p.value(n, s.best[0]));
  }
  BoundResult r;
  r.variant = BoundVariant::ND;
  r.achieved_by = BoundVariant::ND;
  r.log_base = cfg.log_base;
  r.value = *std::min_element(values.begin(), values.end());
  r.minimizer_pairs = minimizers(cuts, values, cfg.refine_tol);
  r.argmax_corr = {s.best[0], 0.0, 0.0};
  r.meta = {cfg.grid_step, cfg.refine_tol, s.spacing, s.evaluations, cfg.rho12_mode};
  return r;
}

BoundResult special_mu_bound(const NetworkParams& net, const OptimizerConfig& cfg) {
  net.validate();
  cfg.validate();
  const int N = net.relays;
  const double cap = rho_cap(cfg);
  const Line first{[&](double rho) { return half_log(cfg.log_base, 1.0 + psi_or_neg_inf(N, N - 1, rho) * net.r2); },
                   -1.0, cap};
  const double lo2 = N == 1 ? -1.0 : std::max(-1.0, (N - 5.0) / (N - 1.0));
  const Line second{[&](double rho) { return half_log(cfg.log_base, 1.0 + mu(N, rho) * net.r3); }, lo2, cap};
  const SearchState s1 = maximize_line(first, -1.0, 1.0 - cfg.grid_step, cfg);
  const SearchState s2 = maximize_line(second, -1.0, 1.0 - cfg.grid_step, cfg);

  BoundResult r;
  r.variant = BoundVariant::SpecialMu;
  r.achieved_by = BoundVariant::SpecialMu;
  r.log_base = cfg.log_base;
  r.value = half_log(cfg.log_base, 1.0 + net.r1) + s1.value + s2.value;
  r.minimizer_pairs = {{N - 1, N - 1}};
  r.argmax_corr = {s1.best[0], s2.best[0], -1.0};
  r.meta = {cfg.grid_step, cfg.refine_tol, std::max(s1.spacing, s2.spacing), s1.evaluations + s2.evaluations,
            cfg.rho12_mode};
  return r;
}

BoundResult layered_bound(const NetworkParams& net, BoundVariant variant, const OptimizerConfig& cfg) {
  net.validate();
  cfg.validate();
  switch (variant) {
    case BoundVariant::Lemma2V1: return layered_single(net, ObjectiveVariant::V1, cfg);
    case BoundVariant::Lemma2V2: return layered_single(net, ObjectiveVariant::V2, cfg);
    case BoundVariant::SpecialMu: return special_mu_bound(net, cfg);
    case BoundVariant::Lemma2Min: {
      const BoundResult parts[] = {layered_single(net, ObjectiveVariant::V1, cfg),
                                   layered_single(net, ObjectiveVariant::V2, cfg), special_mu_bound(net, cfg)};
      const BoundResult* best = &parts[0];
      for (const auto& p : parts) {
        if (p.value < best->value) best = &p;
      }
      BoundResult r = *best;
      r.variant = BoundVariant::Lemma2Min;
      r.achieved_by = best->variant;
      r.meta.evaluations = 0;
      for (const auto& p : parts) {
        r.components.emplace_back(p.variant, p.value);
        r.meta.evaluations += p.meta.evaluations;
      }
      return r;
    }
    default: throw InvalidArgument("layered_bound: variant must be lemma2_v1, lemma2_v2, lemma2_min or special_mu");
  }
}

PsiSup sup_psi(int relays, int n, const OptimizerConfig& cfg) {
  cfg.validate();
  if (n < 0 || n > relays) throw InvalidArgument("sup_psi: n outside [0, N]");
  const double cap = rho_cap(cfg);
  auto samples = detail::grid_axis(0.0, cfg.grid_step, 0.0, 1.0 - cfg.grid_step);
  detail::append_endpoint_ladder(samples, cfg.grid_step, 1.0, cap);
  std::vector<double> values;
  for (double x : samples) values.push_back(psi(relays, n, x));
  const bool up = std::is_sorted(values.begin(), values.end());
  const bool down = std::is_sorted(values.rbegin(), values.rend());
  if (up) return {values.back(), samples.back(), "increasing"};
  if (down) return {values.front(), samples.front(), "decreasing"};
  const Line line{[&](double rho) { return psi(relays, n, rho); }, 0.0, cap};
  const SearchState s = maximize_line(line, 0.0, 1.0 - cfg.grid_step, cfg);
  return {s.value, s.best[0], "grid"};
}

BoundResult theorem2_variant(const NetworkParams& net, ObjectiveVariant variant, const OptimizerConfig& cfg) {
  net.validate();
  cfg.validate();
  OptimizerConfig zero = cfg;
  zero.rho12_mode = Rho12Mode::Zero;
  const BoundResult lemma = layered_single(net, variant, zero);
  const int N = net.relays;

  BoundResult r;
  r.variant = variant == ObjectiveVariant::V1 ? BoundVariant::Theorem2V1 : BoundVariant::Theorem2V2;
  r.achieved_by = r.variant;
  r.log_base = cfg.log_base;
  r.minimizer_pairs = lemma.minimizer_pairs;
  r.meta = lemma.meta;
  r.components.emplace_back(lemma.variant, lemma.value);
  r.value = kPosInf;
  for (const Cut& c : lemma.minimizer_pairs) {
    const PsiSup a = sup_psi(N, c.n, cfg);
    const PsiSup b = sup_psi(N, c.m, cfg);
    const double s1 = half_log(cfg.log_base, 1.0 + a.value * net.r2);
    const double s2 = half_log(cfg.log_base, 1.0 + b.value * net.r3);
    PairEvaluation pe{c, lemma.variant, pair_v1(net, c, s1, s2, cfg.log_base), std::nullopt};
    if (N - c.m >= 1) pe.v2 = pair_v2(net, c, s1, s2, cfg);
    const double v = variant == ObjectiveVariant::V1 ? pe.v1 : pe.v2.value_or(kPosInf);
    if (v < r.value) {
      r.value = v;
      r.argmax_corr = {a.argmax, b.argmax, 0.0};
    }
    r.pairs.push_back(pe);
  }
  if (!std::isfinite(r.value)) throw InvalidArgument("second objective does not apply to any minimizer pair");
  return r;
}

BoundResult theorem2_bound(const NetworkParams& net, const OptimizerConfig& cfg) {
  const BoundResult t1 = theorem2_variant(net, ObjectiveVariant::V1, cfg);
  BoundResult r = t1;
  r.components.clear();
  r.components.emplace_back(BoundVariant::Theorem2V1, t1.value);
  std::optional<BoundResult> t2;
  try {
    t2 = theorem2_variant(net, ObjectiveVariant::V2, cfg);
  } catch (const InvalidArgument&) {
  }
  if (t2) {
    r.components.emplace_back(BoundVariant::Theorem2V2, t2->value);
    r.pairs.insert(r.pairs.end(), t2->pairs.begin(), t2->pairs.end());
    r.meta.evaluations += t2->meta.evaluations;
    if (t2->value < t1.value) {
      r.value = t2->value;
      r.argmax_corr = t2->argmax_corr;
      r.achieved_by = BoundVariant::Theorem2V2;
    }
    std::vector<Cut> all = t1.minimizer_pairs;
    all.insert(all.end(), t2->minimizer_pairs.begin(), t2->minimizer_pairs.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    r.minimizer_pairs = all;
  }
  r.components.emplace_back(BoundVariant::Lemma2V1, t1.components.front().second);
  if (t2) r.components.emplace_back(BoundVariant::Lemma2V2, t2->components.front().second);
  r.variant = r.achieved_by;
  return r;
}

}  // namespace relaybounds
