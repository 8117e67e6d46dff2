#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relaybounds/covariance.hpp"
#include "relaybounds/quadforms.hpp"

namespace relaybounds {

enum class LogBase { Two, E };

/// zero: rho12 pinned to 0, so the layer-2 form reduces to psi(m, rho2) and the
/// search is over (rho1, rho2). joint: search over (rho1, rho2, rho12).
enum class Rho12Mode { Zero, Joint };

/// Unit of the additive N-m-1 constant of the second objective. Bits: the
/// constant counts half-log(2) increments, i.e. N-m-1 bits whatever the output
/// base (in nats it becomes (N-m-1) ln 2). Literal: the bare number N-m-1 in
/// the output base.
enum class ConstantUnit { Bits, Literal };

enum class ObjectiveVariant { V1, V2 };

enum class BoundVariant { ND, Lemma2V1, Lemma2V2, Lemma2Min, Theorem2V1, Theorem2V2, SpecialMu };

std::string to_string(BoundVariant v);
std::string to_string(LogBase b);
std::string to_string(Rho12Mode m);

struct OptimizerConfig {
  double grid_step = 1e-3;
  double refine_tol = 1e-6;
  LogBase log_base = LogBase::Two;
  Rho12Mode rho12_mode = Rho12Mode::Zero;
  ConstantUnit v2_constant = ConstantUnit::Bits;
  int threads = 1;

  /// 0 < refine_tol <= grid_step <= 0.5, threads >= 1.
  void validate() const;
};

struct SolverMeta {
  double grid_step = 0.0;
  double refine_tol = 0.0;
  double final_spacing = 0.0;  // spacing of the last refinement grid
  long long evaluations = 0;   // objective evaluations (grid points + refinement points)
  Rho12Mode rho12_mode = Rho12Mode::Zero;
};

/// Per-pair evaluation of the theorem-style bound.
struct PairEvaluation {
  Cut cut;
  BoundVariant source = BoundVariant::Lemma2V1;  // minimizer set the pair came from
  double v1 = 0.0;
  std::optional<double> v2;  // empty when N - m = 0
};

struct BoundResult {
  double value = 0.0;
  BoundVariant variant = BoundVariant::ND;
  /// For lemma2_min and the combined theorem bound: the constituent that won.
  BoundVariant achieved_by = BoundVariant::ND;
  LogBase log_base = LogBase::Two;
  std::vector<Cut> minimizer_pairs;  // lexicographic
  CorrelationParams argmax_corr;
  SolverMeta meta;
  /// Constituent values for lemma2_min and the theorem bound.
  std::vector<std::pair<BoundVariant, double>> components;
  /// Theorem bound only.
  std::vector<PairEvaluation> pairs;
};

/// (0,0) followed by every (n, m) with n >= 1; 1 + N(N+1) cuts.
std::vector<Cut> enumerate_cuts(int relays);

double log_in(LogBase base, double x);

/// The N-m-1 term of the second objective in the output unit.
double v2_constant(int relays, int m, LogBase base, ConstantUnit unit);

/// Objective of the 2-layer bound for one cut and one correlation point:
///  V1: 1/2 (log(1+(N-n) r1) + (N-m) log(1+psi(n,rho1) r2) + log(1+phi r3))
///  V2: 1/2 (log(1+(N-n) r1) + (N-m-1) + log(1+psi(n,rho1) r2) + log(1+phi r3))
/// phi comes from phi_special at degenerate points, else from the closed form
/// (DegenerateDenominator propagates). A log of a nonpositive argument makes
/// the objective -infinity. V2 requires N - m >= 1.
double lemma2_objective(const NetworkParams& net, const Cut& cut, const CorrelationParams& c,
                        ObjectiveVariant variant, LogBase base, ConstantUnit unit = ConstantUnit::Bits);

/// Diamond-network bound: sup over rho1 in [0,1) of
/// min_n 1/2 (log(1+(N-n) r1) + log(1+psi(n,rho1) r2)).
BoundResult nd_bound(int relays, double r1, double r2, const OptimizerConfig& cfg);

/// Sup over feasible correlations of the min over cuts. variant is one of
/// Lemma2V1, Lemma2V2, Lemma2Min (min of V1, V2 and the mu special case) or
/// SpecialMu.
BoundResult layered_bound(const NetworkParams& net, BoundVariant variant, const OptimizerConfig& cfg);

/// The n = m = N-1, rho12 = -1 special-case bound:
/// 1/2 (log(1+r1) + sup_{rho1 in [-1,1)} log(1+psi(N-1,rho1) r2)
///      + sup_{rho2 in [max(-1,(N-5)/(N-1)),1)} log(1+mu(rho2) r3)).
BoundResult special_mu_bound(const NetworkParams& net, const OptimizerConfig& cfg);

/// sup over rho in [0,1) of psi(n, rho), with the monotone shortcut only
/// when sampling confirms monotonicity.
struct PsiSup {
  double value = 0.0;
  double argmax = 0.0;
  std::string method;  // "increasing", "decreasing" or "grid"
};
PsiSup sup_psi(int relays, int n, const OptimizerConfig& cfg);

/// Theorem-style bound for one objective variant, evaluated at every minimizer
/// pair of layered_bound(rho12 = 0) for that variant; value is the smallest.
BoundResult theorem2_variant(const NetworkParams& net, ObjectiveVariant variant, const OptimizerConfig& cfg);

/// Both variants; value is the smaller one. The pair table lists each
/// minimizer pair of either variant evaluated under both forms.
BoundResult theorem2_bound(const NetworkParams& net, const OptimizerConfig& cfg);

}  // namespace relaybounds
