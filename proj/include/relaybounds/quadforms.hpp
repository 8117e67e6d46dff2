#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relaybounds/covariance.hpp"
#include "relaybounds/linalg.hpp"

namespace relaybounds {

/// Denominators at or below this magnitude are treated as vanishing.
inline constexpr double kDegeneracyTol = 1e-12;

/// Cut indices: n = |1S| (layer-1 relays on the source side), m = |2S|.
/// The broadcast term sees N - n relays, the layer-2 term conditions on
/// the N - n + N - m relays outside the cut.
struct Cut {
  int n = 0;
  int m = 0;

  void validate(int relays) const;
  friend auto operator<=>(const Cut&, const Cut&) = default;
};

enum class Layer { One, Two };

/// Which denominator to use for psi. The closed form agrees with the
/// Schur-complement definition only with the plus sign; AsPrinted keeps the
/// 1 - (N-n-1) rho variant around so the mismatch can be demonstrated.
enum class PsiForm { Corrected, AsPrinted };

/// 1^T Q_{1S.1S^c} 1 with |1S| = n:
///   n (1 + (n-1) rho - n (N-n) rho^2 / (1 + (N-n-1) rho)).
/// Throws DegenerateDenominator when the denominator vanishes and n (N-n) != 0.
double psi(int relays, int n, double rho1, PsiForm form = PsiForm::Corrected);

/// 1^T Q_{2S.1S^c 2S^c} 1 via the expanded closed form. Terms whose cut-size
/// multiplier is zero are dropped before any denominator is formed, so
/// n = N or m = N never divides by 1 - rho. Throws DegenerateDenominator if
/// a remaining denominator vanishes.
double phi(int relays, const Cut& cut, const CorrelationParams& c);

/// Same as phi() but reports degeneracy as nullopt.
std::optional<double> try_phi(int relays, const Cut& cut, const CorrelationParams& c) noexcept;

enum class SpecialPattern {
  EmptyCut,       // 1S = 2S = {}
  FullCut,        // 1S u 2S = all relays
  Rho1One,        // 1S strict subset, 2S = [2N], rho1 = 1
  Rho2One,        // 2S strict subset, 1S = [1N], rho2 = 1
  AllOnes,        // {} != 1S u 2S strict subset, rho1 = rho2 = rho12 = 1
  CrossMinusOne,  // n = m = N-1, rho12 = -1
};

std::string to_string(SpecialPattern p);

/// First matching degenerate pattern, in the priority order of the enum.
std::optional<SpecialPattern> match_special(int relays, const Cut& cut, const CorrelationParams& c);

/// Value of the quadratic form at a degenerate point. Throws NoSpecialPattern.
double phi_special(int relays, const Cut& cut, const CorrelationParams& c);

/// (N-1)(1 + (N-2) rho2 - (N-1)(1 + rho2)^2 / 4).
double mu(int relays, double rho2);

/// Index sets used by the oracle: the first n layer-1 and first m layer-2
/// relays form the cut.
struct OracleSets {
  linalg::IndexSet target;
  linalg::IndexSet cond;
};
OracleSets oracle_sets(int relays, const Cut& cut, Layer layer);

/// 1^T (generalized Schur complement) 1 computed from the dense covariance
/// with a pseudoinverse. Independent of every closed form in this header.
double schur_oracle_quadform(int relays, const Cut& cut, const CorrelationParams& c, Layer layer,
                             double rank_tol = linalg::kDefaultRankTol);

/// phi value routed through phi_special, then the closed form, then the
/// oracle. Never throws for a valid cut.
double evaluate_phi(int relays, const Cut& cut, const CorrelationParams& c);

/// Block-inverse intermediates, in the labeling where the conditioning set
/// has n' = N - n layer-1 and m' = N - m layer-2 relays and the target has
/// l = m relays. Requires n' >= 1 and m' >= 1.
struct SchurIntermediates {
  double x, y, z, u, v, w, e, f, h, i;
  double alphaA, betaA, alphaB, alphaC, gamma;
  double X;         // x + (n'-1) y
  double E;         // e + (m'-1) f
  double X_closed;  // 1 / (1 + (n'-1) rho1)
  double E_closed;  // (1+(n'-1)rho1) / ((1+(n'-1)rho1)(1+(m'-1)rho2) - m'n' rho12^2)
  double phi_from_gamma;  // l (1 + (l-1) rho2 - l gamma)
};
SchurIntermediates schur_intermediates(int relays, const Cut& cut, const CorrelationParams& c);

/// d^2 phi / d rho12^2 at rho12 = 0:
///   -2 m^2 (N-n) X (1 - (N-m) rho2 / (1 + (N-m-1) rho2))^2,  X = 1/(1+(N-n-1) rho1).
double d2phi_at_zero(int relays, const Cut& cut, double rho1, double rho2);

/// The second-derivative form without the cross term
/// 4 m^2 (N-n)(N-m) rho2 X / (1 + (N-m-1) rho2); differs from the true value
/// whenever (N-m) rho2 != 0.
double d2phi_at_zero_as_printed(int relays, const Cut& cut, double rho1, double rho2);

enum class LimitBehavior { Converges, DivergesToMinusInfinity, Inconclusive };
std::string to_string(LimitBehavior b);

struct LimitSequence {
  std::string scenario;
  CorrelationParams base;  // rho12 field holds the limit point
  std::vector<double> rho12;
  std::vector<double> values;
  double target = 0.0;                  // oracle value at the limit point
  std::optional<double> special_value;  // phi_special at the limit point, if a pattern matches
  LimitBehavior expected = LimitBehavior::Converges;
  LimitBehavior observed = LimitBehavior::Inconclusive;
  bool matches() const { return expected == observed; }
};

struct LimitReport {
  int relays = 0;
  Cut cut;
  std::vector<LimitSequence> sequences;
  std::string tolerance_schedule;
  bool all_match() const;
};

/// Follows phi along rho12 = +-(1 - 10^-k), k = 3..8, toward the degenerate
/// points and classifies the behavior.
LimitReport limit_checks(int relays, const Cut& cut);

}  // namespace relaybounds
