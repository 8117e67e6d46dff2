#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "relaybounds/bounds.hpp"

namespace relaybounds {

/// One failed (or flagged) check. input is fully serialized so the case can be
/// re-run; numbers in it carry 17 significant digits.
struct VerifyRecord {
  std::string check;
  std::string input;
  double expected = 0.0;
  double got = 0.0;
  double diff = 0.0;
};

struct VerifyReport {
  std::string suite;
  int samples = 0;
  std::uint64_t seed = 0;
  std::vector<VerifyRecord> failures;
  /// Reported but not failing: candidate counterexamples of the one-sided check.
  std::vector<VerifyRecord> findings;
  std::vector<std::string> notes;
  std::vector<std::pair<std::string, double>> tolerances;
  double wall_time_s = 0.0;

  bool passed() const { return failures.empty(); }
};

/// key=value lines followed by a tab-separated failure table and finding
/// table. Wall time is included only on request so that output stays
/// byte-identical between runs.
std::string serialize(const VerifyReport& r, bool include_wall_time = false);

enum class OracleMutation { None, PsiSignFlip };

/// Random (N, cut, c) with c feasible and its conditioning blocks at least
/// kSampleMargin away from singular; phi and psi against the pseudoinverse
/// oracle, relative tolerance 1e-10.
inline constexpr double kSampleMargin = 1e-6;
inline constexpr double kOracleRelTol = 1e-10;
VerifyReport verify_oracle(int n_max, int samples, std::uint64_t seed, OracleMutation mutation = OracleMutation::None);

/// Evenness in rho12, vanishing first derivative and the second derivative at
/// rho12 = 0, and phi(rho12) <= phi(0) over a feasible rho12 grid.
inline constexpr double kEvenTol = 1e-12;
inline constexpr double kFirstDerivTol = 1e-6;
inline constexpr double kFirstDerivStep = 1e-5;
inline constexpr double kSecondDerivRelTol = 1e-4;
inline constexpr double kMaximaGridStep = 1e-2;
VerifyReport verify_maxima(int n_max, int samples, std::uint64_t seed);

/// (i) phi(n, m, rho1, rho2, 0) == psi(m, rho2) pointwise on a grid (1e-12);
/// (ii) joint and zero modes of layered_bound agree within
/// max(2 refine_tol, 1e-6) for every gain triple, for both objectives.
/// cfg drives the zero-mode run; the joint run uses joint_grid_step.
inline constexpr double kReductionTol = 1e-12;
using GainTriple = std::array<double, 3>;
VerifyReport verify_lemma3(int n_max, const std::vector<GainTriple>& gains, const OptimizerConfig& cfg,
                           double joint_grid_step);

/// limit_checks over every cut for N <= n_max.
VerifyReport verify_limits(int n_max);

/// Random unit-diagonal PSD matrices against the structured joint-mode bound.
/// Exceedances are findings, not failures. The structured matrix at the
/// bound's argmax and its permutations are hard checks.
inline constexpr double kTimeshareTol = 1e-6;
VerifyReport verify_timeshare_onesided(int relays, int samples, std::uint64_t seed, const GainTriple& gains,
                                       const OptimizerConfig& cfg);

/// Closed-form spectrum against the dense eigensolver (1e-9). The two listed
/// aggregate forms must each be eigenvalues when rho1 == rho2; elsewhere
/// their deviation is recorded in the notes.
inline constexpr double kEigenTol = 1e-9;
VerifyReport verify_eigen(int n_max, int samples, std::uint64_t seed);

/// Lemma-1 objective for an arbitrary covariance and explicit subsets
/// (layer-1 indices in [0, N), layer-2 in [N, 2N)), via gen_schur.
double lemma1_objective(const linalg::SymMatrix& q, const NetworkParams& net, const linalg::IndexSet& s1,
                        const linalg::IndexSet& s2, LogBase base);

/// Min of lemma1_objective over every subset pair with s1 empty => s2 empty.
double lemma1_min(const linalg::SymMatrix& q, const NetworkParams& net, LogBase base);

}  // namespace relaybounds
