#pragma once

#include <vector>

#include "relaybounds/linalg.hpp"

namespace relaybounds {

inline constexpr double kFeasibilityTol = 1e-12;

/// Relays per layer and the three hop gains (source->layer 1, layer 1->layer 2,
/// layer 2->destination). Node powers are unit and do not appear.
struct NetworkParams {
  int relays = 1;
  double r1 = 1.0;
  double r2 = 1.0;
  double r3 = 1.0;

  /// Throws InvalidArgument naming the offending field.
  void validate() const;
};

/// Intra-layer correlations rho1, rho2 and the cross-layer correlation rho12.
struct CorrelationParams {
  double rho1 = 0.0;
  double rho2 = 0.0;
  double rho12 = 0.0;

  friend bool operator==(const CorrelationParams&, const CorrelationParams&) = default;
};

/// Admissible rho12 interval [-1, min{(1+(N-1)rho1)/N, (1+(N-1)rho2)/N}].
///
/// This is the box that the coefficient analysis states. It is neither
/// necessary nor sufficient for positive semidefiniteness of the full matrix;
/// see psd_rho12_interval() for the exact slice.
struct ZetaInterval {
  double lo = -1.0;
  double hi = 1.0;

  bool empty() const { return lo > hi; }
  bool contains(double rho12) const { return rho12 >= lo && rho12 <= hi; }
};

struct Eigenpair {
  double value;
  int multiplicity;
};

/// 2N x 2N covariance with unit diagonal, rho1 inside the layer-1 block,
/// rho2 inside the layer-2 block and rho12 in the cross blocks. Layer-1
/// relays occupy indices [0, N), layer-2 relays [N, 2N).
linalg::SymMatrix build_cov(int relays, const CorrelationParams& c);

ZetaInterval zeta_interval(int relays, double rho1, double rho2);

/// Exact spectrum: 1 - rho1 and 1 - rho2 (each N-1 times) plus the two
/// eigenvalues of the aggregate block
///   [[1 + (N-1) rho1, N rho12], [N rho12, 1 + (N-1) rho2]].
/// Entries with multiplicity 0 are omitted.
std::vector<Eigenpair> eigenvalues_closed(int relays, const CorrelationParams& c);

/// Flattened eigenvalues_closed(), ascending, length 2N.
std::vector<double> eigenvalues_closed_sorted(int relays, const CorrelationParams& c);

/// The aggregate-block eigenvalues in the simplified form
/// 1 - N rho12 + (N-1) rho1 and 1 - N rho12 + (N-1) rho2. They coincide with
/// the exact pair only when rho1 == rho2; kept for comparison.
std::vector<double> eigenvalues_listed_form(int relays, const CorrelationParams& c);

double min_eigenvalue(int relays, const CorrelationParams& c);

/// Exact PSD test: min eigenvalue >= -tol.
bool is_feasible(int relays, const CorrelationParams& c, double tol = kFeasibilityTol);

/// For fixed (rho1, rho2), the rho12 values making the matrix PSD:
/// |rho12| <= sqrt((1+(N-1)rho1)(1+(N-1)rho2)) / N, provided both intra-layer
/// blocks are PSD. Returns an empty interval otherwise.
ZetaInterval psd_rho12_interval(int relays, double rho1, double rho2);

/// Where the zeta box and the PSD region disagree at a given point.
struct RegionComparison {
  bool in_box = false;   // rho1, rho2 in [-1, 1] and rho12 in zeta
  bool psd = false;
};
RegionComparison compare_regions(int relays, const CorrelationParams& c, double tol = kFeasibilityTol);

}  // namespace relaybounds
