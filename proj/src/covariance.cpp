#include "relaybounds/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "relaybounds/errors.hpp"

namespace relaybounds {

namespace {

void require_relays(int relays) {
  if (relays < 1) throw InvalidArgument("relays must be >= 1, got " + std::to_string(relays));
}

// Eigenvalues of [[p, q], [q, s]], ascending.
std::pair<double, double> sym2x2_eigen(double p, double q, double s) {
  const double mean = 0.5 * (p + s);
  const double radius = std::hypot(0.5 * (p - s), q);
  return {mean - radius, mean + radius};
}

}  // namespace

void NetworkParams::validate() const {
  require_relays(relays);
  if (!(r1 > 0.0) || !std::isfinite(r1)) throw InvalidArgument("r1 must be a positive finite gain");
  if (!(r2 > 0.0) || !std::isfinite(r2)) throw InvalidArgument("r2 must be a positive finite gain");
  if (!(r3 > 0.0) || !std::isfinite(r3)) throw InvalidArgument("r3 must be a positive finite gain");
}

linalg::SymMatrix build_cov(int relays, const CorrelationParams& c) {
  require_relays(relays);
  const auto n = static_cast<std::size_t>(relays);
  linalg::SymMatrix q(2 * n);
  for (std::size_t i = 0; i < 2 * n; ++i) {
    for (std::size_t j = i; j < 2 * n; ++j) {
      double v;
      if (i == j) {
        v = 1.0;
      } else if (j < n) {
        v = c.rho1;
      } else if (i >= n) {
        v = c.rho2;
      } else {
        v = c.rho12;
      }
      q.set(i, j, v);
    }
  }
  return q;
}

ZetaInterval zeta_interval(int relays, double rho1, double rho2) {
  require_relays(relays);
  const double n = relays;
  return {-1.0, std::min((1.0 + (n - 1.0) * rho1) / n, (1.0 + (n - 1.0) * rho2) / n)};
}

std::vector<Eigenpair> eigenvalues_closed(int relays, const CorrelationParams& c) {
  require_relays(relays);
  const double n = relays;
  std::vector<Eigenpair> out;
  if (relays > 1) {
    out.push_back({1.0 - c.rho1, relays - 1});
    out.push_back({1.0 - c.rho2, relays - 1});
  }
  const auto [lo, hi] = sym2x2_eigen(1.0 + (n - 1.0) * c.rho1, n * c.rho12, 1.0 + (n - 1.0) * c.rho2);
  out.push_back({lo, 1});
  out.push_back({hi, 1});
  return out;
}

std::vector<double> eigenvalues_closed_sorted(int relays, const CorrelationParams& c) {
  std::vector<double> flat;
  for (const auto& [value, mult] : eigenvalues_closed(relays, c)) flat.insert(flat.end(), std::size_t(mult), value);
  std::sort(flat.begin(), flat.end());
  return flat;
}

std::vector<double> eigenvalues_listed_form(int relays, const CorrelationParams& c) {
  require_relays(relays);
  const double n = relays;
  return {1.0 - n * c.rho12 + (n - 1.0) * c.rho1, 1.0 - n * c.rho12 + (n - 1.0) * c.rho2};
}

double min_eigenvalue(int relays, const CorrelationParams& c) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& [value, mult] : eigenvalues_closed(relays, c)) m = std::min(m, value);
  return m;
}

bool is_feasible(int relays, const CorrelationParams& c, double tol) {
  if (!(tol >= 0.0)) throw InvalidArgument("is_feasible: tol must be >= 0");
  return min_eigenvalue(relays, c) >= -tol;
}

ZetaInterval psd_rho12_interval(int relays, double rho1, double rho2) {
  require_relays(relays);
  const double n = relays;
  const double a = 1.0 + (n - 1.0) * rho1;
  const double b = 1.0 + (n - 1.0) * rho2;
  const bool blocks_psd = relays == 1 || (rho1 <= 1.0 && rho2 <= 1.0 && a >= 0.0 && b >= 0.0);
  if (!blocks_psd) return {1.0, -1.0};
  const double half = std::min(1.0, std::sqrt(a * b) / n);
  return {-half, half};
}

RegionComparison compare_regions(int relays, const CorrelationParams& c, double tol) {
  const ZetaInterval z = zeta_interval(relays, c.rho1, c.rho2);
  RegionComparison out;
  out.in_box = c.rho1 >= -1.0 && c.rho1 <= 1.0 && c.rho2 >= -1.0 && c.rho2 <= 1.0 && z.contains(c.rho12);
  out.psd = is_feasible(relays, c, tol);
  return out;
}

}  // namespace relaybounds
