#include "relaybounds/quadforms.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "relaybounds/errors.hpp"

namespace relaybounds {

namespace {

double checked(double denom, const char* what) {
  if (!(std::abs(denom) > kDegeneracyTol)) {
    throw DegenerateDenominator(std::string(what) + " denominator vanishes");
  }
  return denom;
}

void require_relays(int relays) {
  if (relays < 1) throw InvalidArgument("relays must be >= 1");
}

}  // namespace

void Cut::validate(int relays) const {
  require_relays(relays);
  if (n < 0 || n > relays || m < 0 || m > relays) {
    throw InvalidArgument("cut (" + std::to_string(n) + "," + std::to_string(m) + ") outside [0, " +
                          std::to_string(relays) + "]");
  }
}

double psi(int relays, int n, double rho1, PsiForm form) {
  require_relays(relays);
  if (n < 0 || n > relays) throw InvalidArgument("psi: n outside [0, N]");
  const double nn = n;
  const double rest = relays - n;
  if (n == 0) return 0.0;
  if (rest == 0) return nn * (1.0 + (nn - 1.0) * rho1);
  const double sign = form == PsiForm::Corrected ? 1.0 : -1.0;
  const double denom = checked(1.0 + sign * (rest - 1.0) * rho1, "psi");
  return nn * (1.0 + (nn - 1.0) * rho1 - nn * rest * rho1 * rho1 / denom);
}

double phi(int relays, const Cut& cut, const CorrelationParams& c) {
  cut.validate(relays);
  const double N = relays;
  const double m = cut.m;
  const double k1 = N - cut.n;  // |1S^c|
  const double k2 = N - m;      // |2S^c|
  const double r2 = c.rho2;
  const double s = c.rho12 * c.rho12;
  if (cut.m == 0) return 0.0;

  const double base = 1.0 + (m - 1.0) * r2;
  if (k1 == 0 && k2 == 0) return m * base;
  if (k1 == 0) {
    const double d = checked(1.0 + (k2 - 1.0) * r2, "phi (layer-2 block)");
    return m * (base - m * k2 * r2 * r2 / d);
  }
  const double a = checked(1.0 + (k1 - 1.0) * c.rho1, "phi (layer-1 block)");
  const double X = 1.0 / a;
  if (k2 == 0) return m * (base - m * k1 * s * X);

  const double D = checked(a * (1.0 + (k2 - 1.0) * r2) - k2 * k1 * s, "phi (conditioning block)");
  const double E = a / D;
  return m * (base - m * k1 * s * X - m * k1 * k1 * k2 * s * s * E * X * X + 2.0 * m * k2 * k1 * r2 * s * E * X -
              m * k2 * r2 * r2 * E);
}

std::optional<double> try_phi(int relays, const Cut& cut, const CorrelationParams& c) noexcept {
  try {
    return phi(relays, cut, c);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::string to_string(SpecialPattern p) {
  switch (p) {
    case SpecialPattern::EmptyCut: return "empty-cut";
    case SpecialPattern::FullCut: return "full-cut";
    case SpecialPattern::Rho1One: return "rho1-one";
    case SpecialPattern::Rho2One: return "rho2-one";
    case SpecialPattern::AllOnes: return "all-ones";
    case SpecialPattern::CrossMinusOne: return "cross-minus-one";
  }
  return "unknown";
}

std::optional<SpecialPattern> match_special(int relays, const Cut& cut, const CorrelationParams& c) {
  cut.validate(relays);
  const int N = relays;
  if (cut.n == 0 && cut.m == 0) return SpecialPattern::EmptyCut;
  if (cut.n == N && cut.m == N) return SpecialPattern::FullCut;
  if (cut.n < N && cut.m == N && c.rho1 == 1.0) return SpecialPattern::Rho1One;
  if (cut.m < N && cut.n == N && c.rho2 == 1.0) return SpecialPattern::Rho2One;
  if (c.rho1 == 1.0 && c.rho2 == 1.0 && c.rho12 == 1.0) return SpecialPattern::AllOnes;
  if (cut.n == N - 1 && cut.m == N - 1 && c.rho12 == -1.0) return SpecialPattern::CrossMinusOne;
  return std::nullopt;
}

double phi_special(int relays, const Cut& cut, const CorrelationParams& c) {
  const auto pattern = match_special(relays, cut, c);
  if (!pattern) throw NoSpecialPattern("phi_special: no degenerate pattern matches this point");
  const double N = relays;
  switch (*pattern) {
    case SpecialPattern::EmptyCut: return 0.0;
    case SpecialPattern::FullCut: return N * (1.0 + (N - 1.0) * c.rho2);
    case SpecialPattern::Rho1One: return N * (1.0 + (N - 1.0) * c.rho2 - N * c.rho12 * c.rho12);
    case SpecialPattern::Rho2One: return 0.0;
    case SpecialPattern::AllOnes: return 0.0;
    case SpecialPattern::CrossMinusOne: return mu(relays, c.rho2);
  }
  return 0.0;
}

double mu(int relays, double rho2) {
  require_relays(relays);
  const double k = relays - 1.0;
  return k * (1.0 + (k - 1.0) * rho2 - k * (1.0 + rho2) * (1.0 + rho2) / 4.0);
}

OracleSets oracle_sets(int relays, const Cut& cut, Layer layer) {
  cut.validate(relays);
  const auto N = static_cast<std::size_t>(relays);
  const auto n = static_cast<std::size_t>(cut.n);
  const auto m = static_cast<std::size_t>(cut.m);
  if (layer == Layer::One) return {linalg::IndexSet::range(0, n), linalg::IndexSet::range(n, N - n)};
  const auto cond = linalg::IndexSet::range(n, N - n).merged(linalg::IndexSet::range(N + m, N - m));
  return {linalg::IndexSet::range(N, m), cond};
}

double schur_oracle_quadform(int relays, const Cut& cut, const CorrelationParams& c, Layer layer,
                             double rank_tol) {
  const auto sets = oracle_sets(relays, cut, layer);
  const linalg::SymMatrix q = build_cov(relays, c);
  return linalg::quad_form_ones(linalg::gen_schur(q, sets.target, sets.cond, rank_tol));
}

double evaluate_phi(int relays, const Cut& cut, const CorrelationParams& c) {
  if (match_special(relays, cut, c)) return phi_special(relays, cut, c);
  if (auto v = try_phi(relays, cut, c)) return *v;
  return schur_oracle_quadform(relays, cut, c, Layer::Two);
}

SchurIntermediates schur_intermediates(int relays, const Cut& cut, const CorrelationParams& c) {
  cut.validate(relays);
  const double n = relays - cut.n;  // conditioning layer-1 count
  const double m = relays - cut.m;  // conditioning layer-2 count
  const double l = cut.m;
  if (n < 1 || m < 1) throw InvalidArgument("schur_intermediates: both conditioning blocks must be nonempty");
  const double r1 = c.rho1, r2 = c.rho2, r12 = c.rho12;

  SchurIntermediates s{};
  const double den1 = checked(-(n - 1.0) * r1 * r1 + (n - 2.0) * r1 + 1.0, "A^-1");
  s.x = ((n - 2.0) * r1 + 1.0) / den1;
  s.y = -r1 / den1;
  s.X = s.x + (n - 1.0) * s.y;
  s.z = n * r12 * ((n - 1.0) * r12 * s.y + r12 * s.x);
  s.u = 1.0 - s.z;
  s.v = r2 - s.z;
  const double den2 = checked(-(m - 1.0) * s.v * s.v + (m - 2.0) * s.u * s.v + s.u * s.u, "(D - C A^-1 B)^-1");
  s.e = ((m - 2.0) * s.v + s.u) / den2;
  s.f = -s.v / den2;
  s.E = s.e + (m - 1.0) * s.f;
  s.w = m * r12 * ((m - 1.0) * r12 * s.f + r12 * s.e);
  s.alphaA = s.x + s.w * s.X * s.X;
  s.betaA = s.y + s.w * s.X * s.X;
  s.h = r12 * s.E;
  s.alphaB = -s.h * s.X;
  s.i = r12 * s.X;
  s.alphaC = -s.i * s.E;
  s.gamma = n * r12 * (r12 * (s.alphaA + (n - 1.0) * s.betaA) + m * r2 * s.alphaC) +
            m * r2 * (n * r12 * s.alphaB + r2 * s.E);

  const double a = checked(1.0 + (n - 1.0) * r1, "X");
  s.X_closed = 1.0 / a;
  s.E_closed = a / checked(a * (1.0 + (m - 1.0) * r2) - m * n * r12 * r12, "E");
  s.phi_from_gamma = l * (1.0 + (l - 1.0) * r2 - l * s.gamma);
  return s;
}

double d2phi_at_zero(int relays, const Cut& cut, double rho1, double rho2) {
  cut.validate(relays);
  const double l = cut.m;
  const double n = relays - cut.n;
  const double m = relays - cut.m;
  if (l == 0 || n == 0) return 0.0;
  const double X = 1.0 / checked(1.0 + (n - 1.0) * rho1, "d2phi (layer-1 block)");
  double ratio = 0.0;
  if (m > 0) ratio = m * rho2 / checked(1.0 + (m - 1.0) * rho2, "d2phi (layer-2 block)");
  return -2.0 * l * l * n * X * (1.0 - ratio) * (1.0 - ratio);
}

double d2phi_at_zero_as_printed(int relays, const Cut& cut, double rho1, double rho2) {
  cut.validate(relays);
  const double l = cut.m;
  const double n = relays - cut.n;
  const double m = relays - cut.m;
  if (l == 0 || n == 0) return 0.0;
  const double X = 1.0 / checked(1.0 + (n - 1.0) * rho1, "d2phi (layer-1 block)");
  double ratio = 0.0;
  if (m > 0) ratio = m * rho2 / checked(1.0 + (m - 1.0) * rho2, "d2phi (layer-2 block)");
  return 2.0 * l * l * n * X * (-1.0 - ratio * ratio);
}

std::string to_string(LimitBehavior b) {
  switch (b) {
    case LimitBehavior::Converges: return "converges";
    case LimitBehavior::DivergesToMinusInfinity: return "diverges-to-minus-infinity";
    case LimitBehavior::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

bool LimitReport::all_match() const {
  for (const auto& s : sequences) {
    if (!s.matches()) return false;
  }
  return true;
}

namespace {

constexpr int kFirstExponent = 3;
constexpr int kLastExponent = 8;
constexpr double kConvergenceRelTol = 1e-6;
constexpr double kDivergenceFloor = -1e6;

LimitSequence follow(int relays, const Cut& cut, std::string scenario, CorrelationParams limit_point,
                     LimitBehavior expected) {
  LimitSequence seq;
  seq.scenario = std::move(scenario);
  seq.base = limit_point;
  seq.expected = expected;
  seq.target = schur_oracle_quadform(relays, cut, limit_point, Layer::Two);
  if (match_special(relays, cut, limit_point)) seq.special_value = phi_special(relays, cut, limit_point);

  const double endpoint = limit_point.rho12;
  bool computable = true;
  for (int k = kFirstExponent; k <= kLastExponent; ++k) {
    CorrelationParams p = limit_point;
    p.rho12 = endpoint - std::copysign(std::pow(10.0, -k), endpoint);
    const auto v = try_phi(relays, cut, p);
    if (!v) {
      computable = false;
      break;
    }
    seq.rho12.push_back(p.rho12);
    seq.values.push_back(*v);
  }
  if (!computable) {
    seq.observed = LimitBehavior::Inconclusive;
    return seq;
  }

  bool decreasing = true;
  for (std::size_t k = 1; k < seq.values.size(); ++k) decreasing = decreasing && seq.values[k] < seq.values[k - 1];
  const double last = seq.values.back();
  if (std::abs(last - seq.target) <= kConvergenceRelTol * std::max(1.0, std::abs(seq.target))) {
    seq.observed = LimitBehavior::Converges;
  } else if (decreasing && last <= kDivergenceFloor) {
    seq.observed = LimitBehavior::DivergesToMinusInfinity;
  } else {
    seq.observed = LimitBehavior::Inconclusive;
  }
  return seq;
}

}  // namespace

LimitReport limit_checks(int relays, const Cut& cut) {
  cut.validate(relays);
  LimitReport report;
  report.relays = relays;
  report.cut = cut;
  std::ostringstream sched;
  sched << "rho12 = limit -+ 10^-k for k=" << kFirstExponent << ".." << kLastExponent
        << "; converges: |phi(k=" << kLastExponent << ") - oracle| <= " << kConvergenceRelTol
        << "*max(1,|oracle|); diverges: strictly decreasing and phi(k=" << kLastExponent
        << ") <= " << kDivergenceFloor;
  report.tolerance_schedule = sched.str();

  report.sequences.push_back(follow(relays, cut, "rho1=rho2=1, rho12 up to 1", {1.0, 1.0, 1.0},
                                    LimitBehavior::Converges));
  report.sequences.push_back(follow(relays, cut, "rho1=rho2=1, rho12 down to -1", {1.0, 1.0, -1.0},
                                    LimitBehavior::Converges));

  if (cut.n == relays - 1 && cut.m == relays - 1) {
    for (double rho2 : {0.0, 0.5, 1.0}) {
      const bool finite = relays == 1 || rho2 == 1.0;
      std::ostringstream name;
      name << "n=m=N-1, rho1=0.5, rho2=" << rho2 << ", rho12 down to -1";
      report.sequences.push_back(follow(relays, cut, name.str(), {0.5, rho2, -1.0},
                                        finite ? LimitBehavior::Converges : LimitBehavior::DivergesToMinusInfinity));
    }
  }
  return report;
}

}  // namespace relaybounds
