#include <gtest/gtest.h>

#include <cmath>

#include "relaybounds/bounds.hpp"
#include "relaybounds/errors.hpp"

using namespace relaybounds;

namespace {

OptimizerConfig coarse() {
  OptimizerConfig cfg;
  cfg.grid_step = 1e-2;
  return cfg;
}

double min_over_cuts(const NetworkParams& net, const CorrelationParams& c, ObjectiveVariant v,
                     const OptimizerConfig& cfg) {
  double best = HUGE_VAL;
  for (const Cut& cut : enumerate_cuts(net.relays)) {
    if (v == ObjectiveVariant::V2 && cut.m == net.relays) continue;
    best = std::min(best, lemma2_objective(net, cut, c, v, cfg.log_base, cfg.v2_constant));
  }
  return best;
}

// max over a coarse (rho1, rho2) lattice of the min over cuts, rho12 = 0
double brute_zero_mode(const NetworkParams& net, ObjectiveVariant v, const OptimizerConfig& cfg) {
  const int N = net.relays;
  const double lo = N == 1 ? 0.0 : std::max(-1.0, -1.0 / (N - 1));
  const double hi = N == 1 ? 0.0 : 0.95;
  double best = -HUGE_VAL;
  for (double a = lo; a <= hi + 1e-12; a += 0.05)
    for (double b = lo; b <= hi + 1e-12; b += 0.05) {
      try {
        best = std::max(best, min_over_cuts(net, {a, b, 0.0}, v, cfg));
      } catch (const DegenerateDenominator&) {
      }
    }
  return best;
}

}  // namespace

TEST(Cuts, EnumerationCountAndOrder) {
  for (int N = 1; N <= 6; ++N) {
    const auto cuts = enumerate_cuts(N);
    EXPECT_EQ(cuts.size(), static_cast<std::size_t>(1 + N * (N + 1)));
    EXPECT_EQ(cuts.front(), (Cut{0, 0}));
    for (std::size_t i = 1; i < cuts.size(); ++i) {
      EXPECT_GE(cuts[i].n, 1);
      EXPECT_LT(cuts[i - 1], cuts[i]);
    }
  }
}

TEST(Config, Validation) {
  OptimizerConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.refine_tol = 0.1;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.grid_step = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.threads = 0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(Constant, Units) {
  EXPECT_EQ(v2_constant(3, 1, LogBase::Two, ConstantUnit::Bits), 1.0);
  EXPECT_NEAR(v2_constant(3, 1, LogBase::E, ConstantUnit::Bits), std::log(2.0), 1e-15);
  EXPECT_EQ(v2_constant(3, 1, LogBase::E, ConstantUnit::Literal), 1.0);
  EXPECT_EQ(v2_constant(4, 0, LogBase::Two, ConstantUnit::Literal), 3.0);
}

TEST(Objective, SecondVariantNeedsNonemptyComplement) {
  const NetworkParams net{2, 1, 1, 1};
  EXPECT_THROW(lemma2_objective(net, {1, 2}, {0, 0, 0}, ObjectiveVariant::V2, LogBase::Two), InvalidArgument);
  EXPECT_NO_THROW(lemma2_objective(net, {1, 2}, {0, 0, 0}, ObjectiveVariant::V1, LogBase::Two));
}

TEST(Objective, HandComputedValue) {
  // N=1, cut (1,1), rho=0: 1/2 (log2(1) + 0 * log2(1+r2) + log2(1+r3))
  const NetworkParams net{1, 3, 5, 7};
  EXPECT_NEAR(lemma2_objective(net, {1, 1}, {0, 0, 0}, ObjectiveVariant::V1, LogBase::Two), 1.5, 1e-15);
  // cut (0,0): 1/2 log2(1 + r1)
  EXPECT_NEAR(lemma2_objective(net, {0, 0}, {0, 0, 0}, ObjectiveVariant::V1, LogBase::Two), 1.0, 1e-15);
}

TEST(Anchors, SingleRelayUnitGains) {
  const OptimizerConfig cfg;
  EXPECT_NEAR(nd_bound(1, 1, 1, cfg).value, 0.5, 1e-6);
  for (BoundVariant v : {BoundVariant::Lemma2V1, BoundVariant::Lemma2V2, BoundVariant::Lemma2Min})
    EXPECT_NEAR(layered_bound({1, 1, 1, 1}, v, cfg).value, 0.5, 1e-6) << to_string(v);
}

TEST(Anchors, NaturalLogUnits) {
  OptimizerConfig cfg;
  cfg.log_base = LogBase::E;
  const auto r = nd_bound(1, 1, 1, cfg);
  EXPECT_NEAR(r.value, 0.5 * std::log(2.0), 1e-6);
  EXPECT_EQ(r.log_base, LogBase::E);
}

TEST(Anchors, StrongFirstHopDiamond) {
  const OptimizerConfig cfg;
  const auto r = nd_bound(2, 1e6, 1, cfg);
  const double limit = 0.5 * std::log2(5.0);
  const double grid_err = limit - 0.5 * std::log2(1 + 2 * (2 - cfg.grid_step));
  EXPECT_LE(r.value, limit + 1e-12);
  EXPECT_LE(limit - r.value, 2 * grid_err);
  ASSERT_EQ(r.minimizer_pairs.size(), 1u);
  EXPECT_EQ(r.minimizer_pairs.front(), (Cut{2, 0}));
}

TEST(Bounds, ResultShape) {
  const auto r = layered_bound({2, 2, 1, 3}, BoundVariant::Lemma2V1, coarse());
  EXPECT_GE(r.value, 0.0);
  EXPECT_FALSE(r.minimizer_pairs.empty());
  EXPECT_TRUE(std::is_sorted(r.minimizer_pairs.begin(), r.minimizer_pairs.end()));
  EXPECT_EQ(r.meta.grid_step, 1e-2);
  EXPECT_GT(r.meta.evaluations, 0);
  EXPECT_LE(r.meta.final_spacing, r.meta.refine_tol);
}

TEST(Bounds, AtLeastBruteForceLattice) {
  const OptimizerConfig cfg = coarse();
  for (int N = 1; N <= 3; ++N)
    for (ObjectiveVariant v : {ObjectiveVariant::V1, ObjectiveVariant::V2}) {
      const NetworkParams net{N, 2, 1, 3};
      const auto r = layered_bound(net, v == ObjectiveVariant::V1 ? BoundVariant::Lemma2V1 : BoundVariant::Lemma2V2,
                                   cfg);
      EXPECT_GE(r.value, brute_zero_mode(net, v, cfg) - 1e-12) << N;
    }
}

TEST(Bounds, ReevaluationAtArgmax) {
  const OptimizerConfig cfg = coarse();
  for (int N = 1; N <= 3; ++N) {
    const NetworkParams net{N, 0.5, 4, 2};
    const auto r = layered_bound(net, BoundVariant::Lemma2V1, cfg);
    EXPECT_NEAR(min_over_cuts(net, r.argmax_corr, ObjectiveVariant::V1, cfg), r.value, cfg.refine_tol);
    for (const Cut& c : r.minimizer_pairs) {
      EXPECT_NEAR(lemma2_objective(net, c, r.argmax_corr, ObjectiveVariant::V1, cfg.log_base), r.value,
                  cfg.refine_tol);
    }
  }
}

TEST(Bounds, MonotoneInGains) {
  const OptimizerConfig cfg = coarse();
  double prev = -1;
  for (double r3 : {0.1, 0.5, 1.0, 4.0, 20.0}) {
    const double v = layered_bound({2, 1, 1, r3}, BoundVariant::Lemma2Min, cfg).value;
    EXPECT_GE(v, prev - cfg.refine_tol);
    prev = v;
  }
  prev = -1;
  for (double r1 : {0.1, 1.0, 10.0}) {
    const double v = nd_bound(3, r1, 2, cfg).value;
    EXPECT_GE(v, prev - cfg.refine_tol);
    prev = v;
  }
}

TEST(Bounds, MinIsSmallestComponent) {
  const auto r = layered_bound({2, 3, 1, 2}, BoundVariant::Lemma2Min, coarse());
  ASSERT_EQ(r.components.size(), 3u);
  double lo = HUGE_VAL;
  for (const auto& [v, value] : r.components) lo = std::min(lo, value);
  EXPECT_EQ(r.value, lo);
  EXPECT_EQ(r.variant, BoundVariant::Lemma2Min);
  EXPECT_NE(r.achieved_by, BoundVariant::Lemma2Min);
}

TEST(Bounds, JointNotBelowZeroMode) {
  OptimizerConfig joint = coarse();
  joint.rho12_mode = Rho12Mode::Joint;
  const NetworkParams net{2, 1, 1, 1};
  const double z = layered_bound(net, BoundVariant::Lemma2V1, coarse()).value;
  const double j = layered_bound(net, BoundVariant::Lemma2V1, joint).value;
  EXPECT_GE(j, z - 1e-6);
  EXPECT_NEAR(j, z, 1e-6);
}

TEST(Bounds, SupMinBelowMinSup) {
  const OptimizerConfig cfg = coarse();
  for (int N = 1; N <= 3; ++N)
    for (const NetworkParams& net : {NetworkParams{N, 1, 1, 1}, NetworkParams{N, 10, 0.1, 1}, NetworkParams{N, 0.3, 5, 5}}) {
      const double l1 = layered_bound(net, BoundVariant::Lemma2V1, cfg).value;
      const double l2 = layered_bound(net, BoundVariant::Lemma2V2, cfg).value;
      EXPECT_LE(l1, theorem2_variant(net, ObjectiveVariant::V1, cfg).value + cfg.refine_tol) << N;
      EXPECT_LE(l2, theorem2_variant(net, ObjectiveVariant::V2, cfg).value + cfg.refine_tol) << N;
      EXPECT_LE(std::min(l1, l2), theorem2_bound(net, cfg).value + cfg.refine_tol) << N;
    }
}

TEST(Bounds, TheoremPairTableMarksInapplicableSecondForm) {
  const auto t = theorem2_bound({2, 1, 1, 1}, coarse());
  bool saw_full = false;
  for (const auto& pe : t.pairs) {
    if (pe.cut.m == 2) {
      saw_full = true;
      EXPECT_FALSE(pe.v2.has_value());
    } else {
      EXPECT_TRUE(pe.v2.has_value());
    }
  }
  EXPECT_TRUE(saw_full);
}

TEST(Bounds, ThreadCountDoesNotChangeResult) {
  OptimizerConfig a = coarse();
  OptimizerConfig b = coarse();
  b.threads = 3;
  a.rho12_mode = b.rho12_mode = Rho12Mode::Joint;
  const NetworkParams net{3, 2, 0.5, 4};
  const auto ra = layered_bound(net, BoundVariant::Lemma2V1, a);
  const auto rb = layered_bound(net, BoundVariant::Lemma2V1, b);
  EXPECT_EQ(ra.value, rb.value);
  EXPECT_EQ(ra.argmax_corr, rb.argmax_corr);
  EXPECT_EQ(ra.minimizer_pairs, rb.minimizer_pairs);
}

TEST(SupPsi, MonotoneShortcut) {
  const OptimizerConfig cfg;
  const auto s = sup_psi(3, 3, cfg);
  EXPECT_EQ(s.method, "increasing");
  EXPECT_NEAR(s.value, 3 * (1 + 2 * (1 - cfg.refine_tol)), 1e-9);
  EXPECT_EQ(sup_psi(3, 0, cfg).value, 0.0);
}

TEST(SpecialMu, NonnegativeAndBoundedByComponents) {
  const auto r = special_mu_bound({3, 1, 1, 1}, coarse());
  EXPECT_GE(r.value, 0.0);
  EXPECT_EQ(r.variant, BoundVariant::SpecialMu);
  EXPECT_EQ(r.argmax_corr.rho12, -1.0);
}

TEST(Bounds, InvalidInputs) {
  EXPECT_THROW(nd_bound(0, 1, 1, {}), InvalidArgument);
  EXPECT_THROW(nd_bound(1, 0, 1, {}), InvalidArgument);
  EXPECT_THROW(layered_bound({1, 1, 1, -2}, BoundVariant::Lemma2V1, {}), InvalidArgument);
  EXPECT_THROW(layered_bound({1, 1, 1, 1}, BoundVariant::ND, {}), InvalidArgument);
}
