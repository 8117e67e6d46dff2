#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "relaybounds/covariance.hpp"
#include "relaybounds/errors.hpp"

using namespace relaybounds;

TEST(NetworkParams, ValidateNamesField) {
  NetworkParams p{0, 1, 1, 1};
  try {
    p.validate();
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("relays"), std::string::npos);
  }
  p = {1, 1, -1, 1};
  try {
    p.validate();
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("r2"), std::string::npos);
  }
}

TEST(BuildCov, Structure) {
  const auto q = build_cov(2, {0.3, -0.2, 0.1});
  ASSERT_EQ(q.dim(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(q(i, i), 1.0);
  EXPECT_EQ(q(0, 1), 0.3);
  EXPECT_EQ(q(2, 3), -0.2);
  EXPECT_EQ(q(0, 2), 0.1);
  EXPECT_EQ(q(1, 3), 0.1);
  EXPECT_EQ(q(1, 2), 0.1);
}

TEST(Zeta, Examples) {
  const auto z1 = zeta_interval(1, 0.7, -0.4);
  EXPECT_EQ(z1.lo, -1.0);
  EXPECT_EQ(z1.hi, 1.0);
  const auto z2 = zeta_interval(2, 0.5, 0.0);
  EXPECT_DOUBLE_EQ(z2.hi, 0.5);  // min(1.5/2, 1/2)
  EXPECT_TRUE(z2.contains(-1.0));
  EXPECT_FALSE(z2.contains(0.6));
}

TEST(Feasibility, Examples) {
  EXPECT_TRUE(is_feasible(2, {0, 0, 0.5}));
  // aggregate-block eigenvalue 1 - 2 * 0.6 < 0
  EXPECT_FALSE(is_feasible(2, {0, 0, 0.6}));
  EXPECT_FALSE(is_feasible(3, {-0.6, 0, 0}));
  EXPECT_TRUE(is_feasible(3, {-0.5, 0, 0}));
  EXPECT_TRUE(is_feasible(1, {0, 0, -1}));
}

TEST(Feasibility, PsdSlice) {
  const auto s = psd_rho12_interval(2, 0, 0);
  EXPECT_DOUBLE_EQ(s.lo, -0.5);
  EXPECT_DOUBLE_EQ(s.hi, 0.5);
  EXPECT_TRUE(psd_rho12_interval(3, -0.6, 0).empty());
}

TEST(Feasibility, BoxAndPsdDisagree) {
  // rho12 = -1 lies in the box but not in the PSD region for N = 2
  const auto c = compare_regions(2, {0, 0, -1});
  EXPECT_TRUE(c.in_box);
  EXPECT_FALSE(c.psd);
}

TEST(Eigen, ClosedFormMatchesDenseRandom) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 300; ++t) {
    const int N = 1 + t % 8;
    const CorrelationParams c{u(gen), u(gen), u(gen)};
    const auto closed = eigenvalues_closed_sorted(N, c);
    const auto dense = linalg::eigen_sym(build_cov(N, c));
    ASSERT_EQ(closed.size(), dense.size());
    for (std::size_t i = 0; i < dense.size(); ++i) EXPECT_NEAR(closed[i], dense[i], 1e-9);
  }
}

TEST(Eigen, MultiplicitiesSumToDimension) {
  for (int N = 1; N <= 6; ++N) {
    int total = 0;
    for (const auto& e : eigenvalues_closed(N, {0.2, 0.4, 0.1})) total += e.multiplicity;
    EXPECT_EQ(total, 2 * N);
  }
}

TEST(Eigen, ListedFormsAreEigenvaluesOnlyWhenIntraCorrelationsEqual) {
  // rho1 = rho2 = 0.5, rho12 = 0.25, N = 2: aggregate block [[1.5, .5], [.5, 1.5]] has 1 and 2
  const auto listed = eigenvalues_listed_form(2, {0.5, 0.5, 0.25});
  for (double l : listed) EXPECT_NEAR(l, 1.0, 1e-15);
  const auto dense = linalg::eigen_sym(build_cov(2, {0.5, 0.5, 0.25}));
  EXPECT_NEAR(dense.back(), 2.0, 1e-12);

  const CorrelationParams off{0.5, 0.1, 0.2};
  const auto ev = linalg::eigen_sym(build_cov(3, off));
  const auto lf = eigenvalues_listed_form(3, off);
  for (double l : lf) {
    const double gap = std::abs(*std::min_element(ev.begin(), ev.end(), [&](double a, double b) {
      return std::abs(a - l) < std::abs(b - l);
    }) - l);
    EXPECT_GT(gap, 1e-3);
  }
}

TEST(Eigen, MinEigenvalue) {
  EXPECT_NEAR(min_eigenvalue(2, {0, 0, 0.6}), -0.2, 1e-15);
}
