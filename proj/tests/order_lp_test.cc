#include "empeq/order_lp.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "empeq/corpus.h"

namespace empeq {
namespace {

TEST(WeakOrders, FubiniCounts) {
  const std::size_t expected[] = {1, 1, 3, 13, 75, 541};
  for (std::size_t k = 0; k <= 5; ++k) {
    const auto orders = enumerate_weak_orders(k);
    EXPECT_EQ(orders.size(), expected[k]) << k;
    std::set<WeakOrder> distinct(orders.begin(), orders.end());
    EXPECT_EQ(distinct.size(), orders.size());
  }
}

TEST(WeakOrders, LevelsAreContiguous) {
  for (const auto& order : enumerate_weak_orders(4)) {
    std::set<int> levels(order.begin(), order.end());
    EXPECT_EQ(*levels.begin(), 0);
    EXPECT_EQ(*levels.rbegin(), static_cast<int>(levels.size()) - 1);
  }
}

TEST(WeakOrders, InducedOrderMergesNearTies) {
  const double v[] = {0.3, 0.1, 0.3 + 1e-12, -2.0};
  EXPECT_EQ(weak_order_of(v, 1e-9), (WeakOrder{2, 1, 2, 0}));
  EXPECT_EQ(weak_order_of(v, 0.0), (WeakOrder{2, 1, 3, 0}));
  const double chain[] = {0.0, 0.6e-9, 1.2e-9};
  EXPECT_EQ(weak_order_of(chain, 1e-9), (WeakOrder{0, 0, 0}));
}

TEST(OpponentRows, BimatrixLayout) {
  Game g = corpus::psi();
  // Player 0's strategy enters U_2(x, b) = sum_a x_a u2(a, b).
  const auto rows = opponent_utility_rows(g, 0);
  EXPECT_EQ(rows, (std::vector<std::vector<double>>{{2, 3}, {1, 0}}));
  const auto cols = opponent_utility_rows(g, 1);
  EXPECT_EQ(cols, (std::vector<std::vector<double>>{{2, 2}, {2, 0}}));
}

TEST(StrategyLp, InteriorOrderAlwaysFeasible) {
  for (const auto& order : enumerate_weak_orders(4)) {
    StrategyLp lp(4);
    lp.require_interior();
    lp.require_order(order);
    const auto sol = lp.solve();
    ASSERT_TRUE(sol.feasible);
    EXPECT_GT(sol.margin, 0.0);
    for (std::size_t a = 0; a < 4; ++a) {
      EXPECT_GT(sol.x[a], 0.0);
      for (std::size_t b = 0; b < 4; ++b) {
        if (order[a] == order[b]) EXPECT_DOUBLE_EQ(sol.x[a], sol.x[b]);
        if (order[a] > order[b]) EXPECT_GT(sol.x[a], sol.x[b]);
      }
    }
  }
}

TEST(StrategyLp, BoxExcludesFarOrders) {
  const double center[] = {0.9, 0.05, 0.05};
  StrategyLp lp(3);
  lp.require_box(center, 0.1);
  lp.require_order({0, 1, 1});
  EXPECT_FALSE(lp.solve().feasible);
  StrategyLp ok(3);
  ok.require_box(center, 0.1);
  ok.require_order({2, 1, 0});
  EXPECT_TRUE(ok.solve().feasible);
}

TEST(StrategyLp, ZeroMarginIsInfeasible) {
  // A strict order between two actions pinned equal by the box.
  const double center[] = {0.5, 0.5};
  StrategyLp lp(2);
  lp.require_box(center, 0.0);
  lp.require_order({1, 0});
  EXPECT_FALSE(lp.solve().feasible);
}

// Two-action oracle. With x = (p, 1 - p) every row is affine in p, so the
// order holds on a union of points and open intervals between the roots of
// pairwise differences; testing every root and every midpoint is exact.
bool scan_oracle(const std::vector<std::vector<double>>& rows, const WeakOrder& order) {
  std::vector<double> cuts = {0.0, 1.0};
  for (std::size_t b = 0; b < rows.size(); ++b) {
    for (std::size_t c = b + 1; c < rows.size(); ++c) {
      const double slope = (rows[b][0] - rows[b][1]) - (rows[c][0] - rows[c][1]);
      const double offset = rows[b][1] - rows[c][1];
      if (slope != 0.0) {
        const double root = -offset / slope;
        if (root > 0.0 && root < 1.0) cuts.push_back(root);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> candidates;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (i > 0) candidates.push_back(cuts[i]);
    candidates.push_back(0.5 * (cuts[i] + cuts[i + 1]));
  }
  for (double p : candidates) {
    bool ok = true;
    for (std::size_t b = 0; b < rows.size(); ++b) {
      for (std::size_t c = 0; c < rows.size(); ++c) {
        const double vb = rows[b][0] * p + rows[b][1] * (1 - p);
        const double vc = rows[c][0] * p + rows[c][1] * (1 - p);
        if (order[b] == order[c]) ok = ok && std::abs(vb - vc) < 1e-12;
        if (order[b] > order[c]) ok = ok && vb > vc + 1e-12;
      }
    }
    if (ok) return true;
  }
  return false;
}

TEST(StrategyLp, LinearOrderMatchesScanOracle) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::vector<double>> rows(3, std::vector<double>(2));
    for (auto& r : rows) {
      for (double& v : r) v = coef(rng);
    }
    for (const auto& order : enumerate_weak_orders(3)) {
      StrategyLp lp(2);
      lp.require_interior();
      lp.require_linear_order(order, rows);
      EXPECT_EQ(lp.solve().feasible, scan_oracle(rows, order)) << "trial " << trial;
    }
  }
}

TEST(StrategyLp, MWeakConstraint) {
  // Actions ranked 1 over 0 need x_1 >= m x_0 with x_0 pinned to 0.75.
  // Dyadic values keep the pinned box exactly on the simplex.
  const double center[] = {0.75, 0.25};
  for (double m : {0.0, 0.25, 0.5}) {
    StrategyLp lp(2);
    lp.require_box(center, 0.0);
    lp.require_m_weak({0, 1}, m);
    EXPECT_EQ(lp.solve().feasible, 0.25 >= m * 0.75) << m;
  }
}

TEST(StrategyLp, RatioAndCap) {
  StrategyLp lp(2);
  lp.require_interior();
  lp.require_ratio(0, 1, 0.1);
  lp.require_cap(1, 0.9);
  EXPECT_FALSE(lp.solve().feasible);
  StrategyLp ok(2);
  ok.require_interior();
  ok.require_ratio(0, 1, 0.2);
  ok.require_cap(1, 0.9);
  EXPECT_TRUE(ok.solve().feasible);
}

}  // namespace
}  // namespace empeq
