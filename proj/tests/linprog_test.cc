#include "empeq/linprog.h"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <optional>
#include <random>

namespace empeq {
namespace {

using Sense = LinearProgram::Sense;

TEST(Linprog, SmallOptimum) {
  // max x + y s.t. x + 2y <= 4, 3x + y <= 6.
  LinearProgram lp(2);
  lp.add_row({1, 2}, Sense::kLessEqual, 4);
  lp.add_row({3, 1}, Sense::kLessEqual, 6);
  lp.set_objective({1, 1});
  LpResult r = solve_exact(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, 2.8, 1e-15);
  EXPECT_NEAR(r.values[0], 1.6, 1e-15);
  EXPECT_NEAR(r.values[1], 1.2, 1e-15);
  EXPECT_EQ(r.objective_sign, 1);
}

TEST(Linprog, EqualityAndGreaterEqualRows) {
  // max -x - y s.t. x + y == 1, x >= 0.25.
  LinearProgram lp(2);
  lp.add_row({{0, 1.0}, {1, 1.0}}, Sense::kEqual, 1);
  lp.add_row({{0, 1.0}}, Sense::kGreaterEqual, 0.25);
  lp.set_objective({-1, -1});
  LpResult r = solve_exact(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_EQ(r.objective, -1.0);
  EXPECT_EQ(r.objective_sign, -1);
  EXPECT_GE(r.values[0], 0.25);
}

TEST(Linprog, Infeasible) {
  LinearProgram lp(1);
  lp.add_row({1}, Sense::kLessEqual, 1);
  lp.add_row({1}, Sense::kGreaterEqual, 2);
  EXPECT_EQ(solve_exact(lp).status, LpStatus::kInfeasible);
}

TEST(Linprog, Unbounded) {
  LinearProgram lp(2);
  lp.add_row({1, -1}, Sense::kLessEqual, 1);
  lp.set_objective({1, 0});
  EXPECT_EQ(solve_exact(lp).status, LpStatus::kUnbounded);
}

TEST(Linprog, ZeroOptimumSignIsExact) {
  // max t s.t. t <= x - 0.1 and x <= 0.1; optimum is exactly 0, which rounding
  // in floating point would blur.
  LinearProgram lp(2);
  lp.add_row({-1, 1}, Sense::kLessEqual, -0.1);
  lp.add_row({1, 0}, Sense::kLessEqual, 0.1);
  lp.set_objective({0, 1});
  LpResult r = solve_exact(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_EQ(r.objective_sign, 0);
}

TEST(Linprog, DegenerateCyclingExampleTerminates) {
  // Beale's example, which cycles under the textbook largest-coefficient rule.
  LinearProgram lp(4);
  lp.add_row({0.25, -60, -0.04, 9}, Sense::kLessEqual, 0);
  lp.add_row({0.5, -90, -0.02, 3}, Sense::kLessEqual, 0);
  lp.add_row({0, 0, 1, 0}, Sense::kLessEqual, 1);
  lp.set_objective({0.75, -150, 0.02, -6});
  LpResult r = solve_exact(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, 0.05, 1e-15);
}

// Optimum over the vertices of {x in [0, 10]^2, rows}: every pair of active
// constraints solved by Cramer's rule.
std::optional<double> vertex_oracle(const std::vector<std::array<double, 3>>& rows,
                                    std::array<double, 2> c) {
  std::vector<std::array<double, 3>> all = rows;
  all.push_back({-1, 0, 0});
  all.push_back({0, -1, 0});
  all.push_back({1, 0, 10});
  all.push_back({0, 1, 10});
  std::optional<double> best;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      const double det = all[i][0] * all[j][1] - all[i][1] * all[j][0];
      if (std::abs(det) < 1e-12) continue;
      const double x = (all[i][2] * all[j][1] - all[i][1] * all[j][2]) / det;
      const double y = (all[i][0] * all[j][2] - all[i][2] * all[j][0]) / det;
      bool ok = true;
      for (const auto& r : all) ok = ok && r[0] * x + r[1] * y <= r[2] + 1e-9;
      if (!ok) continue;
      const double v = c[0] * x + c[1] * y;
      if (!best || v > *best) best = v;
    }
  }
  return best;
}

TEST(Linprog, MatchesVertexEnumerationOnRandomPrograms) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> coef(-5, 5);
  int feasible = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::array<double, 3>> rows;
    const int m = 1 + trial % 4;
    for (int r = 0; r < m; ++r) {
      rows.push_back({double(coef(rng)), double(coef(rng)), double(coef(rng))});
    }
    std::array<double, 2> c = {double(coef(rng)), double(coef(rng))};
    LinearProgram lp(2);
    for (const auto& r : rows) lp.add_row({r[0], r[1]}, Sense::kLessEqual, r[2]);
    lp.add_row({1, 0}, Sense::kLessEqual, 10);
    lp.add_row({0, 1}, Sense::kLessEqual, 10);
    lp.set_objective({c[0], c[1]});
    LpResult res = solve_exact(lp);
    auto oracle = vertex_oracle(rows, c);
    if (!oracle) {
      EXPECT_EQ(res.status, LpStatus::kInfeasible) << "trial " << trial;
      continue;
    }
    ++feasible;
    ASSERT_EQ(res.status, LpStatus::kOptimal) << "trial " << trial;
    EXPECT_NEAR(res.objective, *oracle, 1e-9) << "trial " << trial;
    for (const auto& r : rows) {
      EXPECT_LE(r[0] * res.values[0] + r[1] * res.values[1], r[2] + 1e-9);
    }
  }
  EXPECT_GT(feasible, 100);
}

TEST(Linprog, StatusNames) {
  EXPECT_EQ(to_string(LpStatus::kOptimal), "optimal");
  EXPECT_EQ(to_string(LpStatus::kInfeasible), "infeasible");
  EXPECT_EQ(to_string(LpStatus::kUnbounded), "unbounded");
}

}  // namespace
}  // namespace empeq
