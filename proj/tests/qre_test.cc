#include "empeq/qre.h"

#include <gtest/gtest.h>

#include <cfloat>
#include <cmath>
#include <random>

#include "empeq/corpus.h"
#include "empeq/empirical.h"
#include "test_util.h"

namespace empeq {
namespace {

TEST(Logistic, TwoActionValue) {
  const double u[] = {1.0, 0.0};
  const auto p = logistic(u, 1.0);
  EXPECT_NEAR(p[0], std::exp(1.0) / (std::exp(1.0) + 1.0), 1e-15);
  EXPECT_NEAR(p[0] + p[1], 1.0, 1e-15);
}

TEST(Logistic, ZeroPrecisionIsUniformAndLargeStaysInterior) {
  const double u[] = {5.0, -3.0, 2.0};
  for (double p : logistic(u, 0.0)) EXPECT_DOUBLE_EQ(p, 1.0 / 3.0);
  const auto sharp = logistic(u, 1e6);
  EXPECT_EQ(sharp[0], 1.0);
  EXPECT_GE(sharp[1], DBL_MIN);
  EXPECT_GT(sharp[2], 0.0);
  EXPECT_THROW(logistic(u, -1.0), std::invalid_argument);
  EXPECT_THROW(logistic_qrf(std::nan("")), std::invalid_argument);
}

TEST(Logistic, ShiftInvariant) {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> v(-10, 10);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> u(4), w(4);
    const double shift = v(rng);
    for (std::size_t a = 0; a < 4; ++a) w[a] = (u[a] = v(rng)) + shift;
    const auto p = logistic(u, 2.0), q = logistic(w, 2.0);
    for (std::size_t a = 0; a < 4; ++a) EXPECT_NEAR(p[a], q[a], 1e-12);
  }
}

// Symmetric logit equilibrium of gamma1: p = 1 / (1 + exp(-lambda p)), found
// by bisection on the scalar equation.
double gamma1_logit_oracle(double lambda) {
  double lo = 0.5, hi = 1.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (1.0 / (1.0 + std::exp(-lambda * mid)) > mid) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

TEST(Qre, GammaOneMatchesScalarOracle) {
  Game g = corpus::gamma1();
  for (double lambda : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    QrePoint q = qre_fixed_point(g, logistic_qrf(lambda), MixedProfile::uniform(g));
    ASSERT_TRUE(q.converged) << lambda;
    EXPECT_LE(q.residual, 1e-10);
    EXPECT_EQ(q.lambda, lambda);
    EXPECT_NEAR(q.profile.prob(0, 0), gamma1_logit_oracle(lambda), 1e-9) << lambda;
    EXPECT_NEAR(q.profile.prob(1, 0), gamma1_logit_oracle(lambda), 1e-9) << lambda;
  }
}

TEST(QreProperty, LogitEquilibriaArePayoffMonotone) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    Game g = testing::random_game(rng, {2 + trial % 3, 2 + (trial / 3) % 3});
    for (double lambda : {0.5, 1.0, 2.0}) {
      QrePoint q = qre_fixed_point(g, logistic_qrf(lambda), MixedProfile::uniform(g));
      if (!q.converged) continue;
      EXPECT_TRUE(q.profile.is_interior());
      EXPECT_TRUE(is_payoff_monotone(g, q.profile)) << trial << " " << lambda;
    }
  }
}

TEST(FixedPoint, ContractionAndResidual) {
  // F(x) = (x + (0.2, 0.8)) / 2 on one simplex; fixed point (0.2, 0.8).
  ProfileMap f = [](const MixedProfile& s) {
    return std::vector<std::vector<double>>{
        {(s.prob(0, 0) + 0.2) / 2, (s.prob(0, 1) + 0.8) / 2}};
  };
  auto r = solve_fixed_point(f, MixedProfile({{0.9, 0.1}}));
  ASSERT_TRUE(r.converged);
  // Residual r bounds the error by r / (1 - 1/2).
  EXPECT_LE(fixed_point_residual(f, r.profile), 1e-10);
  EXPECT_NEAR(r.profile.prob(0, 0), 0.2, 2e-10);
}

TEST(FixedPoint, OscillatingMapConverges) {
  // F(x) = 1 - x (on the first coordinate) oscillates undamped; damping or
  // Newton reaches the midpoint.
  ProfileMap f = [](const MixedProfile& s) {
    return std::vector<std::vector<double>>{{s.prob(0, 1), s.prob(0, 0)}};
  };
  auto r = solve_fixed_point(f, MixedProfile({{0.9, 0.1}}));
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.profile.prob(0, 0), 0.5, 1e-9);
}

TEST(FixedPoint, MatchingPenniesLogitAtHighPrecision) {
  Game g({"A", "B"}, {{"h", "t"}, {"h", "t"}}, {1, -1, -1, 1, -1, 1, 1, -1});
  QrePoint q = qre_fixed_point(g, logistic_qrf(50.0), MixedProfile({{0.9, 0.1}, {0.2, 0.8}}));
  ASSERT_TRUE(q.converged);
  EXPECT_NEAR(q.profile.prob(0, 0), 0.5, 1e-8);
  EXPECT_NEAR(q.profile.prob(1, 0), 0.5, 1e-8);
}

TEST(Schedule, DefaultLayout) {
  const auto s = default_lambda_schedule();
  ASSERT_EQ(s.size(), 41u);
  EXPECT_EQ(s[0], 0.0);
  EXPECT_EQ(s[1], 1e-2);
  EXPECT_EQ(s.back(), 1e3);
  for (std::size_t j = 2; j < s.size(); ++j) {
    EXPECT_GT(s[j], s[j - 1]);
    EXPECT_NEAR(std::log10(s[j]) - std::log10(s[j - 1]), 5.0 / 39.0, 1e-12);
  }
  EXPECT_THROW(default_lambda_schedule(0.001), std::invalid_argument);
}

TEST(LogitPath, GammaOneSelectsPayoffDominantEquilibrium) {
  Game g = corpus::gamma1();
  LogitPath path = trace_logit_path(g, default_lambda_schedule());
  ASSERT_TRUE(path.nearest.has_value());
  const auto& last = path.points.back();
  EXPECT_EQ(last.lambda, 1e3);
  EXPECT_NEAR(last.profile.prob(0, 0), 1.0, 1e-6);
  EXPECT_LT(path.nearest->distance, 1e-6);
  EXPECT_EQ(path.nearest->profile.prob(0, 0), 1.0);
  for (std::size_t j = 1; j < path.points.size(); ++j) {
    EXPECT_GT(path.points[j].lambda, path.points[j - 1].lambda);
    EXPECT_TRUE(path.points[j].converged);
  }
}

TEST(LogitPath, CorpusPathsEndNearEquilibria) {
  for (const Game& g : {corpus::psi(), corpus::phi(), corpus::gamma2c(2, 2)}) {
    LogitPath path = trace_logit_path(g, default_lambda_schedule());
    ASSERT_TRUE(path.nearest.has_value());
    EXPECT_LT(path.nearest->distance, 1e-2);
    EXPECT_LE(nash_defect(g, path.points.back().profile), 1e-2);
  }
}

TEST(LogitPath, RejectsBadSchedules) {
  Game g = corpus::gamma1();
  EXPECT_THROW(trace_logit_path(g, {1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(trace_logit_path(g, {0.0, 2.0, 1.0}), std::invalid_argument);
}

TEST(Perturbed, CloseInteriorAndMonotone) {
  Game g = corpus::psi();
  MixedProfile mu({{0.5, 0.5}, {1.0, 0.0}});
  // P1's tie is split by an amount proportional to zeta times the
  // utility gap, far below the stopping tolerance at small zeta.
  for (double zeta : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    PerturbedPoint p = perturbed_monotone_point(g, mu, zeta);
    EXPECT_TRUE(p.interior);
    EXPECT_TRUE(p.verdict) << zeta;
    EXPECT_LE(p.distance, 2 * zeta);
    EXPECT_LE(p.residual, 1e-10);
  }
}

TEST(Perturbed, ThresholdDependsOnMu) {
  // P2 prefers b2 over b1 by about 1e-3 under mu. Perturbing by zeta = 1e-2
  // reverses that utility order while b2 stays more likely; smaller zeta
  // keeps it.
  Game g = corpus::gamma2c(2, 2);
  MixedProfile mu({{0.452202, 0.321223, 0.226575}, {0.175307, 0.804154, 0.020539}});
  ASSERT_TRUE(is_weakly_payoff_monotone(g, mu));
  EXPECT_FALSE(perturbed_monotone_point(g, mu, 1e-2).verdict);
  EXPECT_TRUE(perturbed_monotone_point(g, mu, 1e-3).verdict);
  EXPECT_TRUE(perturbed_monotone_point(g, mu, 1e-4).verdict);
}

TEST(PerturbedProperty, SmallZetaOnCorpusSamples) {
  std::mt19937_64 rng(0);
  for (const Game& g : {corpus::gamma1(), corpus::psi(), corpus::gamma2c(2, 2), corpus::phi()}) {
    for (int drawn = 0; drawn < 1000;) {
      const auto mu = sample_admissible_profile(g, 1.0, rng);
      if (!mu) continue;
      ++drawn;
      for (double zeta : {1e-4, 1e-5, 1e-6}) {
        const PerturbedPoint p = perturbed_monotone_point(g, *mu, zeta);
        EXPECT_TRUE(p.interior);
        EXPECT_TRUE(p.verdict) << g.player_name(0) << " sample " << drawn << " zeta " << zeta;
        EXPECT_LE(p.distance, 2 * zeta);
      }
    }
  }
}

TEST(Perturbed, Validation) {
  Game g = corpus::gamma1();
  MixedProfile bad({{0.2, 0.8}, {0.9, 0.1}});
  EXPECT_THROW(perturbed_monotone_point(g, bad, 0.01), std::invalid_argument);
  EXPECT_THROW(perturbed_monotone_point(g, MixedProfile::uniform(g), 0.0),
               std::invalid_argument);
  EXPECT_THROW(perturbed_monotone_point(g, MixedProfile::uniform(g), 0.01, 0.0),
               std::invalid_argument);
}

TEST(Audit, LogisticIsRegularAndReversalIsCaught) {
  EXPECT_TRUE(qrf_regularity_audit(logistic_qrf(1.0), 500, 7).clean());
  Qrf reversed("reversed", 0.0, [](std::size_t, std::span<const double> u) {
    std::vector<double> neg(u.begin(), u.end());
    for (double& v : neg) v = -v;
    return logistic(neg, 1.0);
  });
  const auto audit = qrf_regularity_audit(reversed, 100, 7);
  EXPECT_FALSE(audit.clean());
  EXPECT_EQ(audit.samples, 100);
  Qrf hard("argmax", 0.0, [](std::size_t, std::span<const double> u) {
    return logistic(u, 1e9);
  });
  EXPECT_FALSE(qrf_regularity_audit(hard, 100, 7).clean());
}

}  // namespace
}  // namespace empeq
