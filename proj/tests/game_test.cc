#include "empeq/game.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "empeq/corpus.h"
#include "test_util.h"

namespace empeq {
namespace {

// Sum over every pure profile, independent of the library's contraction.
double brute_utility(const Game& g, const MixedProfile& s, std::size_t player,
                     std::size_t action) {
  double total = 0.0;
  for (std::size_t idx = 0; idx < g.num_profiles(); ++idx) {
    const auto digits = g.decode_profile(idx);
    if (digits[player] != action) continue;
    double w = 1.0;
    for (std::size_t j = 0; j < g.num_players(); ++j) {
      if (j != player) w *= s.prob(j, digits[j]);
    }
    total += w * g.payoff(idx, player);
  }
  return total;
}

TEST(Game, MixedRadixPlayerZeroMostSignificant) {
  Game g = corpus::gamma2c(2, 2);
  EXPECT_EQ(g.num_profiles(), 9u);
  EXPECT_EQ(g.stride(0), 3u);
  EXPECT_EQ(g.stride(1), 1u);
  const std::size_t p[] = {2, 0};
  EXPECT_EQ(g.profile_index(p), 6u);
  EXPECT_EQ(g.decode_profile(5), (std::vector<std::size_t>{1, 2}));
  EXPECT_DOUBLE_EQ(g.bimatrix(0, 0, 2), -9.0);
  EXPECT_DOUBLE_EQ(g.bimatrix(1, 2, 0), -9.0);
}

TEST(Game, RejectsMalformedConstruction) {
  EXPECT_THROW(Game({}, {}, {}), std::invalid_argument);
  EXPECT_THROW(Game({"A", "A"}, {{"x"}, {"y"}}, {0, 0}), std::invalid_argument);
  EXPECT_THROW(Game({"A"}, {{"x", "x"}}, {0, 0}), std::invalid_argument);
  EXPECT_THROW(Game({"A"}, {{"x", "y"}}, {0}), std::invalid_argument);
  EXPECT_THROW(Game({"A"}, {{}}, {}), std::invalid_argument);
  EXPECT_THROW(Game({"A"}, {{"x"}}, {std::nan("")}), std::invalid_argument);
}

TEST(MixedProfile, ClampsTinyNegativesAndRejectsBadVectors) {
  MixedProfile p({{1.0 + 1e-13, -1e-13}});
  EXPECT_EQ(p.prob(0, 1), 0.0);
  EXPECT_NEAR(p.prob(0, 0), 1.0, 1e-15);
  EXPECT_THROW(MixedProfile({{1.1, -0.1}}), std::invalid_argument);
  EXPECT_THROW(MixedProfile({{0.5, 0.4}}), std::invalid_argument);
  EXPECT_THROW(MixedProfile(std::vector<std::vector<double>>{{}}), std::invalid_argument);
}

TEST(MixedProfile, SupportInteriorAndDistance) {
  MixedProfile a({{0.5, 0.5, 0.0}, {1.0}});
  EXPECT_FALSE(a.is_interior());
  EXPECT_EQ(a.support(0), (std::vector<std::size_t>{0, 1}));
  MixedProfile b({{0.2, 0.3, 0.5}, {1.0}});
  EXPECT_TRUE(b.is_interior());
  EXPECT_DOUBLE_EQ(a.distance(b), 0.5);
}

TEST(ExpectedUtility, CorpusExamples) {
  Game psi = corpus::psi();
  MixedProfile s({{0.25, 0.75}, {0.5, 0.5}});
  EXPECT_EQ(expected_utility(psi, s, 0), (std::vector<double>{2.0, 1.0}));
  // U2(b1) = 0.25*2 + 0.75*3, U2(b2) = 0.25*1.
  EXPECT_EQ(expected_utility(psi, s, 1), (std::vector<double>{2.75, 0.25}));
  EXPECT_DOUBLE_EQ(expected_payoff(psi, s, 1), 1.5);
}

TEST(ExpectedUtility, MatchesBruteForceOnRandomGames) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::size_t> shape;
    const std::size_t n = 1 + trial % 4;
    for (std::size_t i = 0; i < n; ++i) shape.push_back(1 + (trial + 3 * i) % 4);
    Game g = testing::random_game(rng, shape);
    MixedProfile s = testing::random_profile(rng, g);
    for (std::size_t i = 0; i < n; ++i) {
      const auto u = expected_utility(g, s, i);
      double mixed = 0.0;
      for (std::size_t a = 0; a < g.num_actions(i); ++a) {
        EXPECT_NEAR(u[a], brute_utility(g, s, i, a), 1e-12);
        mixed += s.prob(i, a) * u[a];
      }
      EXPECT_NEAR(expected_payoff(g, s, i), mixed, 1e-12);
    }
  }
}

TEST(ExpectedUtility, AffineInOwnPayoffs) {
  std::mt19937_64 rng(3);
  Game g = testing::random_game(rng, {3, 2, 2});
  std::vector<double> scaled(g.payoffs().begin(), g.payoffs().end());
  for (double& x : scaled) x = 3.0 * x + 5.0;
  std::vector<std::vector<std::string>> actions;
  for (std::size_t i = 0; i < 3; ++i) actions.push_back(g.actions(i));
  Game h(g.players(), actions, scaled);
  MixedProfile s = testing::random_profile(rng, g);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto u = expected_utility(g, s, i);
    const auto v = expected_utility(h, s, i);
    for (std::size_t a = 0; a < u.size(); ++a) EXPECT_NEAR(v[a], 3 * u[a] + 5, 1e-11);
  }
  EXPECT_NEAR(nash_defect(h, s), 3 * nash_defect(g, s), 1e-11);
}

TEST(ExpectedUtility, RejectsIncompatibleProfile) {
  Game g = corpus::gamma1();
  EXPECT_THROW(expected_utility(g, MixedProfile(std::vector<std::vector<double>>{{1.0}}), 0), std::invalid_argument);
  EXPECT_THROW(expected_utility(g, MixedProfile({{1.0, 0.0}, {0.2, 0.3, 0.5}}), 0),
               std::invalid_argument);
}

TEST(Nash, DefectOnCorpus) {
  Game g = corpus::gamma1();
  const std::size_t a2b2[] = {1, 1};
  EXPECT_EQ(nash_defect(g, MixedProfile::pure(g, a2b2)), 0.0);
  EXPECT_DOUBLE_EQ(nash_defect(g, MixedProfile::uniform(g)), 0.25);
  EXPECT_EQ(best_responses(g, MixedProfile::uniform(g), 0),
            (std::vector<std::size_t>{0}));
}

TEST(Dominance, CorpusRelations) {
  DominanceReport g1 = weak_dominance(corpus::gamma1());
  EXPECT_TRUE(g1.dominates(0, 0, 1));
  EXPECT_TRUE(g1.dominates(1, 0, 1));
  EXPECT_FALSE(g1.dominates(0, 1, 0));

  DominanceReport psi = weak_dominance(corpus::psi());
  EXPECT_TRUE(psi.dominates(0, 0, 1));
  EXPECT_TRUE(psi.dominates(1, 0, 1));

  DominanceReport g2 = weak_dominance(corpus::gamma2c(2, 2));
  for (std::size_t p = 0; p < 2; ++p) {
    EXPECT_TRUE(g2.dominates(p, 1, 2));
    EXPECT_TRUE(g2.is_dominated(p, 2));
    EXPECT_FALSE(g2.is_dominated(p, 0));
    EXPECT_FALSE(g2.is_dominated(p, 1));
  }

  DominanceReport phi = weak_dominance(corpus::phi());
  EXPECT_TRUE(phi.is_dominated(0, 2));
  EXPECT_TRUE(phi.is_dominated(1, 2));
}

TEST(Dominance, MatchesDefinitionOnRandomIntegerGames) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    Game g = testing::random_integer_game(rng, {3, 3}, 0, 2);
    DominanceReport r = weak_dominance(g);
    for (std::size_t p = 0; p < 2; ++p) {
      for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = 0; b < 3; ++b) {
          if (a == b) continue;
          bool geq = true, strict = false;
          for (std::size_t o = 0; o < 3; ++o) {
            const double ua = p == 0 ? g.bimatrix(0, a, o) : g.bimatrix(1, o, a);
            const double ub = p == 0 ? g.bimatrix(0, b, o) : g.bimatrix(1, o, b);
            geq = geq && ua >= ub;
            strict = strict || ua > ub;
          }
          EXPECT_EQ(r.dominates(p, a, b), geq && strict)
              << "trial " << trial << " player " << p << " " << a << " over " << b;
        }
      }
    }
  }
}

}  // namespace
}  // namespace empeq
