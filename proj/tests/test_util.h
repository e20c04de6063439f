#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "empeq/game.h"
#include "empeq/monotone.h"

namespace empeq::testing {

// Payoffs uniform in [lo, hi]; players P1.. and actions x1...
inline Game random_game(std::mt19937_64& rng, const std::vector<std::size_t>& shape,
                        double lo = -10.0, double hi = 10.0) {
  std::vector<std::string> players;
  std::vector<std::vector<std::string>> actions;
  std::size_t profiles = 1;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    players.push_back("P" + std::to_string(i + 1));
    std::vector<std::string> labels;
    for (std::size_t a = 0; a < shape[i]; ++a) {
      labels.push_back("x" + std::to_string(a + 1));
    }
    actions.push_back(std::move(labels));
    profiles *= shape[i];
  }
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> payoffs(profiles * shape.size());
  for (double& p : payoffs) p = u(rng);
  return Game(std::move(players), std::move(actions), std::move(payoffs));
}

// Integer payoffs in [lo, hi], which produce ties and degeneracies.
inline Game random_integer_game(std::mt19937_64& rng,
                                const std::vector<std::size_t>& shape, int lo,
                                int hi) {
  Game g = random_game(rng, shape);
  std::uniform_int_distribution<int> u(lo, hi);
  std::vector<double> payoffs(g.payoffs().begin(), g.payoffs().end());
  for (double& p : payoffs) p = u(rng);
  std::vector<std::vector<std::string>> actions;
  for (std::size_t i = 0; i < g.num_players(); ++i) actions.push_back(g.actions(i));
  return Game(g.players(), std::move(actions), std::move(payoffs));
}

inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t k) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> x(k);
  double sum = 0.0;
  for (double& v : x) sum += (v = e(rng));
  for (double& v : x) v /= sum;
  return x;
}

inline MixedProfile random_profile(std::mt19937_64& rng, const Game& game) {
  std::vector<std::vector<double>> s;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    s.push_back(random_simplex(rng, game.num_actions(i)));
  }
  return MixedProfile(std::move(s));
}

// Random interior payoff-monotone profile. Each pass sorts every player's
// probabilities into the order of the utilities they currently face; sorting
// one player moves the others' utilities, so passes repeat until the profile
// is monotone and draws that do not settle are discarded.
inline MixedProfile random_monotone_profile(std::mt19937_64& rng, const Game& game) {
  for (;;) {
    MixedProfile s = random_profile(rng, game);
    for (int pass = 0; pass < 20; ++pass) {
      for (std::size_t i = 0; i < game.num_players(); ++i) {
        const auto u = expected_utility(game, s, i);
        std::vector<double> p(s.strategy(i).begin(), s.strategy(i).end());
        std::sort(p.begin(), p.end());
        std::vector<std::size_t> idx(u.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return u[a] < u[b]; });
        std::vector<double> q(u.size());
        for (std::size_t r = 0; r < idx.size(); ++r) q[idx[r]] = p[r];
        s = s.with_strategy(i, q);
      }
      if (is_payoff_monotone(game, s)) return s;
    }
  }
}

}  // namespace empeq::testing
