#include "empeq/game.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace empeq {
namespace {

std::vector<double> normalized(std::vector<double> v, std::size_t player) {
  if (v.empty()) {
    throw std::invalid_argument("player " + std::to_string(player) +
                                " has an empty strategy");
  }
  double sum = 0.0;
  for (double& p : v) {
    if (!std::isfinite(p)) {
      throw std::invalid_argument("non-finite probability for player " +
                                  std::to_string(player));
    }
    if (p < -MixedProfile::kSimplexTolerance) {
      throw std::invalid_argument("negative probability " + std::to_string(p) +
                                  " for player " + std::to_string(player));
    }
    if (p < 0.0) p = 0.0;
    sum += p;
  }
  if (std::abs(sum - 1.0) > MixedProfile::kSumTolerance) {
    throw std::invalid_argument("probabilities of player " +
                                std::to_string(player) + " sum to " +
                                std::to_string(sum));
  }
  if (sum != 1.0) {
    for (double& p : v) p /= sum;
  }
  return v;
}

}  // namespace

Game::Game(std::vector<std::string> players,
           std::vector<std::vector<std::string>> actions,
           std::vector<double> payoffs)
    : players_(std::move(players)),
      actions_(std::move(actions)),
      payoffs_(std::move(payoffs)) {
  if (players_.empty()) throw std::invalid_argument("game has no players");
  if (actions_.size() != players_.size()) {
    throw std::invalid_argument("action sets do not match player count");
  }
  for (std::size_t i = 0; i < players_.size(); ++i) {
    if (actions_[i].empty()) {
      throw std::invalid_argument("player " + players_[i] + " has no actions");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (players_[i] == players_[j]) {
        throw std::invalid_argument("duplicate player " + players_[i]);
      }
    }
    for (std::size_t a = 0; a < actions_[i].size(); ++a) {
      for (std::size_t b = 0; b < a; ++b) {
        if (actions_[i][a] == actions_[i][b]) {
          throw std::invalid_argument("duplicate action " + actions_[i][a] +
                                      " for player " + players_[i]);
        }
      }
    }
  }
  strides_.assign(players_.size(), 1);
  for (std::size_t i = players_.size(); i-- > 0;) {
    strides_[i] = num_profiles_;
    num_profiles_ *= actions_[i].size();
  }
  if (payoffs_.size() != num_profiles_ * players_.size()) {
    throw std::invalid_argument(
        "payoff tensor has " + std::to_string(payoffs_.size()) +
        " entries, expected " + std::to_string(num_profiles_ * players_.size()));
  }
  for (double u : payoffs_) {
    if (!std::isfinite(u)) throw std::invalid_argument("non-finite payoff");
  }
}

std::optional<std::size_t> Game::find_player(std::string_view name) const {
  for (std::size_t i = 0; i < players_.size(); ++i) {
    if (players_[i] == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Game::find_action(std::size_t player,
                                             std::string_view name) const {
  const auto& labels = actions_[player];
  for (std::size_t a = 0; a < labels.size(); ++a) {
    if (labels[a] == name) return a;
  }
  return std::nullopt;
}

std::size_t Game::profile_index(std::span<const std::size_t> profile) const {
  if (profile.size() != players_.size()) {
    throw std::invalid_argument("action profile has wrong length");
  }
  std::size_t index = 0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i] >= actions_[i].size()) {
      throw std::out_of_range("action index out of range");
    }
    index += profile[i] * strides_[i];
  }
  return index;
}

std::vector<std::size_t> Game::decode_profile(std::size_t index) const {
  std::vector<std::size_t> profile(players_.size());
  for (std::size_t i = 0; i < players_.size(); ++i) {
    profile[i] = (index / strides_[i]) % actions_[i].size();
  }
  return profile;
}

double Game::bimatrix(std::size_t player, std::size_t row,
                      std::size_t col) const {
  return payoff(row * strides_[0] + col * strides_[1], player);
}

MixedProfile::MixedProfile(std::vector<std::vector<double>> strategies) {
  strategies_.reserve(strategies.size());
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    strategies_.push_back(normalized(std::move(strategies[i]), i));
  }
}

MixedProfile MixedProfile::uniform(const Game& game) {
  std::vector<std::vector<double>> s(game.num_players());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto k = game.num_actions(i);
    s[i].assign(k, 1.0 / static_cast<double>(k));
  }
  return MixedProfile(std::move(s));
}

MixedProfile MixedProfile::pure(const Game& game,
                                std::span<const std::size_t> actions) {
  if (actions.size() != game.num_players()) {
    throw std::invalid_argument("pure profile has wrong length");
  }
  std::vector<std::vector<double>> s(game.num_players());
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i].assign(game.num_actions(i), 0.0);
    s[i].at(actions[i]) = 1.0;
  }
  return MixedProfile(std::move(s));
}

bool MixedProfile::is_interior() const {
  for (const auto& s : strategies_) {
    for (double p : s) {
      if (!(p > 0.0)) return false;
    }
  }
  return true;
}

std::vector<std::size_t> MixedProfile::support(std::size_t player) const {
  std::vector<std::size_t> out;
  const auto& s = strategies_[player];
  for (std::size_t a = 0; a < s.size(); ++a) {
    if (s[a] > 0.0) out.push_back(a);
  }
  return out;
}

double MixedProfile::distance(const MixedProfile& other) const {
  if (other.strategies_.size() != strategies_.size()) {
    throw std::invalid_argument("profiles have different player counts");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < strategies_.size(); ++i) {
    if (strategies_[i].size() != other.strategies_[i].size()) {
      throw std::invalid_argument("profiles have different action counts");
    }
    for (std::size_t a = 0; a < strategies_[i].size(); ++a) {
      d = std::max(d, std::abs(strategies_[i][a] - other.strategies_[i][a]));
    }
  }
  return d;
}

MixedProfile MixedProfile::with_strategy(std::size_t player,
                                         std::vector<double> strategy) const {
  MixedProfile out = *this;
  out.strategies_.at(player) = normalized(std::move(strategy), player);
  return out;
}

void check_compatible(const Game& game, const MixedProfile& profile) {
  if (profile.num_players() != game.num_players()) {
    throw std::invalid_argument("profile has " +
                                std::to_string(profile.num_players()) +
                                " players, game has " +
                                std::to_string(game.num_players()));
  }
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    if (profile.num_actions(i) != game.num_actions(i)) {
      throw std::invalid_argument("profile shape mismatch for player " +
                                  game.player_name(i));
    }
  }
}

std::vector<double> expected_utility(const Game& game,
                                     const MixedProfile& profile,
                                     std::size_t player) {
  check_compatible(game, profile);
  if (player >= game.num_players()) throw std::out_of_range("player index");
  const std::size_t n = game.num_players();
  std::vector<double> out(game.num_actions(player), 0.0);
  std::vector<std::size_t> digits(n, 0);
  for (std::size_t idx = 0; idx < game.num_profiles(); ++idx) {
    double weight = 1.0;
    for (std::size_t j = 0; j < n && weight != 0.0; ++j) {
      if (j != player) weight *= profile.prob(j, digits[j]);
    }
    if (weight != 0.0) out[digits[player]] += weight * game.payoff(idx, player);
    for (std::size_t j = n; j-- > 0;) {
      if (++digits[j] < game.num_actions(j)) break;
      digits[j] = 0;
    }
  }
  return out;
}

double expected_payoff(const Game& game, const MixedProfile& profile,
                       std::size_t player) {
  const auto u = expected_utility(game, profile, player);
  double total = 0.0;
  for (std::size_t a = 0; a < u.size(); ++a) {
    total += profile.prob(player, a) * u[a];
  }
  return total;
}

std::vector<std::size_t> best_responses(const Game& game,
                                        const MixedProfile& profile,
                                        std::size_t player, double tol) {
  if (tol < 0.0) throw std::invalid_argument("tolerance must be nonnegative");
  const auto u = expected_utility(game, profile, player);
  const double best = *std::max_element(u.begin(), u.end());
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < u.size(); ++a) {
    if (u[a] >= best - tol) out.push_back(a);
  }
  return out;
}

double nash_defect(const Game& game, const MixedProfile& profile) {
  double defect = 0.0;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    const auto u = expected_utility(game, profile, i);
    double value = 0.0;
    for (std::size_t a = 0; a < u.size(); ++a) value += profile.prob(i, a) * u[a];
    const double best = *std::max_element(u.begin(), u.end());
    defect = std::max(defect, best - value);
  }
  return defect;
}

bool DominanceReport::empty() const {
  return std::all_of(pairs.begin(), pairs.end(),
                     [](const auto& p) { return p.empty(); });
}

bool DominanceReport::is_dominated(std::size_t player,
                                   std::size_t action) const {
  return std::any_of(pairs[player].begin(), pairs[player].end(),
                     [&](const DominancePair& p) { return p.dominated == action; });
}

bool DominanceReport::dominates(std::size_t player, std::size_t dominating,
                                std::size_t dominated) const {
  return std::any_of(pairs[player].begin(), pairs[player].end(),
                     [&](const DominancePair& p) {
                       return p.dominated == dominated &&
                              p.dominating == dominating;
                     });
}

DominanceReport weak_dominance(const Game& game) {
  const std::size_t n = game.num_players();
  DominanceReport report;
  report.pairs.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = game.num_actions(i);
    const std::size_t stride = game.stride(i);
    for (std::size_t hat = 0; hat < k; ++hat) {
      for (std::size_t a = 0; a < k; ++a) {
        if (a == hat) continue;
        bool weakly_better = true;
        std::optional<std::size_t> strict_at;
        for (std::size_t idx = 0; idx < game.num_profiles() && weakly_better;
             ++idx) {
          if ((idx / stride) % k != 0) continue;  // enumerate a_{-i} once
          const double u_hat = game.payoff(idx + hat * stride, i);
          const double u_a = game.payoff(idx + a * stride, i);
          if (u_hat < u_a) weakly_better = false;
          if (u_hat > u_a && !strict_at) strict_at = idx;
        }
        if (weakly_better && strict_at) {
          report.pairs[i].push_back(
              DominancePair{a, hat, game.decode_profile(*strict_at)});
        }
      }
    }
  }
  return report;
}

}  // namespace empeq
