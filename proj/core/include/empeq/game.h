#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace empeq {

// A finite normal-form game: ordered players, ordered action labels per
// player, and one payoff vector per pure action profile.
//
// Pure profiles are indexed in mixed radix with player 0 as the most
// significant digit, so a two-player game is stored row-major with player 0
// choosing the row. Payoffs are stored as payoffs[profile * n + player].
//
// Games are immutable after construction.
class Game {
 public:
  Game(std::vector<std::string> players,
       std::vector<std::vector<std::string>> actions,
       std::vector<double> payoffs);

  std::size_t num_players() const { return players_.size(); }
  std::size_t num_actions(std::size_t player) const {
    return actions_[player].size();
  }
  std::size_t num_profiles() const { return num_profiles_; }

  const std::string& player_name(std::size_t player) const {
    return players_[player];
  }
  const std::string& action_name(std::size_t player, std::size_t action) const {
    return actions_[player][action];
  }
  const std::vector<std::string>& players() const { return players_; }
  const std::vector<std::string>& actions(std::size_t player) const {
    return actions_[player];
  }

  std::optional<std::size_t> find_player(std::string_view name) const;
  std::optional<std::size_t> find_action(std::size_t player,
                                         std::string_view name) const;

  std::size_t profile_index(std::span<const std::size_t> profile) const;
  std::vector<std::size_t> decode_profile(std::size_t index) const;

  double payoff(std::size_t profile_index, std::size_t player) const {
    return payoffs_[profile_index * players_.size() + player];
  }
  double payoff(std::span<const std::size_t> profile, std::size_t player) const {
    return payoff(profile_index(profile), player);
  }
  std::span<const double> payoffs() const { return payoffs_; }

  // Number of profiles spanned by one step of `player`'s action digit.
  std::size_t stride(std::size_t player) const { return strides_[player]; }

  // Two-player convenience: u_player(row, col).
  double bimatrix(std::size_t player, std::size_t row, std::size_t col) const;

 private:
  std::vector<std::string> players_;
  std::vector<std::vector<std::string>> actions_;
  std::vector<double> payoffs_;
  std::vector<std::size_t> strides_;
  std::size_t num_profiles_ = 1;
};

// One probability vector per player. Construction clamps entries in
// [-kSimplexTolerance, 0) to zero and renormalizes each vector; anything more
// negative, non-finite, or with a sum far from one is rejected.
class MixedProfile {
 public:
  static constexpr double kSimplexTolerance = 1e-12;
  // Largest |sum - 1| accepted before renormalization.
  static constexpr double kSumTolerance = 1e-6;

  MixedProfile() = default;
  explicit MixedProfile(std::vector<std::vector<double>> strategies);

  static MixedProfile uniform(const Game& game);
  static MixedProfile pure(const Game& game,
                           std::span<const std::size_t> actions);

  std::size_t num_players() const { return strategies_.size(); }
  std::size_t num_actions(std::size_t player) const {
    return strategies_[player].size();
  }
  std::span<const double> strategy(std::size_t player) const {
    return strategies_[player];
  }
  double prob(std::size_t player, std::size_t action) const {
    return strategies_[player][action];
  }
  const std::vector<std::vector<double>>& strategies() const {
    return strategies_;
  }

  bool is_interior() const;
  std::vector<std::size_t> support(std::size_t player) const;

  // Max-norm distance over all probability entries.
  double distance(const MixedProfile& other) const;

  // Replaces player's vector (validated and renormalized like the ctor).
  MixedProfile with_strategy(std::size_t player,
                             std::vector<double> strategy) const;

  bool operator==(const MixedProfile&) const = default;

 private:
  std::vector<std::vector<double>> strategies_;
};

// Throws std::invalid_argument when the profile shape does not match the game.
void check_compatible(const Game& game, const MixedProfile& profile);

// U_i(sigma_{-i}, a_i) for every a_i.
std::vector<double> expected_utility(const Game& game,
                                     const MixedProfile& profile,
                                     std::size_t player);

// U_i(sigma).
double expected_payoff(const Game& game, const MixedProfile& profile,
                       std::size_t player);

// Actions within tol of the best expected utility.
std::vector<std::size_t> best_responses(const Game& game,
                                        const MixedProfile& profile,
                                        std::size_t player, double tol = 0.0);

// Largest gain any player obtains by a unilateral pure deviation.
double nash_defect(const Game& game, const MixedProfile& profile);

inline bool is_nash(const Game& game, const MixedProfile& profile,
                    double tol = 1e-9) {
  return nash_defect(game, profile) <= tol;
}

struct DominancePair {
  std::size_t dominated = 0;
  std::size_t dominating = 0;
  // An opponent profile a_{-i} (full profile, own slot set to 0) where the
  // dominating action is strictly better.
  std::vector<std::size_t> strict_witness;
};

struct DominanceReport {
  // Indexed by player.
  std::vector<std::vector<DominancePair>> pairs;

  bool empty() const;
  bool is_dominated(std::size_t player, std::size_t action) const;
  bool dominates(std::size_t player, std::size_t dominating,
                 std::size_t dominated) const;
};

// Exhaustive weak-dominance relation, compared exactly on stored payoffs.
DominanceReport weak_dominance(const Game& game);

}  // namespace empeq
