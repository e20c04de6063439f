#include "empeq/refine.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "empeq/order_lp.h"

namespace empeq {
namespace {

void require_nash(const Game& game, const MixedProfile& profile, double tol) {
  check_compatible(game, profile);
  const double defect = nash_defect(game, profile);
  if (defect > tol) {
    throw std::invalid_argument("profile is not a Nash equilibrium (defect " +
                                std::to_string(defect) + ")");
  }
}

std::string describe_dominance(const Game& game, std::size_t player,
                               const DominancePair& pair) {
  return "player " + game.player_name(player) + " plays " +
         game.action_name(player, pair.dominated) +
         " with positive probability, but it is weakly dominated by " +
         game.action_name(player, pair.dominating);
}

std::optional<std::string> on_support_dominated(const Game& game,
                                                const MixedProfile& profile) {
  const auto report = weak_dominance(game);
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    for (const auto& pair : report.pairs[i]) {
      if (profile.prob(i, pair.dominated) > 0.0) {
        return describe_dominance(game, i, pair);
      }
    }
  }
  return std::nullopt;
}

std::vector<std::vector<bool>> nonempty_subsets(std::size_t k) {
  std::vector<std::vector<bool>> out;
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    std::vector<bool> s(k);
    for (std::size_t a = 0; a < k; ++a) s[a] = (mask >> a) & 1u;
    out.push_back(std::move(s));
  }
  return out;
}

// Uniform tremble (1 - eta) * sigma + eta * uniform, which witnesses strict
// equilibria and many others without any search.
MixedProfile tremble(const MixedProfile& profile, double eta) {
  std::vector<std::vector<double>> s = profile.strategies();
  for (auto& v : s) {
    const double u = 1.0 / static_cast<double>(v.size());
    for (double& p : v) p = (1.0 - eta) * p + eta * u;
  }
  return MixedProfile(std::move(s));
}

// Builders for the two decoupled strategy LPs of a two-player problem.
// Player p's LP constrains x = sigma_p; `opp_rows` expresses the opponent's
// utilities as linear functions of x.
using Builder = std::function<void(std::size_t player, StrategyLp& lp)>;

std::optional<MixedProfile> solve_pair(const Game& game,
                                       const MixedProfile& center, double radius,
                                       bool interior, const Builder& build) {
  std::vector<std::vector<double>> s(2);
  for (std::size_t p = 0; p < 2; ++p) {
    StrategyLp lp(game.num_actions(p));
    if (interior) lp.require_interior();
    lp.require_box(center.strategy(p), radius);
    build(p, lp);
    auto sol = lp.solve();
    if (!sol.feasible) return std::nullopt;
    s[p] = std::move(sol.x);
  }
  return MixedProfile(std::move(s));
}

// Searches all (B_1, B_2) best-response-set profiles for an interior
// epsilon-perfect profile within radius of the target.
std::optional<MixedProfile> perfect_search(const Game& game,
                                           const MixedProfile& target,
                                           double epsilon, double radius) {
  const auto rows0 = opponent_utility_rows(game, 0);  // U_2 as a function of x
  const auto rows1 = opponent_utility_rows(game, 1);  // U_1 as a function of y
  const auto sets0 = nonempty_subsets(game.num_actions(0));
  const auto sets1 = nonempty_subsets(game.num_actions(1));
  auto admissible = [&](std::size_t p, const std::vector<bool>& best) {
    for (std::size_t a = 0; a < best.size(); ++a) {
      if (!best[a] && target.prob(p, a) - radius > epsilon) return false;
    }
    return true;
  };
  for (const auto& b0 : sets0) {
    if (!admissible(0, b0)) continue;
    for (const auto& b1 : sets1) {
      if (!admissible(1, b1)) continue;
      auto found = solve_pair(game, target, radius, true,
                              [&](std::size_t p, StrategyLp& lp) {
        const auto& own = p == 0 ? b0 : b1;
        const auto& other = p == 0 ? b1 : b0;
        for (std::size_t a = 0; a < own.size(); ++a) {
          if (!own[a]) lp.require_cap(a, epsilon);
        }
        lp.require_best_set(other, p == 0 ? rows0 : rows1);
      });
      if (found) return found;
    }
  }
  return std::nullopt;
}

// Searches utility orders (R_1, R_2) for an interior epsilon-proper profile.
std::optional<MixedProfile> proper_search(const Game& game,
                                          const MixedProfile& target,
                                          double epsilon, double radius) {
  const auto rows0 = opponent_utility_rows(game, 0);
  const auto rows1 = opponent_utility_rows(game, 1);
  const auto orders0 = enumerate_weak_orders(game.num_actions(0));
  const auto orders1 = enumerate_weak_orders(game.num_actions(1));
  auto admissible = [&](std::size_t p, const WeakOrder& r) {
    // An action ranked below another gets at most epsilon times its mass.
    for (std::size_t a = 0; a < r.size(); ++a) {
      for (std::size_t b = 0; b < r.size(); ++b) {
        if (r[a] < r[b] &&
            target.prob(p, a) - radius > epsilon * (target.prob(p, b) + radius)) {
          return false;
        }
      }
    }
    return true;
  };
  for (const auto& r0 : orders0) {
    if (!admissible(0, r0)) continue;
    for (const auto& r1 : orders1) {
      if (!admissible(1, r1)) continue;
      auto found = solve_pair(game, target, radius, true,
                              [&](std::size_t p, StrategyLp& lp) {
        const auto& own = p == 0 ? r0 : r1;
        const auto& other = p == 0 ? r1 : r0;
        for (std::size_t a = 0; a < own.size(); ++a) {
          for (std::size_t b = 0; b < own.size(); ++b) {
            if (own[a] < own[b]) lp.require_ratio(a, b, epsilon);
          }
        }
        lp.require_linear_order(other, p == 0 ? rows0 : rows1);
      });
      if (found) return found;
    }
  }
  return std::nullopt;
}

using Oracle = bool (*)(const Game&, const MixedProfile&, double, double);
using Search = std::optional<MixedProfile> (*)(const Game&, const MixedProfile&,
                                               double, double);

RefinementCheck run_schedule(const Game& game, const MixedProfile& profile,
                             const RefinementOptions& options, Oracle oracle,
                             Search search, const char* name) {
  RefinementCheck check;
  if (options.schedule.empty()) throw std::invalid_argument("empty epsilon schedule");
  for (std::size_t j = 1; j < options.schedule.size(); ++j) {
    if (!(options.schedule[j] < options.schedule[j - 1])) {
      throw std::invalid_argument("epsilon schedule must be decreasing");
    }
  }
  const bool two_player = game.num_players() == 2;
  bool complete = true;
  for (double eps : options.schedule) {
    const double radius = options.radius_factor * eps;
    std::optional<MixedProfile> w;
    for (double eta : {eps, eps / 10.0}) {
      auto candidate = tremble(profile, eta);
      if (candidate.distance(profile) <= radius && oracle(game, candidate, eps, 1e-9)) {
        w = std::move(candidate);
        break;
      }
    }
    if (!w && two_player) {
      w = search(game, profile, eps, radius);
      if (w && !oracle(game, *w, eps, 1e-9)) {
        check.diagnostics.push_back(std::string(name) + " LP witness at epsilon " +
                                    std::to_string(eps) +
                                    " failed the floating-point recheck");
        w.reset();
      }
    }
    if (!w) {
      complete = false;
      check.diagnostics.push_back(std::string("no ") + name + " witness at epsilon " +
                                  std::to_string(eps));
      break;
    }
    check.witness.push_back({eps, *w, w->distance(profile)});
  }
  if (complete) {
    check.verdict = Verdict::kVerified;
    return check;
  }
  check.witness.clear();
  if (two_player) {
    const double eps = options.schedule.back();
    if (!search(game, profile, eps, options.refutation_radius)) {
      std::ostringstream os;
      os << "no interior " << (std::string(name) == "perfect" ? "epsilon-perfect" : "epsilon-proper")
         << " profile within max-norm distance " << options.refutation_radius
         << " at epsilon " << eps << " (exhaustive exact LP search)";
      check.verdict = Verdict::kRefuted;
      check.certificate = os.str();
    }
  } else {
    check.diagnostics.push_back("exhaustive search needs a two-player game");
  }
  return check;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kVerified: return "verified";
    case Verdict::kRefuted: return "refuted";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "?";
}

bool is_undominated(const Game& game, const MixedProfile& profile) {
  check_compatible(game, profile);
  const auto report = weak_dominance(game);
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    for (const auto& pair : report.pairs[i]) {
      if (profile.prob(i, pair.dominated) > 0.0) return false;
    }
  }
  return true;
}

UndominatedFilter filter_undominated(const Game& game, const EquilibriumSet& set) {
  const auto report = weak_dominance(game);
  auto clean = [&](std::size_t player, const std::vector<double>& s) {
    for (std::size_t a = 0; a < s.size(); ++a) {
      if (s[a] > 0.0 && report.is_dominated(player, a)) return false;
    }
    return true;
  };
  UndominatedFilter out;
  for (const auto& p : set.isolated) out.isolated.push_back(is_undominated(game, p));
  for (const auto& comp : set.components) {
    NashComponent face;
    face.group = comp.group;
    for (const auto& x : comp.row_vertices) {
      if (clean(0, x)) face.row_vertices.push_back(x);
    }
    for (const auto& y : comp.col_vertices) {
      if (clean(1, y)) face.col_vertices.push_back(y);
    }
    if (face.row_vertices.empty() || face.col_vertices.empty()) {
      face.row_vertices.clear();
      face.col_vertices.clear();
    }
    out.component_faces.push_back(std::move(face));
  }
  return out;
}

bool is_epsilon_perfect(const Game& game, const MixedProfile& profile,
                        double epsilon, double tol) {
  check_compatible(game, profile);
  if (!profile.is_interior()) return false;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    const auto best = best_responses(game, profile, i, tol);
    for (std::size_t a = 0; a < game.num_actions(i); ++a) {
      if (profile.prob(i, a) > epsilon * (1.0 + 1e-9) &&
          std::find(best.begin(), best.end(), a) == best.end()) {
        return false;
      }
    }
  }
  return true;
}

bool is_epsilon_proper(const Game& game, const MixedProfile& profile,
                       double epsilon, double tol) {
  check_compatible(game, profile);
  if (!profile.is_interior()) return false;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    const auto u = expected_utility(game, profile, i);
    for (std::size_t a = 0; a < u.size(); ++a) {
      for (std::size_t b = 0; b < u.size(); ++b) {
        if (u[a] < u[b] - tol &&
            profile.prob(i, a) > epsilon * profile.prob(i, b) * (1.0 + 1e-9)) {
          return false;
        }
      }
    }
  }
  return true;
}

RefinementCheck check_perfect(const Game& game, const MixedProfile& profile,
                              const RefinementOptions& options) {
  require_nash(game, profile, options.nash_tol);
  if (game.num_players() == 2) {
    if (auto why = on_support_dominated(game, profile)) {
      RefinementCheck check;
      check.verdict = Verdict::kRefuted;
      check.certificate = *why;
      return check;
    }
  }
  return run_schedule(game, profile, options, &is_epsilon_perfect, &perfect_search,
                      "perfect");
}

RefinementCheck check_proper(const Game& game, const MixedProfile& profile,
                             const RefinementOptions& options) {
  require_nash(game, profile, options.nash_tol);
  if (game.num_players() == 2) {
    if (auto why = on_support_dominated(game, profile)) {
      RefinementCheck check;
      check.verdict = Verdict::kRefuted;
      check.certificate = *why + " (so not perfect, hence not proper)";
      return check;
    }
  }
  return run_schedule(game, profile, options, &is_epsilon_proper, &proper_search,
                      "proper");
}

std::vector<RefinementTag> classify(const Game& game, const EquilibriumSet& set,
                                    const RefinementOptions& options) {
  std::vector<RefinementTag> out;
  for (const auto& p : extreme_equilibria(set)) {
    RefinementTag tag;
    tag.profile = p;
    tag.undominated = is_undominated(game, p);
    tag.perfect = check_perfect(game, p, options);
    tag.proper = check_proper(game, p, options);
    if (tag.proper.verdict == Verdict::kVerified &&
        tag.perfect.verdict != Verdict::kVerified) {
      // Every epsilon-proper profile is epsilon-perfect.
      tag.perfect.verdict = Verdict::kVerified;
      tag.perfect.witness = tag.proper.witness;
      tag.perfect.diagnostics.push_back("witnessed by the proper sequence");
    }
    out.push_back(std::move(tag));
  }
  return out;
}

}  // namespace empeq
