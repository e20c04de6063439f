#include "empeq/empirical.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <unsupported/Eigen/LevenbergMarquardt>
#include <unsupported/Eigen/NumericalDiff>

#include "empeq/monotone.h"
#include "empeq/order_lp.h"
#include "empeq/qre.h"

namespace empeq {
namespace {

constexpr double kCandidateTol = 1e-9;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

bool admissible(const Game& game, const MixedProfile& profile, double m, double tol) {
  if (m == 1.0) return static_cast<bool>(is_payoff_monotone(game, profile, tol));
  return static_cast<bool>(is_m_weakly_payoff_monotone(game, profile, m, tol));
}

// Orders of one player's actions that an admissible profile within delta of
// the candidate could realize.
std::vector<WeakOrder> pruned_orders(const Game& game, const DominanceReport& dom,
                                     const MixedProfile& candidate, std::size_t player,
                                     double delta, double m) {
  std::vector<WeakOrder> out;
  for (auto& order : enumerate_weak_orders(game.num_actions(player))) {
    bool keep = true;
    for (const auto& pair : dom.pairs[player]) {
      // With an interior opponent the dominating action is strictly better.
      const int hi = order[pair.dominating], lo = order[pair.dominated];
      if (m == 1.0 ? hi <= lo : hi < lo) keep = false;
    }
    if (m == 1.0) {
      for (std::size_t a = 0; a < order.size() && keep; ++a) {
        for (std::size_t b = 0; b < order.size() && keep; ++b) {
          if (candidate.prob(player, a) > candidate.prob(player, b) + 2.0 * delta &&
              order[a] <= order[b]) {
            keep = false;
          }
        }
      }
    }
    if (keep) out.push_back(std::move(order));
  }
  return out;
}

struct OrderSearch {
  bool found = false;
  MixedProfile witness;
  double margin = 0.0;
  std::size_t pairs_checked = 0;
  std::size_t orders[2] = {0, 0};
  std::size_t enumerated[2] = {0, 0};
  WeakOrder chosen[2];
  std::vector<std::string> diagnostics;
};

// Exact search over order pairs in a two-player game. Player p's problem in x
// = sigma_p fixes p's own order (through probabilities for m = 1, through the
// m-weak inequalities otherwise) and the opponent's utility order.
OrderSearch search_orders(const Game& game, const MixedProfile& candidate, double delta,
                          double m, const WeakOrder* hint0, const WeakOrder* hint1) {
  const DominanceReport dom = weak_dominance(game);
  std::vector<WeakOrder> orders[2];
  std::vector<std::vector<double>> rows[2];
  OrderSearch out;
  for (std::size_t p = 0; p < 2; ++p) {
    orders[p] = pruned_orders(game, dom, candidate, p, delta, m);
    rows[p] = opponent_utility_rows(game, p);
    out.orders[p] = orders[p].size();
    out.enumerated[p] = enumerate_weak_orders(game.num_actions(p)).size();
  }
  const WeakOrder* hints[2] = {hint0, hint1};
  for (std::size_t p = 0; p < 2; ++p) {
    if (!hints[p]) continue;
    auto it = std::find(orders[p].begin(), orders[p].end(), *hints[p]);
    if (it != orders[p].end()) std::rotate(orders[p].begin(), it, it + 1);
  }

  // memo[p][(own, other)]
  std::map<std::pair<std::size_t, std::size_t>, StrategyLp::Solution> memo[2];
  auto solve = [&](std::size_t p, std::size_t own, std::size_t other)
      -> const StrategyLp::Solution& {
    auto key = std::make_pair(own, other);
    auto it = memo[p].find(key);
    if (it != memo[p].end()) return it->second;
    StrategyLp lp(game.num_actions(p));
    lp.require_box(candidate.strategy(p), delta);
    if (m == 1.0) {
      lp.require_interior();
      lp.require_order(orders[p][own]);
    } else {
      lp.require_m_weak(orders[p][own], m);
    }
    lp.require_linear_order(orders[1 - p][other], rows[p]);
    return memo[p].emplace(key, lp.solve()).first->second;
  };

  for (std::size_t i0 = 0; i0 < orders[0].size(); ++i0) {
    for (std::size_t i1 = 0; i1 < orders[1].size(); ++i1) {
      ++out.pairs_checked;
      const auto& s0 = solve(0, i0, i1);
      if (!s0.feasible) continue;
      const auto& s1 = solve(1, i1, i0);
      if (!s1.feasible) continue;
      MixedProfile w({s0.x, s1.x});
      const double margin = std::min(s0.margin, s1.margin);
      const double tol = std::min(kMonotoneTolerance, margin / 2.0);
      // Probabilities near 1 carry an absolute rounding error of a few ulps.
      if (!admissible(game, w, m, tol) || w.distance(candidate) > delta * (1.0 + 1e-9) + 1e-15) {
        out.diagnostics.push_back("order pair feasible but witness failed numeric check at delta=" +
                                  fmt(delta));
        continue;
      }
      out.found = true;
      out.witness = std::move(w);
      out.margin = margin;
      out.chosen[0] = orders[0][i0];
      out.chosen[1] = orders[1][i1];
      return out;
    }
  }
  return out;
}

// Penalty search for games with other than two players.
struct PenaltyProblem {
  const Game& game;
  const MixedProfile& candidate;
  std::vector<WeakOrder> orders;  // one per player
  double delta;
  double m;
  double prob_gap;
  double util_gap;
  std::size_t inputs;
  std::size_t residuals;

  MixedProfile profile(const Eigen::VectorXd& z) const {
    std::vector<std::vector<double>> s(game.num_players());
    std::size_t off = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::size_t k = game.num_actions(i);
      std::vector<double> logits(z.data() + off, z.data() + off + k);
      s[i] = logistic(logits, 1.0);
      off += k;
    }
    return MixedProfile(std::move(s));
  }

  std::vector<double> evaluate(const Eigen::VectorXd& z) const {
    const MixedProfile s = profile(z);
    std::vector<double> r;
    for (std::size_t i = 0; i < game.num_players(); ++i) {
      const auto u = expected_utility(game, s, i);
      const auto& order = orders[i];
      const std::size_t k = u.size();
      for (std::size_t a = 0; a < k; ++a) {
        r.push_back(std::max(0.0, std::abs(s.prob(i, a) - candidate.prob(i, a)) - 0.9 * delta));
      }
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
          if (a == b) continue;
          if (order[a] == order[b] && a < b) {
            r.push_back(u[a] - u[b]);
            if (m == 1.0) r.push_back(s.prob(i, a) - s.prob(i, b));
          } else if (order[a] == order[b] + 1) {
            r.push_back(std::max(0.0, util_gap - (u[a] - u[b])));
            if (m == 1.0) r.push_back(std::max(0.0, prob_gap - (s.prob(i, a) - s.prob(i, b))));
          }
          if (m < 1.0 && order[a] >= order[b]) {
            r.push_back(std::max(0.0, m * s.prob(i, b) - s.prob(i, a)));
          }
        }
      }
    }
    return r;
  }
};

struct PenaltyFunctor : Eigen::DenseFunctor<double> {
  const PenaltyProblem* problem;
  PenaltyFunctor(const PenaltyProblem* p, int inputs, int values)
      : Eigen::DenseFunctor<double>(inputs, values), problem(p) {}
  int operator()(const InputType& z, ValueType& f) const {
    const auto r = problem->evaluate(z);
    f.setZero();
    for (std::size_t j = 0; j < r.size(); ++j) f[static_cast<Eigen::Index>(j)] = r[j];
    return 0;
  }
};

std::vector<double> log_strategy(std::span<const double> s, double mix) {
  const double k = static_cast<double>(s.size());
  std::vector<double> out;
  for (double p : s) out.push_back(std::log((1.0 - mix) * p + mix / k));
  return out;
}

struct PenaltySearch {
  bool found = false;
  MixedProfile witness;
  int runs = 0;
  bool capped = false;
};

PenaltySearch penalty_search(const Game& game, const MixedProfile& candidate, double delta,
                             const EmpiricalOptions& options, std::mt19937_64& rng) {
  const std::size_t n = game.num_players();
  const double m = options.m;
  const DominanceReport dom = weak_dominance(game);
  std::vector<std::vector<WeakOrder>> orders(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (game.num_actions(i) > 7) {
      throw std::invalid_argument("penalty search supports at most 7 actions per player");
    }
    orders[i] = pruned_orders(game, dom, candidate, i, delta, m);
    // Try the candidate's own utility order first.
    const auto u = expected_utility(game, candidate, i);
    const WeakOrder guess = weak_order_of(u, kCandidateTol);
    auto it = std::find(orders[i].begin(), orders[i].end(), guess);
    if (it != orders[i].end()) std::rotate(orders[i].begin(), it, it + 1);
    if (orders[i].empty()) return {};
  }
  double spread = 0.0;
  const auto pay = game.payoffs();
  if (!pay.empty()) {
    const auto [lo, hi] = std::minmax_element(pay.begin(), pay.end());
    spread = std::max(*hi - *lo, 1.0);
  }

  std::vector<double> base_z;
  for (std::size_t i = 0; i < n; ++i) {
    const auto l = log_strategy(candidate.strategy(i), delta / 2.0);
    base_z.insert(base_z.end(), l.begin(), l.end());
  }
  std::vector<std::vector<double>> starts = {base_z};
  if (is_weakly_payoff_monotone(game, candidate)) {
    try {
      const auto pp = perturbed_monotone_point(game, candidate, delta / 4.0);
      std::vector<double> z;
      for (std::size_t i = 0; i < n; ++i) {
        const auto l = log_strategy(pp.profile.strategy(i), 0.0);
        z.insert(z.end(), l.begin(), l.end());
      }
      starts.push_back(std::move(z));
    } catch (const std::exception&) {
    }
  }
  std::normal_distribution<double> noise(0.0, 1.0);
  while (static_cast<int>(starts.size()) < std::max(1, options.penalty_seeds)) {
    auto z = base_z;
    for (double& v : z) v += noise(rng);
    starts.push_back(std::move(z));
  }

  PenaltySearch out;
  std::vector<std::size_t> digit(n, 0);
  while (true) {
    PenaltyProblem problem{game, candidate, {}, delta, m, 1e-2 * delta,
                           1e-2 * delta * spread, base_z.size(), 0};
    for (std::size_t i = 0; i < n; ++i) problem.orders.push_back(orders[i][digit[i]]);
    const Eigen::VectorXd probe = Eigen::Map<const Eigen::VectorXd>(base_z.data(), base_z.size());
    problem.residuals = std::max(problem.evaluate(probe).size(), base_z.size());
    for (const auto& start : starts) {
      if (out.runs >= options.max_penalty_runs) {
        out.capped = true;
        return out;
      }
      ++out.runs;
      PenaltyFunctor f(&problem, static_cast<int>(problem.inputs),
                       static_cast<int>(problem.residuals));
      Eigen::NumericalDiff<PenaltyFunctor> nd(f);
      Eigen::LevenbergMarquardt<Eigen::NumericalDiff<PenaltyFunctor>> lm(nd);
      lm.setMaxfev(2000);
      lm.setFtol(1e-14);
      lm.setXtol(1e-14);
      Eigen::VectorXd z = Eigen::Map<const Eigen::VectorXd>(start.data(), start.size());
      lm.minimize(z);
      const MixedProfile w = problem.profile(z);
      if (!w.is_interior() && m == 1.0) continue;
      if (w.distance(candidate) > delta * (1.0 + 1e-9) + 1e-15) continue;
      if (!admissible(game, w, m, kMonotoneTolerance)) continue;
      out.found = true;
      out.witness = w;
      return out;
    }
    std::size_t i = n;
    while (i-- > 0) {
      if (++digit[i] < orders[i].size()) break;
      digit[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

std::string action_label(const Game& game, std::size_t player, std::size_t action) {
  return game.player_name(player) + ":" + game.action_name(player, action);
}

}  // namespace

std::string to_string(Decision d) {
  switch (d) {
    case Decision::kMember:
      return "member";
    case Decision::kNonMember:
      return "non-member";
    case Decision::kInconclusive:
      return "inconclusive";
  }
  return "unknown";
}

std::optional<Refutation> dominance_refutation(const Game& game,
                                               const MixedProfile& candidate, double m,
                                               double tol) {
  check_compatible(game, candidate);
  const DominanceReport dom = weak_dominance(game);
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    for (const auto& pair : dom.pairs[i]) {
      const double hi = candidate.prob(i, pair.dominating);
      const double lo = candidate.prob(i, pair.dominated);
      if (m * lo - hi > tol) {
        Refutation r;
        r.kind = Refutation::Kind::kDominance;
        r.m = m;
        r.player = i;
        r.dominated = pair.dominated;
        r.dominating = pair.dominating;
        std::ostringstream os;
        os << action_label(game, i, pair.dominating) << " weakly dominates "
           << action_label(game, i, pair.dominated) << ", so sigma("
           << game.action_name(i, pair.dominating) << ") >= "
           << (m == 1.0 ? "" : fmt(m) + " * ") << "sigma("
           << game.action_name(i, pair.dominated)
           << ") in every admissible profile; the candidate has sigma("
           << game.action_name(i, pair.dominating) << ") = " << fmt(hi) << " and sigma("
           << game.action_name(i, pair.dominated) << ") = " << fmt(lo);
        r.certificate = os.str();
        return r;
      }
    }
  }
  return std::nullopt;
}

MembershipVerdict empirical_membership(const Game& game, const MixedProfile& candidate,
                                       const EmpiricalOptions& options) {
  check_compatible(game, candidate);
  const double defect = nash_defect(game, candidate);
  if (defect > options.nash_tol) {
    throw std::invalid_argument("candidate is not a Nash equilibrium (defect " + fmt(defect) +
                                ")");
  }
  if (!(options.m >= 0.0 && options.m <= 1.0)) throw std::invalid_argument("m must lie in [0, 1]");
  if (options.delta_schedule.empty()) throw std::invalid_argument("empty delta schedule");
  for (std::size_t j = 0; j < options.delta_schedule.size(); ++j) {
    const double d = options.delta_schedule[j];
    if (!(d > 0.0) || (j > 0 && !(d < options.delta_schedule[j - 1]))) {
      throw std::invalid_argument("delta schedule must be positive and decreasing");
    }
  }

  MembershipVerdict out;
  out.candidate = candidate;
  if (auto r = dominance_refutation(game, candidate, options.m, kCandidateTol)) {
    out.decision = Decision::kNonMember;
    out.refutation = std::move(r);
    return out;
  }

  const bool exact = game.num_players() == 2 && game.num_actions(0) <= 7 &&
                     game.num_actions(1) <= 7;
  if (!exact) {
    out.diagnostics.push_back(game.num_players() == 2
                                  ? "more than 7 actions: penalty search only"
                                  : "not a two-player game: penalty search only");
  }
  std::mt19937_64 rng(options.seed);
  std::optional<WeakOrder> hint[2];
  for (double delta : options.delta_schedule) {
    if (exact) {
      auto s = search_orders(game, candidate, delta, options.m, hint[0] ? &*hint[0] : nullptr,
                             hint[1] ? &*hint[1] : nullptr);
      for (auto& d : s.diagnostics) out.diagnostics.push_back(std::move(d));
      if (s.found) {
        hint[0] = s.chosen[0];
        hint[1] = s.chosen[1];
        out.witness.push_back({delta, s.witness, s.witness.distance(candidate)});
        continue;
      }
      out.witness.clear();
      if (!s.diagnostics.empty()) {
        out.decision = Decision::kInconclusive;
        return out;
      }
      Refutation r;
      r.kind = Refutation::Kind::kOrderInfeasible;
      r.m = options.m;
      r.delta = delta;
      std::ostringstream os;
      os << "no " << (options.m == 1.0 ? "interior payoff monotone" : fmt(options.m) + "-weakly payoff monotone")
         << " profile within " << fmt(delta) << " (max norm): all " << s.pairs_checked
         << " admissible order pairs are infeasible (" << s.orders[0] << " of "
         << s.enumerated[0] << " orders for " << game.player_name(0) << ", " << s.orders[1]
         << " of " << s.enumerated[1] << " for " << game.player_name(1)
         << " survive pruning)";
      r.certificate = os.str();
      out.decision = Decision::kNonMember;
      out.refutation = std::move(r);
      return out;
    }
    const auto s = penalty_search(game, candidate, delta, options, rng);
    if (!s.found) {
      out.witness.clear();
      out.decision = Decision::kInconclusive;
      out.diagnostics.push_back("no witness at delta=" + fmt(delta) + " after " +
                                std::to_string(s.runs) + " penalty solves" +
                                (s.capped ? " (run cap reached)" : ""));
      return out;
    }
    out.witness.push_back({delta, s.witness, s.witness.distance(candidate)});
  }
  out.decision = Decision::kMember;
  return out;
}

std::optional<MixedProfile> sample_admissible_profile(const Game& game, double m,
                                                      std::mt19937_64& rng) {
  const std::size_t n = game.num_players();
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<double>> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = game.num_actions(i);
    s[i].resize(k);
    double total = 0.0;
    for (auto& p : s[i]) {
      // Boundary profiles carry the sharpest constraints; draw them often.
      p = unit(rng) < 0.3 ? 0.0 : expo(rng);
      total += p;
    }
    if (total == 0.0) {
      s[i][std::uniform_int_distribution<std::size_t>(0, k - 1)(rng)] = 1.0;
      total = 1.0;
    }
    for (auto& p : s[i]) p /= total;
  }
  MixedProfile profile(s);
  const bool sort = m == 1.0 || unit(rng) < 0.5;
  if (sort) {
    std::vector<std::size_t> players(n);
    std::iota(players.begin(), players.end(), 0);
    std::shuffle(players.begin(), players.end(), rng);
    for (std::size_t i : players) {
      const auto u = expected_utility(game, profile, i);
      const auto order = weak_order_of(u, 0.0);
      auto probs = s[i];
      std::sort(probs.begin(), probs.end());
      std::vector<std::size_t> idx(u.size());
      std::iota(idx.begin(), idx.end(), 0);
      std::stable_sort(idx.begin(), idx.end(),
                       [&](std::size_t a, std::size_t b) { return order[a] < order[b]; });
      // Assign sorted probabilities by utility level; tied actions share the
      // mean of their slots.
      for (std::size_t pos = 0; pos < idx.size();) {
        std::size_t end = pos;
        double sum = 0.0;
        while (end < idx.size() && order[idx[end]] == order[idx[pos]]) sum += probs[end++];
        for (std::size_t q = pos; q < end; ++q) s[i][idx[q]] = sum / static_cast<double>(end - pos);
        pos = end;
      }
      profile = MixedProfile(s);
    }
  }
  const bool ok = m == 1.0 ? static_cast<bool>(is_weakly_payoff_monotone(game, profile, 0.0))
                           : static_cast<bool>(is_m_weakly_payoff_monotone(game, profile, m, 0.0));
  if (!ok) return std::nullopt;
  return profile;
}

RefutationCheck verify_refutation(const Game& game, const MixedProfile& candidate,
                                  const Refutation& refutation, std::size_t samples,
                                  std::uint64_t seed) {
  RefutationCheck out;
  if (refutation.kind == Refutation::Kind::kOrderInfeasible) {
    const bool exact = game.num_players() == 2;
    if (!exact) {
      out.detail = "order-infeasibility certificates need a two-player game";
      return out;
    }
    const auto s = search_orders(game, candidate, refutation.delta, refutation.m, nullptr,
                                 nullptr);
    out.holds = !s.found && s.diagnostics.empty();
    out.samples = s.pairs_checked;
    out.detail = out.holds ? "exact search repeated: no feasible order pair"
                           : "exact search found a witness";
    return out;
  }
  const std::size_t i = refutation.player;
  const double forced_gap =
      refutation.m * candidate.prob(i, refutation.dominated) - candidate.prob(i, refutation.dominating);
  if (!(forced_gap > kCandidateTol)) {
    out.detail = "candidate does not violate the forced inequality";
    return out;
  }
  std::mt19937_64 rng(seed);
  const std::size_t max_draws = samples * 1000;
  for (std::size_t draw = 0; draw < max_draws && out.samples < samples; ++draw) {
    const auto p = sample_admissible_profile(game, refutation.m, rng);
    if (!p) continue;
    ++out.samples;
    if (p->prob(i, refutation.dominating) < refutation.m * p->prob(i, refutation.dominated) - 1e-12) {
      ++out.violations;
    }
  }
  out.holds = out.samples == samples && out.violations == 0;
  out.detail = std::to_string(out.samples) + " admissible profiles sampled, " +
               std::to_string(out.violations) + " violations";
  return out;
}

EmpiricalSet enumerate_empirical(const Game& game, const EmpiricalOptions& options) {
  return enumerate_empirical(game, enumerate_nash(game), options);
}

EmpiricalSet enumerate_empirical(const Game& game, const EquilibriumSet& set,
                                 const EmpiricalOptions& options) {
  EmpiricalSet out;
  out.pure_only = set.pure_only;
  out.diagnostics = set.diagnostics;
  for (const auto& eq : set.isolated) {
    out.isolated.push_back(empirical_membership(game, eq, options));
  }
  for (const auto& comp : set.components) {
    ComponentMembership cm;
    cm.component = comp;
    if (comp.is_segment()) {
      std::optional<double> run_start;
      double last = 0.0;
      for (int g = 0; g < kComponentGridPoints; ++g) {
        const double s = static_cast<double>(g) / (kComponentGridPoints - 1);
        const auto v = empirical_membership(game, comp.at(s), options);
        cm.grid.push_back(s);
        cm.decisions.push_back(v.decision);
        if (v.decision == Decision::kMember) {
          if (!run_start) run_start = s;
          last = s;
        } else if (run_start) {
          cm.member_intervals.emplace_back(*run_start, last);
          run_start.reset();
        }
      }
      if (run_start) cm.member_intervals.emplace_back(*run_start, last);
    } else {
      auto probes = comp.extreme_profiles();
      std::vector<std::vector<double>> bary(game.num_players());
      for (std::size_t i = 0; i < game.num_players(); ++i) {
        bary[i].assign(game.num_actions(i), 0.0);
        for (const auto& p : probes) {
          for (std::size_t a = 0; a < game.num_actions(i); ++a) {
            bary[i][a] += p.prob(i, a) / static_cast<double>(probes.size());
          }
        }
      }
      probes.emplace_back(std::move(bary));
      for (const auto& p : probes) cm.probes.push_back(empirical_membership(game, p, options));
    }
    out.components.push_back(std::move(cm));
  }
  return out;
}

ProbeResult nonemptiness_probe(const Game& game, const EmpiricalOptions& options) {
  const LogitPath path = trace_logit_path(game, default_lambda_schedule());
  if (!path.nearest) throw std::runtime_error("logit path has no nearby enumerated equilibrium");
  ProbeResult out;
  out.candidate = path.nearest->profile;
  out.path_distance = path.nearest->distance;
  out.lambda = path.points.back().lambda;
  out.verdict = empirical_membership(game, out.candidate, options);
  return out;
}

}  // namespace empeq
