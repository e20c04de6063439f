#include "empeq/report.h"

#include <sstream>

namespace empeq {
namespace {

Json rounded(double v) { return round_significant(v, kReportDigits); }

Json check_json(const Game& game, const RefinementCheck& check) {
  Json out;
  out["verdict"] = to_string(check.verdict);
  Json witness = Json::array();
  for (const auto& w : check.witness) {
    witness.push_back({{"epsilon", w.epsilon},
                       {"distance", rounded(w.distance)},
                       {"profile", profile_to_json(game, w.profile)}});
  }
  out["witness"] = std::move(witness);
  if (!check.certificate.empty()) out["certificate"] = check.certificate;
  if (!check.diagnostics.empty()) out["diagnostics"] = check.diagnostics;
  return out;
}

}  // namespace

Json strategy_json(std::span<const double> strategy, int digits) {
  Json out = Json::array();
  for (double p : strategy) out.push_back(round_significant(p, digits));
  return out;
}

Json component_json(const Game& game, const NashComponent& component) {
  Json out;
  out["group"] = component.group;
  out["dimension"] = component.dimension();
  Json vertices = Json::object();
  const std::vector<std::vector<double>>* lists[2] = {&component.row_vertices,
                                                      &component.col_vertices};
  for (std::size_t i = 0; i < 2; ++i) {
    Json list = Json::array();
    for (const auto& v : *lists[i]) {
      Json dist = Json::object();
      for (std::size_t a = 0; a < v.size(); ++a) dist[game.action_name(i, a)] = rounded(v[a]);
      list.push_back(std::move(dist));
    }
    vertices[game.player_name(i)] = std::move(list);
  }
  out["vertices"] = std::move(vertices);
  return out;
}

Json nash_report(const Game& game, const EquilibriumSet& set,
                 const std::vector<RefinementTag>& tags) {
  Json out;
  out["pure_only"] = set.pure_only;
  Json isolated = Json::array();
  for (const auto& p : set.isolated) isolated.push_back(profile_to_json(game, p));
  out["isolated"] = std::move(isolated);
  Json components = Json::array();
  for (const auto& c : set.components) components.push_back(component_json(game, c));
  out["components"] = std::move(components);
  Json extreme = Json::array();
  for (const auto& t : tags) {
    extreme.push_back({{"profile", profile_to_json(game, t.profile)},
                       {"undominated", t.undominated},
                       {"perfect", check_json(game, t.perfect)},
                       {"proper", check_json(game, t.proper)}});
  }
  out["extreme_equilibria"] = std::move(extreme);
  if (!set.diagnostics.empty()) out["diagnostics"] = set.diagnostics;
  return out;
}

Json membership_json(const Game& game, const MembershipVerdict& verdict) {
  Json out;
  out["profile"] = profile_to_json(game, verdict.candidate);
  out["decision"] = to_string(verdict.decision);
  Json witness = Json::array();
  for (const auto& w : verdict.witness) {
    witness.push_back({{"delta", w.delta},
                       {"distance", rounded(w.distance)},
                       {"profile", profile_to_json(game, w.profile)}});
  }
  out["witness"] = std::move(witness);
  if (verdict.refutation) {
    const auto& r = *verdict.refutation;
    Json ref;
    ref["kind"] = r.kind == Refutation::Kind::kDominance ? "dominance" : "order-infeasible";
    ref["m"] = r.m;
    if (r.kind == Refutation::Kind::kDominance) {
      ref["player"] = game.player_name(r.player);
      ref["dominating"] = game.action_name(r.player, r.dominating);
      ref["dominated"] = game.action_name(r.player, r.dominated);
    } else {
      ref["delta"] = r.delta;
    }
    ref["certificate"] = r.certificate;
    out["refutation"] = std::move(ref);
  } else {
    out["refutation"] = nullptr;
  }
  if (!verdict.diagnostics.empty()) out["diagnostics"] = verdict.diagnostics;
  return out;
}

Json empirical_report(const Game& game, const EmpiricalSet& set, double m) {
  Json out;
  out["m"] = m;
  out["pure_only"] = set.pure_only;
  Json isolated = Json::array();
  for (const auto& v : set.isolated) isolated.push_back(membership_json(game, v));
  out["isolated"] = std::move(isolated);
  Json components = Json::array();
  for (const auto& c : set.components) {
    Json cj = component_json(game, c.component);
    if (c.component.is_segment()) {
      const std::size_t free = c.component.free_player();
      cj["free_player"] = game.player_name(free);
      Json grid = Json::array();
      for (std::size_t g = 0; g < c.grid.size(); ++g) {
        grid.push_back({{"s", c.grid[g]}, {"decision", to_string(c.decisions[g])}});
      }
      cj["grid"] = std::move(grid);
      Json intervals = Json::array();
      for (const auto& [lo, hi] : c.member_intervals) {
        intervals.push_back({{"s", {lo, hi}},
                             {"from", profile_to_json(game, c.component.at(lo))},
                             {"to", profile_to_json(game, c.component.at(hi))}});
      }
      cj["member_intervals"] = std::move(intervals);
    } else {
      Json probes = Json::array();
      for (const auto& v : c.probes) probes.push_back(membership_json(game, v));
      cj["probes"] = std::move(probes);
    }
    components.push_back(std::move(cj));
  }
  out["components"] = std::move(components);
  if (!set.diagnostics.empty()) out["diagnostics"] = set.diagnostics;
  return out;
}

Json monotonicity_report(const Game& game, const MixedProfile& profile, double tol,
                         double m) {
  auto violations = [&](const MonotonicityVerdict& v) {
    Json list = Json::array();
    for (const auto& x : v.violations) {
      list.push_back({{"player", game.player_name(x.player)},
                      {"action", game.action_name(x.player, x.action)},
                      {"other", game.action_name(x.player, x.other)},
                      {"prob_action", rounded(x.prob_action)},
                      {"prob_other", rounded(x.prob_other)},
                      {"utility_action", rounded(x.utility_action)},
                      {"utility_other", rounded(x.utility_other)}});
    }
    return list;
  };
  Json out;
  out["profile"] = profile_to_json(game, profile);
  Json utilities = Json::object();
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    utilities[game.player_name(i)] = strategy_json(expected_utility(game, profile, i));
  }
  out["utilities"] = std::move(utilities);
  const auto weak = is_weakly_payoff_monotone(game, profile, tol);
  const auto strict = is_payoff_monotone(game, profile, tol);
  const auto mweak = is_m_weakly_payoff_monotone(game, profile, m, tol);
  out["weakly_payoff_monotone"] = {{"satisfied", weak.satisfied},
                                   {"violations", violations(weak)}};
  out["payoff_monotone"] = {{"satisfied", strict.satisfied},
                            {"violations", violations(strict)}};
  out["m_weakly_payoff_monotone"] = {
      {"m", m}, {"satisfied", mweak.satisfied}, {"violations", violations(mweak)}};
  out["interior"] = profile.is_interior();
  out["tolerance"] = tol;
  return out;
}

std::string csv_number(double value) { return format_double(value); }

std::string trace_csv(const Game& game, const LogitPath& path) {
  std::ostringstream os;
  os << "lambda";
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    for (std::size_t a = 0; a < game.num_actions(i); ++a) {
      os << ',' << game.player_name(i) << ':' << game.action_name(i, a);
    }
  }
  os << ",residual\n";
  for (const auto& p : path.points) {
    os << csv_number(p.lambda);
    for (std::size_t i = 0; i < game.num_players(); ++i) {
      for (double x : p.profile.strategy(i)) os << ',' << csv_number(x);
    }
    os << ',' << csv_number(p.residual) << '\n';
  }
  return os.str();
}

Json cc_check_json(const CcCheck& check) {
  return {{"equilibrium", check.equilibrium},
          {"max_defect", check.max_defect},
          {"defects", check.defects}};
}

}  // namespace empeq
