#pragma once

#include <string>
#include <vector>

#include "empeq/ccost.h"
#include "empeq/empirical.h"
#include "empeq/game_io.h"
#include "empeq/monotone.h"
#include "empeq/nash.h"
#include "empeq/qre.h"
#include "empeq/refine.h"

namespace empeq {

// Probabilities in every report are rounded to 12 significant digits.
inline constexpr int kReportDigits = 12;

Json strategy_json(std::span<const double> strategy, int digits = kReportDigits);
Json component_json(const Game& game, const NashComponent& component);

// Equilibria with refinement flags and witness sequences.
Json nash_report(const Game& game, const EquilibriumSet& set,
                 const std::vector<RefinementTag>& tags);

Json membership_json(const Game& game, const MembershipVerdict& verdict);
Json empirical_report(const Game& game, const EmpiricalSet& set, double m);

Json monotonicity_report(const Game& game, const MixedProfile& profile, double tol,
                         double m);

// Header lambda,<player>:<action>...,residual; one row per accepted point.
std::string trace_csv(const Game& game, const LogitPath& path);

Json cc_check_json(const CcCheck& check);

// Shortest round-trip decimal, used for every CSV number.
std::string csv_number(double value);

}  // namespace empeq
