#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "empeq/game.h"
#include "empeq/nash.h"

namespace empeq {

enum class Decision { kMember, kNonMember, kInconclusive };
std::string to_string(Decision d);

struct EmpiricalOptions {
  std::vector<double> delta_schedule = {1e-1, 1e-2, 1e-3, 1e-4};
  // 1 decides empirical membership; m in [0, 1) decides m-empirical
  // membership.
  double m = 1.0;
  std::uint64_t seed = 0;
  // Random starts per order profile in the penalty search (games with other
  // than two players).
  int penalty_seeds = 32;
  // Total penalty solves per delta before giving up as inconclusive.
  int max_penalty_runs = 2048;
  double nash_tol = kNashTolerance;
};

struct MembershipWitness {
  double delta = 0.0;
  MixedProfile profile;
  double distance = 0.0;
};

struct Refutation {
  enum class Kind { kDominance, kOrderInfeasible };
  Kind kind = Kind::kDominance;
  double m = 1.0;
  // Dominance: player's `dominating` action weakly dominates `dominated`, so
  // sigma(dominating) >= m * sigma(dominated) in every admissible profile.
  std::size_t player = 0;
  std::size_t dominated = 0;
  std::size_t dominating = 0;
  // Order infeasibility: no admissible profile lies within delta.
  double delta = 0.0;
  std::string certificate;
};

struct MembershipVerdict {
  MixedProfile candidate;
  Decision decision = Decision::kInconclusive;
  // One entry per scheduled delta when member (decreasing delta).
  std::vector<MembershipWitness> witness;
  std::optional<Refutation> refutation;
  std::vector<std::string> diagnostics;
};

// Decides whether a Nash profile is the limit of interior payoff monotone
// profiles (m = 1) or of m-weakly payoff monotone profiles (m < 1). Two-player
// games are decided exactly by linear programming over weak orders of both
// players' actions; other games use a penalty search that can only confirm
// membership. Throws std::invalid_argument for a non-Nash candidate.
MembershipVerdict empirical_membership(const Game& game, const MixedProfile& candidate,
                                       const EmpiricalOptions& options = {});

// Whether the candidate passes the dominance rule alone.
std::optional<Refutation> dominance_refutation(const Game& game,
                                               const MixedProfile& candidate,
                                               double m, double tol = 1e-9);

struct RefutationCheck {
  bool holds = false;
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::string detail;
};

// Re-verifies a certificate. Dominance: the forced inequality is checked on
// `samples` randomly drawn weakly (m-weakly) payoff monotone profiles.
// Order infeasibility: the exact search is repeated at the recorded delta.
RefutationCheck verify_refutation(const Game& game, const MixedProfile& candidate,
                                  const Refutation& refutation,
                                  std::size_t samples = 10000,
                                  std::uint64_t seed = 0);

// Random profile satisfying is_weakly_payoff_monotone (m = 1) or
// is_m_weakly_payoff_monotone, drawn by sorting random probability vectors
// against the induced utilities and rejecting failures.
std::optional<MixedProfile> sample_admissible_profile(const Game& game, double m,
                                                      std::mt19937_64& rng);

struct ComponentMembership {
  NashComponent component;
  // Segment components: grid parameters and decisions.
  std::vector<double> grid;
  std::vector<Decision> decisions;
  // Maximal runs of member grid points, as [first, last] parameters.
  std::vector<std::pair<double, double>> member_intervals;
  // Higher-dimensional components: extreme profiles then the barycenter.
  std::vector<MembershipVerdict> probes;
};

struct EmpiricalSet {
  std::vector<MembershipVerdict> isolated;
  std::vector<ComponentMembership> components;
  bool pure_only = false;
  std::vector<std::string> diagnostics;
};

inline constexpr int kComponentGridPoints = 101;

// Membership for every enumerated equilibrium, with a 101-point grid along
// each segment component.
EmpiricalSet enumerate_empirical(const Game& game, const EmpiricalOptions& options = {});
// Same, over an already enumerated equilibrium set.
EmpiricalSet enumerate_empirical(const Game& game, const EquilibriumSet& set,
                                 const EmpiricalOptions& options = {});

struct ProbeResult {
  MixedProfile candidate;
  MembershipVerdict verdict;
  double lambda = 0.0;
  double path_distance = 0.0;
};

// Terminal logit-path point, its nearest enumerated equilibrium and that
// equilibrium's membership verdict.
ProbeResult nonemptiness_probe(const Game& game, const EmpiricalOptions& options = {});

}  // namespace empeq
