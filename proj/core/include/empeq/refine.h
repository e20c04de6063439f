#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "empeq/game.h"
#include "empeq/nash.h"

namespace empeq {

enum class Verdict { kVerified, kRefuted, kInconclusive };
std::string to_string(Verdict v);

struct RefinementWitness {
  double epsilon = 0.0;
  MixedProfile profile;
  double distance = 0.0;
};

struct RefinementCheck {
  Verdict verdict = Verdict::kInconclusive;
  // One entry per scheduled epsilon when verified.
  std::vector<RefinementWitness> witness;
  // Human-readable refutation certificate.
  std::string certificate;
  std::vector<std::string> diagnostics;
};

struct RefinementOptions {
  std::vector<double> schedule = {1e-1, 1e-2, 1e-3, 1e-4};
  // Witness at epsilon must lie within radius_factor * epsilon of the target.
  double radius_factor = 10.0;
  // Radius of the exhaustive search used to refute at the smallest epsilon.
  double refutation_radius = 0.1;
  double nash_tol = kNashTolerance;
};

// No positive-probability action is weakly dominated.
bool is_undominated(const Game& game, const MixedProfile& profile);

// Undominated part of each component: the face spanned by extreme strategies
// that avoid weakly dominated actions. Empty vertex lists mean no such part.
struct UndominatedFilter {
  std::vector<bool> isolated;
  std::vector<NashComponent> component_faces;
};
UndominatedFilter filter_undominated(const Game& game, const EquilibriumSet& set);

// Interior, and every action played with probability above epsilon (+tol) is
// a best response within tol.
bool is_epsilon_perfect(const Game& game, const MixedProfile& profile,
                        double epsilon, double tol = 1e-9);

// Interior, and U(a) < U(b) - tol implies sigma(a) <= epsilon * sigma(b)
// (up to a relative 1e-9 slack).
bool is_epsilon_proper(const Game& game, const MixedProfile& profile,
                       double epsilon, double tol = 1e-9);

// Throw std::invalid_argument if the profile is not Nash within nash_tol.
RefinementCheck check_perfect(const Game& game, const MixedProfile& profile,
                              const RefinementOptions& options = {});
RefinementCheck check_proper(const Game& game, const MixedProfile& profile,
                             const RefinementOptions& options = {});

struct RefinementTag {
  MixedProfile profile;
  bool undominated = false;
  RefinementCheck perfect;
  RefinementCheck proper;
};

// Tags every extreme equilibrium of the set.
std::vector<RefinementTag> classify(const Game& game, const EquilibriumSet& set,
                                    const RefinementOptions& options = {});

}  // namespace empeq
