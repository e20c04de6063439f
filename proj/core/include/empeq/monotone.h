#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "empeq/game.h"

namespace empeq {

inline constexpr double kMonotoneTolerance = 1e-9;

struct MonotonicityViolation {
  std::size_t player = 0;
  // The pair (action, other) for which the tested implication fails.
  std::size_t action = 0;
  std::size_t other = 0;
  double prob_action = 0.0;
  double prob_other = 0.0;
  double utility_action = 0.0;
  double utility_other = 0.0;
};

struct MonotonicityVerdict {
  bool satisfied = true;
  std::vector<MonotonicityViolation> violations;

  explicit operator bool() const { return satisfied; }
};

// sigma(a) > sigma(b) + tol requires U(a) > U(b) + tol. Probability ties
// impose nothing.
MonotonicityVerdict is_weakly_payoff_monotone(const Game& game,
                                              const MixedProfile& profile,
                                              double tol = kMonotoneTolerance);

// Utilities within tol carry probabilities within tol; otherwise the
// probability order strictly agrees with the utility order. Probability gaps
// below tol count when the utility gap is clear, since fixed points near a
// boundary separate such actions by tiny amounts.
MonotonicityVerdict is_payoff_monotone(const Game& game,
                                       const MixedProfile& profile,
                                       double tol = kMonotoneTolerance);

// U(a) >= U(b) - tol requires sigma(a) >= m * sigma(b) - tol.
MonotonicityVerdict is_m_weakly_payoff_monotone(const Game& game,
                                                const MixedProfile& profile,
                                                double m,
                                                double tol = kMonotoneTolerance);

enum class MonotoneKind { kWeak, kStrict };

struct RegionPoint {
  // Probability of each player's first action.
  std::vector<double> coords;
  bool satisfied = false;
};

// Grid k/resolution on each coordinate, lexicographic with the first player
// outermost. Every player must have exactly two actions.
std::vector<RegionPoint> sample_monotone_region(const Game& game,
                                                int resolution,
                                                MonotoneKind kind,
                                                double tol = kMonotoneTolerance);

double satisfied_fraction(const std::vector<RegionPoint>& points);

// Header coord_1,...,coord_k,satisfied; booleans as 0/1.
std::string region_csv(const std::vector<RegionPoint>& points);

}  // namespace empeq
