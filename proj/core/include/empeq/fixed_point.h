#pragma once

#include <functional>
#include <string>
#include <vector>

#include "empeq/game.h"

namespace empeq {

// Maps a profile to another point of the product of simplices.
using ProfileMap =
    std::function<std::vector<std::vector<double>>(const MixedProfile&)>;

struct FixedPointOptions {
  double tolerance = 1e-10;
  int max_iterations = 100000;
  // Forward-difference step of the Newton fallback Jacobian.
  double jacobian_step = 1e-7;
  int newton_iterations = 100;
};

struct FixedPointResult {
  MixedProfile profile;
  // Max-norm distance between the profile and its image.
  double residual = 0.0;
  bool converged = false;
  int iterations = 0;
  bool used_newton = false;
};

// Damped iteration s <- (1 - a) s + a F(s), halving a whenever the residual
// grows. When progress stalls it switches to Newton's method on F(s) - s in
// reduced coordinates (last action of each player eliminated).
FixedPointResult solve_fixed_point(const ProfileMap& map, const MixedProfile& start,
                                   const FixedPointOptions& options = {});

// Max-norm of F(s) - s.
double fixed_point_residual(const ProfileMap& map, const MixedProfile& profile);

}  // namespace empeq
