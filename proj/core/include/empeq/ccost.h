#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "empeq/game.h"
#include "empeq/game_io.h"
#include "empeq/qre.h"

namespace empeq {

// A convex, strictly decreasing cost of playing an action with probability y.
//
// Knots z_0 < ... < z_J = 1 carry slopes s_0 < ... < s_J = 0. Between
// consecutive knots f is the quadratic whose derivative interpolates the two
// slopes linearly; below z_0 it is the hyperbola F_0 + |s_0| z_0 (z_0 / y - 1),
// which matches value and slope at z_0 and diverges at 0. f(1) = 0.
class ControlCostSpline {
 public:
  ControlCostSpline(std::vector<double> knots, std::vector<double> slopes,
                    double epsilon = 0.0,
                    std::optional<double> calibration = std::nullopt);

  double value(double y) const;
  double derivative(double y) const;
  // The y in (0, 1] with f'(y) = v; 1 for v >= 0.
  double inverse_derivative(double v) const;

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& slopes() const { return slopes_; }
  // f at each knot.
  const std::vector<double>& values() const { return values_; }
  // c in f(y) = f(z_0) + c (1/y - 1/z_0) below the first knot.
  double tail_coefficient() const { return -slopes_.front() * knots_.front() * knots_.front(); }
  double epsilon() const { return epsilon_; }
  std::optional<double> calibration() const { return calibration_; }

  Json to_json() const;
  // Validates the document and keeps every stored number verbatim, so
  // from_json(j).to_json() == j.
  static ControlCostSpline from_json(const Json& doc);

 private:
  ControlCostSpline() = default;
  void validate() const;

  std::vector<double> knots_;
  std::vector<double> slopes_;
  std::vector<double> values_;
  double epsilon_ = 0.0;
  std::optional<double> calibration_;
};

// Thrown when a calibration point cannot keep f(y*) within epsilon of f at
// the next level above it.
class CalibrationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Spline for which an interior strategy sigma with expected utilities u
// satisfies u(a) - f'(sigma(a)) = const across actions.
//
// Equal probabilities (relative 1e-12) form one level and must carry equal
// utilities (within 1e-9); utilities must strictly increase across levels.
// Slopes are 0 at 1, -epsilon at the top level, and step down by the utility
// gap at each lower level, with one more -epsilon at y0. A level numerically
// equal to 1 takes the terminal knot. An optional calibration knot y*
// between levels gets a slope keeping f(y*) < f(next level) + epsilon;
// theta in (0, 1) places that slope within its admissible interval.
ControlCostSpline build_spline(std::span<const double> sigma,
                               std::span<const double> utilities, double epsilon,
                               double y0, std::optional<double> y_star = std::nullopt,
                               double theta = 0.5);

class ControlCostGame {
 public:
  ControlCostGame(Game game, std::vector<ControlCostSpline> splines);

  const Game& game() const { return game_; }
  const std::vector<ControlCostSpline>& splines() const { return splines_; }

  // U_i(sigma) - sum_a f_i(sigma_i(a)).
  double payoff(const MixedProfile& profile, std::size_t player) const;

 private:
  Game game_;
  std::vector<ControlCostSpline> splines_;
};

// One spline per player built from the profile's own utilities, so the
// profile is an equilibrium of the resulting game. Profile must be interior
// and payoff monotone.
ControlCostGame calibrate(const Game& game, const MixedProfile& profile,
                          double epsilon, double y0);

struct CcCheck {
  bool equilibrium = false;
  // Largest spread of U(a) - f'(sigma(a)) across one player's actions.
  double max_defect = 0.0;
  std::vector<double> defects;
};

// Throws std::invalid_argument for non-interior profiles.
CcCheck cc_equilibrium_check(const ControlCostGame& ccg, const MixedProfile& profile,
                             double tol = 1e-9);

// Unique maximizer of sigma . x - sum_a f(sigma(a)) over the simplex.
std::vector<double> induced_response(const ControlCostSpline& spline,
                                     std::span<const double> utilities);

// Regular QRF of the control-cost game, one spline per player.
Qrf control_cost_qrf(std::vector<ControlCostSpline> splines);

struct VanishingStep {
  std::size_t index = 0;
  double lambda = 0.0;
  bool retained = false;
  std::string skip_reason;
  std::vector<ControlCostSpline> splines;
  // Per player: 1 when the lowest limit best response has limit probability
  // 0, 2 when it is positive but not the least likely action, 3 otherwise.
  std::vector<int> cases;
  // Max over players of f on {0.01, 0.02, ..., 1}.
  double sup_norm = 0.0;
  double foc_defect = 0.0;
  double nash_defect = 0.0;
};

struct VanishingSequence {
  std::vector<VanishingStep> steps;
  std::vector<std::size_t> retained;
};

// Builds control costs for which each profile of the sequence is an
// equilibrium, using epsilon = 1/(2 lambda) and y0 below both min sigma and
// 1/lambda, plus a calibration knot near 1/lambda where the limit requires
// one. `scales` are the lambdas (default 1, 2, ...). Steps whose
// calibration is unattainable are skipped.
VanishingSequence vanishing_sequence(const Game& game,
                                     const std::vector<MixedProfile>& sequence,
                                     const MixedProfile& limit,
                                     std::vector<double> scales = {});

}  // namespace empeq
