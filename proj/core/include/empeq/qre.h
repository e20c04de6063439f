#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "empeq/fixed_point.h"
#include "empeq/game.h"
#include "empeq/monotone.h"
#include "empeq/nash.h"

namespace empeq {

// A quantal response function profile: for each player, a map from the
// vector of expected utilities to an interior mixed strategy.
class Qrf {
 public:
  using Map = std::function<std::vector<double>(std::size_t player,
                                                std::span<const double> utilities)>;

  Qrf(std::string kind, double lambda, Map map)
      : kind_(std::move(kind)), lambda_(lambda), map_(std::move(map)) {}

  const std::string& kind() const { return kind_; }
  // Logistic precision; 0 for other kinds.
  double lambda() const { return lambda_; }

  std::vector<double> operator()(std::size_t player,
                                 std::span<const double> utilities) const {
    return map_(player, utilities);
  }

 private:
  std::string kind_;
  double lambda_;
  Map map_;
};

// Softmax with precision lambda, computed after subtracting the maximum.
// Entries are floored at the smallest normal double so outputs stay interior.
std::vector<double> logistic(std::span<const double> utilities, double lambda);

Qrf logistic_qrf(double lambda);

// The map sigma -> (q_i(U_i(sigma_{-i}, .)))_i.
ProfileMap response_map(const Game& game, const Qrf& qrf);

struct QrePoint {
  double lambda = 0.0;
  MixedProfile profile;
  double residual = 0.0;
  bool converged = false;
};

QrePoint qre_fixed_point(const Game& game, const Qrf& qrf, const MixedProfile& start,
                         const FixedPointOptions& options = {});

// 0 followed by 40 log-spaced points on [1e-2, lambda_max].
std::vector<double> default_lambda_schedule(double lambda_max = 1e3);

struct LogitPath {
  std::vector<QrePoint> points;
  // Nearest enumerated equilibrium to the last point, when the game has one.
  std::optional<NearestEquilibrium> nearest;
  std::vector<std::string> diagnostics;
};

// Continuation along the logit correspondence from the centroid. Each point
// seeds the next; a failed or discontinuous step is retried with half the
// lambda increment. Throws std::runtime_error naming the failing lambda when
// no step succeeds.
LogitPath trace_logit_path(const Game& game, const std::vector<double>& schedule,
                           const FixedPointOptions& options = {});

struct PerturbedPoint {
  MixedProfile profile;
  double distance = 0.0;
  // Fixed-point residual of the beta map.
  double residual = 0.0;
  bool interior = false;
  MonotonicityVerdict verdict;
};

// Fixed point of beta -> (1 - zeta) mu + zeta * logistic_lambda(U(beta)).
// mu must be weakly payoff monotone.
PerturbedPoint perturbed_monotone_point(const Game& game, const MixedProfile& mu,
                                        double zeta, double lambda = 1.0,
                                        const FixedPointOptions& options = {});

struct QrfAudit {
  int samples = 0;
  bool clean() const { return counterexamples.empty(); }
  std::vector<std::string> counterexamples;
};

// Samples utility vectors of 2 to 4 entries in [-10, 10] and checks
// interiority, responsiveness (raising one utility by 0.1 raises its
// probability), monotonicity (higher utility never gets lower probability)
// and continuity (a 1e-7 perturbation moves outputs by at most 1e-3).
QrfAudit qrf_regularity_audit(const Qrf& qrf, int sample_count, std::uint64_t seed,
                              std::size_t num_players = 1);

}  // namespace empeq
