#include "empeq/qre.h"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace empeq {

std::vector<double> logistic(std::span<const double> utilities, double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw std::invalid_argument("logistic precision must be finite and nonnegative");
  }
  std::vector<double> out(utilities.size());
  const double top = *std::max_element(utilities.begin(), utilities.end());
  double sum = 0.0;
  for (std::size_t a = 0; a < utilities.size(); ++a) {
    out[a] = std::max(std::exp(lambda * (utilities[a] - top)), DBL_MIN);
    sum += out[a];
  }
  for (double& p : out) p /= sum;
  return out;
}

Qrf logistic_qrf(double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw std::invalid_argument("logistic precision must be finite and nonnegative");
  }
  return Qrf("logistic", lambda, [lambda](std::size_t, std::span<const double> u) {
    return logistic(u, lambda);
  });
}

ProfileMap response_map(const Game& game, const Qrf& qrf) {
  return [&game, qrf](const MixedProfile& s) {
    std::vector<std::vector<double>> out(game.num_players());
    for (std::size_t i = 0; i < game.num_players(); ++i) {
      out[i] = qrf(i, expected_utility(game, s, i));
    }
    return out;
  };
}

QrePoint qre_fixed_point(const Game& game, const Qrf& qrf, const MixedProfile& start,
                         const FixedPointOptions& options) {
  check_compatible(game, start);
  const auto r = solve_fixed_point(response_map(game, qrf), start, options);
  return QrePoint{qrf.lambda(), r.profile, r.residual, r.converged};
}

std::vector<double> default_lambda_schedule(double lambda_max) {
  if (!(lambda_max > 1e-2)) throw std::invalid_argument("lambda_max must exceed 0.01");
  std::vector<double> out = {0.0};
  const double lo = -2.0, hi = std::log10(lambda_max);
  for (int j = 0; j < 40; ++j) out.push_back(std::pow(10.0, lo + (hi - lo) * j / 39.0));
  out[1] = 1e-2;
  out.back() = lambda_max;
  return out;
}

LogitPath trace_logit_path(const Game& game, const std::vector<double>& schedule,
                           const FixedPointOptions& options) {
  if (schedule.empty() || schedule.front() != 0.0) {
    throw std::invalid_argument("lambda schedule must start at 0");
  }
  for (std::size_t j = 1; j < schedule.size(); ++j) {
    if (!(schedule[j] > schedule[j - 1])) {
      throw std::invalid_argument("lambda schedule must be increasing");
    }
  }
  constexpr double kJump = 0.1;
  LogitPath path;
  const MixedProfile centroid = MixedProfile::uniform(game);
  QrePoint current = qre_fixed_point(game, logistic_qrf(0.0), centroid, options);
  path.points.push_back(current);
  for (std::size_t j = 1; j < schedule.size(); ++j) {
    const double target = schedule[j];
    while (current.lambda < target) {
      double next = target;
      for (;;) {
        QrePoint p = qre_fixed_point(game, logistic_qrf(next), current.profile, options);
        const double step = next - current.lambda;
        const bool tiny = step <= 1e-9 * std::max(1.0, next);
        if (p.converged && (p.profile.distance(current.profile) <= kJump || tiny)) {
          if (tiny && p.profile.distance(current.profile) > kJump) {
            path.diagnostics.push_back("branch jump accepted at lambda " +
                                       std::to_string(next));
          }
          current = std::move(p);
          path.points.push_back(current);
          break;
        }
        if (tiny) {
          std::ostringstream os;
          os << "logit path failed at lambda " << next << " (residual "
             << p.residual << ")";
          throw std::runtime_error(os.str());
        }
        next = current.lambda + 0.5 * step;
      }
    }
  }
  const EquilibriumSet nash = enumerate_nash(game);
  if (!nash.isolated.empty() || !nash.components.empty()) {
    path.nearest = nearest_equilibrium(nash, path.points.back().profile);
  }
  return path;
}

PerturbedPoint perturbed_monotone_point(const Game& game, const MixedProfile& mu,
                                        double zeta, double lambda,
                                        const FixedPointOptions& options) {
  if (!(zeta > 0.0 && zeta < 1.0)) throw std::invalid_argument("zeta must lie in (0, 1)");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  check_compatible(game, mu);
  if (!is_weakly_payoff_monotone(game, mu)) {
    throw std::invalid_argument("mu is not weakly payoff monotone");
  }
  // Writing beta = (1 - zeta) mu + zeta gamma, the fixed point is solved in
  // gamma = logistic(U(beta)). Iterating on beta directly starts within
  // O(zeta) of the answer, so for small zeta the stopping rule fires before
  // the zeta-sized separation of tied actions is resolved.
  auto mix = [&](const MixedProfile& gamma) {
    std::vector<std::vector<double>> beta(game.num_players());
    for (std::size_t i = 0; i < game.num_players(); ++i) {
      beta[i].resize(game.num_actions(i));
      for (std::size_t a = 0; a < beta[i].size(); ++a) {
        beta[i][a] = (1.0 - zeta) * mu.prob(i, a) + zeta * gamma.prob(i, a);
      }
    }
    return MixedProfile(std::move(beta));
  };
  ProfileMap map = [&](const MixedProfile& gamma) {
    const MixedProfile beta = mix(gamma);
    std::vector<std::vector<double>> out(game.num_players());
    for (std::size_t i = 0; i < game.num_players(); ++i) {
      out[i] = logistic(expected_utility(game, beta, i), lambda);
    }
    return out;
  };
  std::vector<std::vector<double>> start(game.num_players());
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    start[i] = logistic(expected_utility(game, mu, i), lambda);
  }
  const auto r = solve_fixed_point(map, MixedProfile(std::move(start)), options);
  if (!r.converged) {
    throw std::runtime_error("perturbed fixed point did not converge (residual " +
                             std::to_string(r.residual) + ")");
  }
  PerturbedPoint out;
  out.profile = mix(r.profile);
  out.distance = out.profile.distance(mu);
  out.residual = zeta * r.residual;
  out.interior = out.profile.is_interior();
  out.verdict = is_payoff_monotone(game, out.profile);
  return out;
}

QrfAudit qrf_regularity_audit(const Qrf& qrf, int sample_count, std::uint64_t seed,
                              std::size_t num_players) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(-10.0, 10.0);
  std::uniform_int_distribution<int> size(2, 4);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  QrfAudit audit;
  auto report = [&](std::size_t player, const std::vector<double>& x,
                    const std::string& what) {
    if (audit.counterexamples.size() >= 20) return;
    std::ostringstream os;
    os << what << " for player " << player << " at utilities (";
    for (std::size_t a = 0; a < x.size(); ++a) os << (a ? ", " : "") << x[a];
    os << ")";
    audit.counterexamples.push_back(os.str());
  };
  for (int n = 0; n < sample_count; ++n) {
    const std::size_t player = static_cast<std::size_t>(n) % num_players;
    std::vector<double> x(size(rng));
    for (double& v : x) v = value(rng);
    // Occasionally force ties so monotonicity is tested on equal entries.
    if (n % 5 == 0) x[1] = x[0];
    ++audit.samples;
    const auto p = qrf(player, x);
    if (p.size() != x.size()) {
      report(player, x, "wrong output size");
      continue;
    }
    double sum = 0.0;
    for (double v : p) sum += v;
    if (!std::all_of(p.begin(), p.end(), [](double v) { return v > 0.0; }) ||
        std::abs(sum - 1.0) > 1e-9) {
      report(player, x, "output not an interior distribution");
    }
    for (std::size_t a = 0; a < x.size(); ++a) {
      auto bumped = x;
      bumped[a] += 0.1;
      if (!(qrf(player, bumped)[a] > p[a])) {
        report(player, x, "not responsive in action " + std::to_string(a));
      }
      for (std::size_t b = 0; b < x.size(); ++b) {
        if (x[a] >= x[b] && p[a] < p[b] - 1e-12) {
          report(player, x, "not monotone in actions " + std::to_string(a) + "," +
                                std::to_string(b));
        }
      }
    }
    auto nudged = x;
    for (double& v : nudged) v += 1e-7 * unit(rng);
    const auto q = qrf(player, nudged);
    double jump = 0.0;
    for (std::size_t a = 0; a < p.size(); ++a) jump = std::max(jump, std::abs(q[a] - p[a]));
    if (jump > 1e-3) report(player, x, "discontinuous response");
  }
  return audit;
}

}  // namespace empeq
