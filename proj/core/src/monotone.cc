#include "empeq/monotone.h"

#include <cmath>
#include <stdexcept>

#include "empeq/game_io.h"

namespace empeq {
namespace {

template <typename Violates>
MonotonicityVerdict scan_pairs(const Game& game, const MixedProfile& profile,
                               Violates violates) {
  check_compatible(game, profile);
  MonotonicityVerdict verdict;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    const auto u = expected_utility(game, profile, i);
    const auto s = profile.strategy(i);
    for (std::size_t a = 0; a < u.size(); ++a) {
      for (std::size_t b = 0; b < u.size(); ++b) {
        if (a == b || !violates(s[a], s[b], u[a], u[b])) continue;
        verdict.violations.push_back({i, a, b, s[a], s[b], u[a], u[b]});
      }
    }
  }
  verdict.satisfied = verdict.violations.empty();
  return verdict;
}

}  // namespace

MonotonicityVerdict is_weakly_payoff_monotone(const Game& game,
                                              const MixedProfile& profile,
                                              double tol) {
  return scan_pairs(game, profile, [tol](double pa, double pb, double ua, double ub) {
    return pa > pb + tol && !(ua > ub + tol);
  });
}

MonotonicityVerdict is_payoff_monotone(const Game& game,
                                       const MixedProfile& profile,
                                       double tol) {
  return scan_pairs(game, profile, [tol](double pa, double pb, double ua, double ub) {
    if (std::abs(ua - ub) <= tol) return std::abs(pa - pb) > tol;
    return ua > ub && !(pa > pb);
  });
}

MonotonicityVerdict is_m_weakly_payoff_monotone(const Game& game,
                                                const MixedProfile& profile,
                                                double m, double tol) {
  if (!(m >= 0.0 && m <= 1.0)) throw std::invalid_argument("m must lie in [0, 1]");
  return scan_pairs(game, profile, [m, tol](double pa, double pb, double ua, double ub) {
    return ua >= ub - tol && !(pa >= m * pb - tol);
  });
}

std::vector<RegionPoint> sample_monotone_region(const Game& game,
                                                int resolution,
                                                MonotoneKind kind, double tol) {
  if (resolution < 1) throw std::invalid_argument("resolution must be positive");
  const std::size_t n = game.num_players();
  for (std::size_t i = 0; i < n; ++i) {
    if (game.num_actions(i) != 2) {
      throw std::invalid_argument("region sampling needs two actions per player");
    }
  }
  std::vector<int> digits(n, 0);
  std::vector<RegionPoint> out;
  for (;;) {
    RegionPoint point;
    std::vector<std::vector<double>> s(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double p = static_cast<double>(digits[i]) / resolution;
      point.coords.push_back(p);
      s[i] = {p, 1.0 - p};
    }
    const MixedProfile profile(std::move(s));
    point.satisfied = kind == MonotoneKind::kWeak
                          ? is_weakly_payoff_monotone(game, profile, tol).satisfied
                          : is_payoff_monotone(game, profile, tol).satisfied;
    out.push_back(std::move(point));
    std::size_t j = n;
    while (j-- > 0) {
      if (++digits[j] <= resolution) break;
      digits[j] = 0;
    }
    if (j == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

double satisfied_fraction(const std::vector<RegionPoint>& points) {
  if (points.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& p : points) hits += p.satisfied ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(points.size());
}

std::string region_csv(const std::vector<RegionPoint>& points) {
  std::string out;
  const std::size_t k = points.empty() ? 0 : points.front().coords.size();
  for (std::size_t i = 0; i < k; ++i) out += "coord_" + std::to_string(i + 1) + ",";
  out += "satisfied\n";
  for (const auto& p : points) {
    for (double c : p.coords) out += format_double(c) + ",";
    out += p.satisfied ? "1\n" : "0\n";
  }
  return out;
}

}  // namespace empeq
