#include "empeq/fixed_point.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace empeq {
namespace {

using Strategies = std::vector<std::vector<double>>;

double residual_of(const Strategies& s, const Strategies& image) {
  double r = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (image[i].size() != s[i].size()) {
      throw std::invalid_argument("fixed-point map changed the profile shape");
    }
    for (std::size_t a = 0; a < s[i].size(); ++a) {
      r = std::max(r, std::abs(image[i][a] - s[i][a]));
    }
  }
  return std::isnan(r) ? std::numeric_limits<double>::infinity() : r;
}

// Clamps tiny negatives and renormalizes each vector exactly.
Strategies tidy(Strategies s) {
  for (auto& v : s) {
    double sum = 0.0;
    for (double& p : v) {
      if (p < 0.0) p = 0.0;
      sum += p;
    }
    for (double& p : v) p /= sum;
  }
  return s;
}

struct Eval {
  Strategies s;
  Strategies image;
  double residual;
};

Eval evaluate(const ProfileMap& map, Strategies s) {
  MixedProfile profile(s);
  Eval e{profile.strategies(), map(profile), 0.0};
  e.residual = residual_of(e.s, e.image);
  return e;
}

Eigen::VectorXd reduced_defect(const Eval& e) {
  std::size_t dim = 0;
  for (const auto& v : e.s) dim += v.size() - 1;
  Eigen::VectorXd g(dim);
  std::size_t r = 0;
  for (std::size_t i = 0; i < e.s.size(); ++i) {
    for (std::size_t a = 0; a + 1 < e.s[i].size(); ++a) {
      g(r++) = e.image[i][a] - e.s[i][a];
    }
  }
  return g;
}

// Applies a reduced-coordinate step; returns nullopt if it leaves the simplex.
std::optional<Strategies> step(const Strategies& s, const Eigen::VectorXd& dz) {
  Strategies out = s;
  std::size_t r = 0;
  for (auto& v : out) {
    double last = 1.0;
    for (std::size_t a = 0; a + 1 < v.size(); ++a) {
      v[a] += dz(r++);
      if (!(v[a] > 0.0)) return std::nullopt;
      last -= v[a];
    }
    if (!(last > 0.0)) return std::nullopt;
    v.back() = last;
  }
  return out;
}

bool newton(const ProfileMap& map, Eval& e, const FixedPointOptions& options,
            int& iterations) {
  for (int it = 0; it < options.newton_iterations; ++it) {
    if (e.residual < options.tolerance) return true;
    const Eigen::VectorXd g = reduced_defect(e);
    const Eigen::Index dim = g.size();
    if (dim == 0) return e.residual < options.tolerance;
    Eigen::MatrixXd J(dim, dim);
    Eigen::Index col = 0;
    for (std::size_t i = 0; i < e.s.size(); ++i) {
      for (std::size_t a = 0; a + 1 < e.s[i].size(); ++a, ++col) {
        // Step away from the nearer boundary between this entry and the last.
        double h = options.jacobian_step;
        if (e.s[i][a] < e.s[i].back()) {
          h = std::min(h, 0.5 * e.s[i].back());
        } else {
          h = -std::min(h, 0.5 * e.s[i][a]);
        }
        Strategies shifted = e.s;
        shifted[i][a] += h;
        shifted[i].back() -= h;
        Eval f{shifted, map(MixedProfile(shifted)), 0.0};
        J.col(col) = (reduced_defect(f) - g) / h;
      }
    }
    const Eigen::VectorXd dz = J.colPivHouseholderQr().solve(-g);
    if (!dz.allFinite()) return false;
    double scale = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 50; ++ls, scale *= 0.5) {
      auto trial = step(e.s, scale * dz);
      if (!trial) continue;
      Eval next = evaluate(map, tidy(std::move(*trial)));
      if (next.residual < e.residual) {
        e = std::move(next);
        improved = true;
        break;
      }
    }
    ++iterations;
    if (!improved) return false;
  }
  return e.residual < options.tolerance;
}

}  // namespace

double fixed_point_residual(const ProfileMap& map, const MixedProfile& profile) {
  return residual_of(profile.strategies(), map(profile));
}

FixedPointResult solve_fixed_point(const ProfileMap& map, const MixedProfile& start,
                                   const FixedPointOptions& options) {
  FixedPointResult result;
  Eval e = evaluate(map, start.strategies());
  Eval best = e;
  double alpha = 1.0;
  int since_best = 0;
  int it = 0;
  bool tried_newton = false;
  while (it < options.max_iterations && e.residual >= options.tolerance) {
    Strategies next = e.s;
    for (std::size_t i = 0; i < next.size(); ++i) {
      for (std::size_t a = 0; a < next[i].size(); ++a) {
        next[i][a] = (1.0 - alpha) * e.s[i][a] + alpha * e.image[i][a];
      }
    }
    Eval candidate = evaluate(map, tidy(std::move(next)));
    ++it;
    if (candidate.residual > e.residual) {
      alpha = std::max(alpha * 0.5, 1e-6);
    } else if (alpha < 1.0 && candidate.residual < 0.5 * e.residual) {
      alpha = std::min(1.0, alpha * 1.25);
    }
    e = std::move(candidate);
    if (e.residual < best.residual * 0.999) {
      best = e;
      since_best = 0;
    } else if (++since_best > 200 && !tried_newton) {
      // Stalled or oscillating: try Newton from the best point so far.
      tried_newton = true;
      result.used_newton = true;
      Eval trial = best;
      int newton_its = 0;
      const bool ok = newton(map, trial, options, newton_its);
      it += newton_its;
      if (trial.residual < best.residual) best = trial;
      if (ok) break;
      e = best;
      alpha = 0.1;
      since_best = 0;
    }
    if (e.residual < best.residual) best = e;
  }
  if (best.residual >= options.tolerance && !tried_newton) {
    result.used_newton = true;
    int newton_its = 0;
    newton(map, best, options, newton_its);
    it += newton_its;
  }
  if (e.residual < best.residual) best = e;
  result.profile = MixedProfile(best.s);
  result.residual = best.residual;
  result.converged = best.residual < options.tolerance;
  result.iterations = it;
  return result;
}

}  // namespace empeq
