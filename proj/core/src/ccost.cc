#include "empeq/ccost.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "empeq/monotone.h"

namespace empeq {
namespace {

constexpr double kLevelRelTol = 1e-12;
constexpr double kLevelUtilityTol = 1e-9;

std::vector<double> knot_values(const std::vector<double>& z,
                                const std::vector<double>& s) {
  std::vector<double> f(z.size(), 0.0);
  for (std::size_t j = z.size() - 1; j-- > 0;) {
    f[j] = f[j + 1] - (z[j + 1] - z[j]) * (s[j] + s[j + 1]) / 2.0;
  }
  return f;
}

std::vector<double> number_array(const Json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_array()) {
    throw FormatError(key, "expected an array of numbers");
  }
  std::vector<double> out;
  for (std::size_t j = 0; j < it->size(); ++j) {
    const Json& v = (*it)[j];
    if (!v.is_number()) {
      throw FormatError(std::string(key) + "[" + std::to_string(j) + "]",
                        "expected a number");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

ControlCostSpline::ControlCostSpline(std::vector<double> knots,
                                     std::vector<double> slopes, double epsilon,
                                     std::optional<double> calibration)
    : knots_(std::move(knots)),
      slopes_(std::move(slopes)),
      epsilon_(epsilon),
      calibration_(calibration) {
  validate();
  values_ = knot_values(knots_, slopes_);
}

void ControlCostSpline::validate() const {
  if (knots_.size() < 2 || knots_.size() != slopes_.size()) {
    throw std::invalid_argument("spline needs at least two knots, one slope each");
  }
  if (!(knots_.front() > 0.0)) throw std::invalid_argument("first knot must be positive");
  if (knots_.back() != 1.0) throw std::invalid_argument("last knot must be 1");
  if (slopes_.back() != 0.0) throw std::invalid_argument("slope at 1 must be 0");
  for (std::size_t j = 0; j + 1 < knots_.size(); ++j) {
    if (!(knots_[j] < knots_[j + 1])) {
      throw std::invalid_argument("knots must be strictly increasing");
    }
    if (!(slopes_[j] < slopes_[j + 1])) {
      throw std::invalid_argument("slopes must be strictly increasing");
    }
  }
  for (double s : slopes_) {
    if (!std::isfinite(s)) throw std::invalid_argument("non-finite slope");
  }
}

double ControlCostSpline::value(double y) const {
  if (!(y >= 0.0 && y <= 1.0)) throw std::domain_error("spline argument outside [0, 1]");
  if (y == 0.0) return std::numeric_limits<double>::infinity();
  const double z0 = knots_.front();
  if (y < z0) return values_.front() - slopes_.front() * z0 * (z0 / y - 1.0);
  auto it = std::upper_bound(knots_.begin(), knots_.end(), y);
  if (it == knots_.end()) return 0.0;  // y == 1
  const std::size_t j = static_cast<std::size_t>(it - knots_.begin()) - 1;
  const double h = knots_[j + 1] - knots_[j];
  const double d = y - knots_[j + 1];
  const double r = d / h;
  return values_[j + 1] + slopes_[j + 1] * d +
         (slopes_[j + 1] - slopes_[j]) * r * d / 2.0;
}

double ControlCostSpline::derivative(double y) const {
  if (!(y > 0.0 && y <= 1.0)) throw std::domain_error("spline derivative outside (0, 1]");
  const double z0 = knots_.front();
  if (y < z0) {
    const double r = z0 / y;
    return slopes_.front() * r * r;
  }
  auto it = std::upper_bound(knots_.begin(), knots_.end(), y);
  if (it == knots_.end()) return slopes_.back();
  const std::size_t j = static_cast<std::size_t>(it - knots_.begin()) - 1;
  if (y == knots_[j]) return slopes_[j];
  const double h = knots_[j + 1] - knots_[j];
  return slopes_[j + 1] + (slopes_[j + 1] - slopes_[j]) * ((y - knots_[j + 1]) / h);
}

double ControlCostSpline::inverse_derivative(double v) const {
  if (std::isnan(v)) throw std::domain_error("NaN slope");
  if (v >= 0.0) return 1.0;
  if (v < slopes_.front()) return knots_.front() * std::sqrt(slopes_.front() / v);
  auto it = std::upper_bound(slopes_.begin(), slopes_.end(), v);
  if (it == slopes_.end()) return 1.0;
  const std::size_t j = static_cast<std::size_t>(it - slopes_.begin()) - 1;
  if (v == slopes_[j]) return knots_[j];
  const double h = knots_[j + 1] - knots_[j];
  const double y = knots_[j + 1] + (v - slopes_[j + 1]) / (slopes_[j + 1] - slopes_[j]) * h;
  return std::clamp(y, knots_[j], knots_[j + 1]);
}

Json ControlCostSpline::to_json() const {
  Json doc;
  doc["knots"] = knots_;
  doc["slopes"] = slopes_;
  doc["values"] = values_;
  doc["tail_coefficient"] = tail_coefficient();
  doc["epsilon"] = epsilon_;
  doc["calibration"] = calibration_ ? Json(*calibration_) : Json(nullptr);
  return doc;
}

ControlCostSpline ControlCostSpline::from_json(const Json& doc) {
  if (!doc.is_object()) throw FormatError("$", "expected a spline object");
  ControlCostSpline s;
  s.knots_ = number_array(doc, "knots");
  s.slopes_ = number_array(doc, "slopes");
  s.values_ = number_array(doc, "values");
  auto eps = doc.find("epsilon");
  if (eps != doc.end()) {
    if (!eps->is_number()) throw FormatError("epsilon", "expected a number");
    s.epsilon_ = eps->get<double>();
  }
  auto cal = doc.find("calibration");
  if (cal != doc.end() && !cal->is_null()) {
    if (!cal->is_number()) throw FormatError("calibration", "expected a number or null");
    s.calibration_ = cal->get<double>();
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError("spline", e.what());
  }
  if (s.values_.size() != s.knots_.size()) {
    throw FormatError("values", "expected one value per knot");
  }
  const auto expected = knot_values(s.knots_, s.slopes_);
  for (std::size_t j = 0; j < expected.size(); ++j) {
    const double scale = std::max(1.0, std::abs(expected[j]));
    if (std::abs(expected[j] - s.values_[j]) > 1e-9 * scale) {
      throw FormatError("values[" + std::to_string(j) + "]",
                        "inconsistent with knots and slopes");
    }
  }
  return s;
}

ControlCostSpline build_spline(std::span<const double> sigma,
                               std::span<const double> utilities, double epsilon,
                               double y0, std::optional<double> y_star,
                               double theta) {
  const std::size_t k = sigma.size();
  if (k == 0 || utilities.size() != k) {
    throw std::invalid_argument("sigma and utilities must have the same nonzero size");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be positive");
  }
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in (0, 1)");
  double total = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    if (!(sigma[a] > 0.0) || !std::isfinite(utilities[a])) {
      throw std::invalid_argument("sigma must be interior and utilities finite");
    }
    total += sigma[a];
  }
  if (std::abs(total - 1.0) > 1e-6) throw std::invalid_argument("sigma does not sum to 1");
  const double smallest = *std::min_element(sigma.begin(), sigma.end());
  if (!(y0 > 0.0 && y0 < smallest)) {
    throw std::invalid_argument("y0 must lie strictly between 0 and min sigma");
  }

  // Probability levels, lowest first, with their utilities.
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return sigma[a] < sigma[b]; });
  std::vector<double> level_y, level_u;
  double lo_u = 0.0, hi_u = 0.0;
  for (std::size_t pos = 0; pos < k; ++pos) {
    const std::size_t a = idx[pos];
    const bool fresh =
        level_y.empty() || sigma[a] > level_y.back() * (1.0 + kLevelRelTol);
    if (fresh) {
      if (!level_y.empty() && !(utilities[a] > hi_u)) {
        throw std::invalid_argument(
            "sigma and utilities are not ordinally equivalent (not payoff monotone)");
      }
      level_y.push_back(sigma[a]);
      level_u.push_back(utilities[a]);
      lo_u = hi_u = utilities[a];
    } else {
      lo_u = std::min(lo_u, utilities[a]);
      hi_u = std::max(hi_u, utilities[a]);
      if (hi_u - lo_u > kLevelUtilityTol) {
        throw std::invalid_argument("equal probabilities carry unequal utilities");
      }
    }
  }

  // Knots and slopes from the top down. A level that rounds to 1 is the
  // terminal knot itself.
  const std::size_t L = level_y.size();
  const bool top_at_one = level_y.back() >= 1.0;
  std::vector<double> z, s;  // built top-down, reversed at the end
  z.push_back(1.0);
  s.push_back(0.0);
  double slope = 0.0;
  for (std::size_t l = L; l-- > 0;) {
    if (l == L - 1) {
      if (top_at_one) continue;
      slope = -epsilon;
    } else {
      slope -= level_u[l + 1] - level_u[l];
    }
    z.push_back(level_y[l]);
    s.push_back(slope);
  }
  z.push_back(y0);
  s.push_back(s.back() - epsilon);
  std::reverse(z.begin(), z.end());
  std::reverse(s.begin(), s.end());

  if (y_star) {
    const double y = *y_star;
    if (!(y > y0 && y < 1.0)) {
      throw std::invalid_argument("calibration point must lie in (y0, 1)");
    }
    auto it = std::upper_bound(z.begin(), z.end(), y);
    const std::size_t p = static_cast<std::size_t>(it - z.begin()) - 1;
    if (y <= z[p] * (1.0 + kLevelRelTol) || y >= z[p + 1] * (1.0 - kLevelRelTol)) {
      throw std::invalid_argument("calibration point collides with a probability level");
    }
    const double gap = z[p + 1] - y;
    const double lower_cal = -2.0 * epsilon / gap - s[p + 1];
    const double lower = std::max(s[p], lower_cal);
    if (!(lower < s[p + 1])) {
      std::ostringstream os;
      os << "calibration at " << y << " unattainable: f(y*) < f(" << z[p + 1]
         << ") + epsilon needs a slope above " << lower_cal << ", but the slope at "
         << z[p + 1] << " is " << s[p + 1];
      throw CalibrationError(os.str());
    }
    const double cal_slope = s[p + 1] - theta * (s[p + 1] - lower);
    z.insert(z.begin() + p + 1, y);
    s.insert(s.begin() + p + 1, cal_slope);
  }
  return ControlCostSpline(std::move(z), std::move(s), epsilon, y_star);
}

ControlCostGame::ControlCostGame(Game game, std::vector<ControlCostSpline> splines)
    : game_(std::move(game)), splines_(std::move(splines)) {
  if (splines_.size() != game_.num_players()) {
    throw std::invalid_argument("need one spline per player");
  }
}

double ControlCostGame::payoff(const MixedProfile& profile, std::size_t player) const {
  double cost = 0.0;
  for (double p : profile.strategy(player)) cost += splines_[player].value(p);
  return expected_payoff(game_, profile, player) - cost;
}

ControlCostGame calibrate(const Game& game, const MixedProfile& profile,
                          double epsilon, double y0) {
  check_compatible(game, profile);
  std::vector<ControlCostSpline> splines;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    const auto u = expected_utility(game, profile, i);
    splines.push_back(build_spline(profile.strategy(i), u, epsilon, y0));
  }
  return ControlCostGame(game, std::move(splines));
}

CcCheck cc_equilibrium_check(const ControlCostGame& ccg, const MixedProfile& profile,
                             double tol) {
  check_compatible(ccg.game(), profile);
  if (!profile.is_interior()) {
    throw std::invalid_argument("control-cost equilibria are interior");
  }
  CcCheck out;
  for (std::size_t i = 0; i < ccg.game().num_players(); ++i) {
    const auto u = expected_utility(ccg.game(), profile, i);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t a = 0; a < u.size(); ++a) {
      const double d = u[a] - ccg.splines()[i].derivative(profile.prob(i, a));
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    out.defects.push_back(hi - lo);
    out.max_defect = std::max(out.max_defect, hi - lo);
  }
  out.equilibrium = out.max_defect < tol;
  return out;
}

std::vector<double> induced_response(const ControlCostSpline& spline,
                                     std::span<const double> utilities) {
  const std::size_t k = utilities.size();
  if (k == 0) throw std::invalid_argument("empty utility vector");
  const double top = *std::max_element(utilities.begin(), utilities.end());
  auto mass = [&](double mu) {
    double total = 0.0;
    for (double x : utilities) total += spline.inverse_derivative(x - mu);
    return total;
  };
  // mass(top) >= 1 and mass decreases to 0; bracket then bisect.
  double lo = top, width = 1.0;
  while (mass(top + width) >= 1.0) {
    width *= 2.0;
    if (!std::isfinite(width)) throw std::runtime_error("multiplier bracket diverged");
  }
  double hi = top + width;
  double mu = hi;
  for (int it = 0; it < 400; ++it) {
    mu = 0.5 * (lo + hi);
    const double m = mass(mu);
    if (std::abs(m - 1.0) < 1e-13) break;
    if (m > 1.0) lo = mu; else hi = mu;
    if (hi - lo <= 1e-16 * std::max(1.0, std::abs(mu))) break;
  }
  std::vector<double> out(k);
  double total = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    out[a] = spline.inverse_derivative(utilities[a] - mu);
    total += out[a];
  }
  for (double& p : out) p /= total;
  return out;
}

Qrf control_cost_qrf(std::vector<ControlCostSpline> splines) {
  if (splines.empty()) throw std::invalid_argument("need at least one spline");
  return Qrf("control-cost", 0.0,
             [splines = std::move(splines)](std::size_t player,
                                            std::span<const double> u) {
               return induced_response(splines.at(player % splines.size()), u);
             });
}

VanishingSequence vanishing_sequence(const Game& game,
                                     const std::vector<MixedProfile>& sequence,
                                     const MixedProfile& limit,
                                     std::vector<double> scales) {
  check_compatible(game, limit);
  if (!is_nash(game, limit, 1e-9)) {
    throw std::invalid_argument("limit profile is not a Nash equilibrium");
  }
  if (scales.empty()) {
    for (std::size_t j = 0; j < sequence.size(); ++j) scales.push_back(j + 1.0);
  }
  if (scales.size() != sequence.size()) {
    throw std::invalid_argument("need one scale per profile");
  }
  for (std::size_t j = 0; j < scales.size(); ++j) {
    if (!(scales[j] > 0.0) || (j > 0 && !(scales[j] > scales[j - 1]))) {
      throw std::invalid_argument("scales must be positive and increasing");
    }
  }
  const std::size_t n = game.num_players();
  std::vector<std::vector<double>> limit_u(n);
  for (std::size_t i = 0; i < n; ++i) limit_u[i] = expected_utility(game, limit, i);

  VanishingSequence out;
  for (std::size_t j = 0; j < sequence.size(); ++j) {
    const MixedProfile& sj = sequence[j];
    check_compatible(game, sj);
    if (!sj.is_interior()) {
      throw std::invalid_argument("profile " + std::to_string(j) + " is not interior");
    }
    if (!is_payoff_monotone(game, sj)) {
      throw std::invalid_argument("profile " + std::to_string(j) +
                                  " is not payoff monotone");
    }
    const double lambda = scales[j];
    const double eps = 1.0 / (2.0 * lambda);
    VanishingStep step;
    step.index = j;
    step.lambda = lambda;
    step.nash_defect = nash_defect(game, sj);
    try {
      for (std::size_t i = 0; i < n; ++i) {
        const auto s = sj.strategy(i);
        const auto u = expected_utility(game, sj, i);
        const double smallest = *std::min_element(s.begin(), s.end());
        const double y0 = 0.5 * std::min(smallest, 1.0 / lambda);

        std::vector<std::size_t> order(s.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return s[a] < s[b]; });
        const double best = *std::max_element(limit_u[i].begin(), limit_u[i].end());
        std::size_t kpos = 0;
        while (limit_u[i][order[kpos]] < best - 1e-9) ++kpos;
        const std::size_t ak = order[kpos];

        std::optional<double> y_star;
        int which;
        if (limit.prob(i, ak) <= 1e-9) {
          which = 1;
        } else if (kpos > 0) {
          which = 2;
          const double below = s[order[kpos - 1]];
          const double above = s[ak];
          if (below < above * (1.0 - kLevelRelTol)) {
            const double target = 1.0 / lambda;
            const double margin = 1e-9;
            if (target > below * (1.0 + margin) && target < above * (1.0 - margin)) {
              y_star = target;
            } else {
              y_star = std::sqrt(below * above);
            }
          }
        } else {
          which = 3;
        }
        step.cases.push_back(which);
        step.splines.push_back(build_spline(s, u, eps, y0, y_star));
      }
    } catch (const CalibrationError& e) {
      step.skip_reason = e.what();
      step.splines.clear();
      out.steps.push_back(std::move(step));
      continue;
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("profile " + std::to_string(j) + ": " + e.what());
    }
    const ControlCostGame ccg(game, step.splines);
    step.foc_defect = cc_equilibrium_check(ccg, sj).max_defect;
    for (const auto& f : step.splines) {
      for (int g = 1; g <= 100; ++g) {
        step.sup_norm = std::max(step.sup_norm, f.value(g / 100.0));
      }
    }
    step.retained = true;
    out.retained.push_back(j);
    out.steps.push_back(std::move(step));
  }
  return out;
}

}  // namespace empeq
