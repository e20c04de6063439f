#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "empeq/game.h"
#include "empeq/linprog.h"

namespace empeq {

// A weak order over k actions: rank[a] is the level of action a, with 0 the
// lowest level and levels numbered contiguously.
using WeakOrder = std::vector<int>;

// All weak orders (ordered set partitions) of k items, in a fixed order.
std::vector<WeakOrder> enumerate_weak_orders(std::size_t k);

// Weak order induced by values; entries within tol share a level. Chains of
// near-ties are merged transitively.
WeakOrder weak_order_of(std::span<const double> values, double tol);

// Two-player games only. Row b holds the coefficients of player p's strategy
// x in the opponent's expected utility for action b: U_q(x, b) = rows[b] . x.
std::vector<std::vector<double>> opponent_utility_rows(const Game& game,
                                                       std::size_t player);

// Feasibility problem over one player's strategy x (k entries) and a margin
// t in [0, 1] used by every strict inequality. Always includes sum x = 1 and
// x >= 0. The problem is feasible when the maximal margin is positive, which
// is decided exactly.
class StrategyLp {
 public:
  explicit StrategyLp(std::size_t num_actions);

  std::size_t num_actions() const { return k_; }

  // x_a >= t for every a.
  void require_interior();
  // |x_a - center_a| <= radius.
  void require_box(std::span<const double> center, double radius);
  // x realizes the order: ties equal, strict levels separated by t.
  void require_order(const WeakOrder& order);
  // rows[b] . x realizes the order over b.
  void require_linear_order(const WeakOrder& order,
                            const std::vector<std::vector<double>>& rows);
  // rows[b] . x equal across `best`, and at least t above every other row.
  void require_best_set(const std::vector<bool>& best,
                        const std::vector<std::vector<double>>& rows);
  // x_lo <= factor * x_hi.
  void require_ratio(std::size_t lo, std::size_t hi, double factor);
  // x_a <= bound.
  void require_cap(std::size_t a, double bound);
  // x_a >= m * x_b whenever order ranks a at or above b.
  void require_m_weak(const WeakOrder& order, double m);

  struct Solution {
    bool feasible = false;
    std::vector<double> x;
    double margin = 0.0;
  };
  Solution solve() const;

  const LinearProgram& program() const { return lp_; }

 private:
  std::size_t k_;
  std::size_t t_;
  LinearProgram lp_;
  std::vector<double> row() const { return std::vector<double>(k_ + 1, 0.0); }
};

}  // namespace empeq
