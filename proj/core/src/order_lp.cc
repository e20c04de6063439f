#include "empeq/order_lp.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace empeq {
namespace {

using Sense = LinearProgram::Sense;

void extend(std::size_t k, std::vector<int>& rank, std::size_t placed,
            int levels, std::vector<WeakOrder>& out) {
  // Builds orders by assigning items to levels, then keeps only those where
  // every level 0..levels-1 is used.
  if (placed == k) {
    std::vector<bool> used(levels, false);
    for (int r : rank) used[r] = true;
    if (std::all_of(used.begin(), used.end(), [](bool b) { return b; })) {
      out.push_back(rank);
    }
    return;
  }
  for (int r = 0; r < levels; ++r) {
    rank[placed] = r;
    extend(k, rank, placed + 1, levels, out);
  }
}

}  // namespace

std::vector<WeakOrder> enumerate_weak_orders(std::size_t k) {
  if (k == 0) return {WeakOrder{}};
  if (k > 7) throw std::invalid_argument("weak-order enumeration limited to 7 actions");
  std::vector<WeakOrder> out;
  std::vector<int> rank(k, 0);
  for (int levels = 1; levels <= static_cast<int>(k); ++levels) {
    extend(k, rank, 0, levels, out);
  }
  return out;
}

WeakOrder weak_order_of(std::span<const double> values, double tol) {
  const std::size_t k = values.size();
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  WeakOrder order(k, 0);
  int level = 0;
  for (std::size_t j = 1; j < k; ++j) {
    if (values[idx[j]] > values[idx[j - 1]] + tol) ++level;
    order[idx[j]] = level;
  }
  return order;
}

std::vector<std::vector<double>> opponent_utility_rows(const Game& game,
                                                       std::size_t player) {
  if (game.num_players() != 2) {
    throw std::invalid_argument("opponent_utility_rows needs a two-player game");
  }
  const std::size_t q = 1 - player;
  std::vector<std::vector<double>> rows(game.num_actions(q),
                                        std::vector<double>(game.num_actions(player)));
  for (std::size_t b = 0; b < game.num_actions(q); ++b) {
    for (std::size_t a = 0; a < game.num_actions(player); ++a) {
      const std::size_t row = player == 0 ? a : b;
      const std::size_t col = player == 0 ? b : a;
      rows[b][a] = game.bimatrix(q, row, col);
    }
  }
  return rows;
}

StrategyLp::StrategyLp(std::size_t num_actions)
    : k_(num_actions), t_(num_actions), lp_(num_actions + 1) {
  auto sum = row();
  for (std::size_t a = 0; a < k_; ++a) sum[a] = 1.0;
  lp_.add_row(std::move(sum), Sense::kEqual, 1.0);
  auto cap = row();
  cap[t_] = 1.0;
  lp_.add_row(std::move(cap), Sense::kLessEqual, 1.0);
  auto obj = row();
  obj[t_] = 1.0;
  lp_.set_objective(std::move(obj));
}

void StrategyLp::require_interior() {
  for (std::size_t a = 0; a < k_; ++a) {
    auto r = row();
    r[a] = 1.0;
    r[t_] = -1.0;
    lp_.add_row(std::move(r), Sense::kGreaterEqual, 0.0);
  }
}

void StrategyLp::require_box(std::span<const double> center, double radius) {
  if (center.size() != k_) throw std::invalid_argument("box center has wrong size");
  for (std::size_t a = 0; a < k_; ++a) {
    const double lo = center[a] - radius;
    const double hi = center[a] + radius;
    if (lo > 0.0) {
      auto r = row();
      r[a] = 1.0;
      lp_.add_row(std::move(r), Sense::kGreaterEqual, lo);
    }
    if (hi < 1.0) {
      auto r = row();
      r[a] = 1.0;
      lp_.add_row(std::move(r), Sense::kLessEqual, hi);
    }
  }
}

void StrategyLp::require_order(const WeakOrder& order) {
  if (order.size() != k_) throw std::invalid_argument("order has wrong size");
  for (std::size_t a = 0; a < k_; ++a) {
    for (std::size_t b = 0; b < k_; ++b) {
      if (a == b) continue;
      auto r = row();
      r[a] = 1.0;
      r[b] = -1.0;
      if (order[a] == order[b] && a < b) {
        lp_.add_row(std::move(r), Sense::kEqual, 0.0);
      } else if (order[a] == order[b] + 1) {
        r[t_] = -1.0;
        lp_.add_row(std::move(r), Sense::kGreaterEqual, 0.0);
      }
    }
  }
}

void StrategyLp::require_linear_order(
    const WeakOrder& order, const std::vector<std::vector<double>>& rows) {
  if (order.size() != rows.size()) throw std::invalid_argument("order has wrong size");
  for (std::size_t b = 0; b < rows.size(); ++b) {
    for (std::size_t c = 0; c < rows.size(); ++c) {
      if (b == c) continue;
      const bool tie = order[b] == order[c] && b < c;
      const bool adjacent = order[b] == order[c] + 1;
      if (!tie && !adjacent) continue;
      auto r = row();
      for (std::size_t a = 0; a < k_; ++a) r[a] = rows[b][a] - rows[c][a];
      if (tie) {
        lp_.add_row(std::move(r), Sense::kEqual, 0.0);
      } else {
        r[t_] = -1.0;
        lp_.add_row(std::move(r), Sense::kGreaterEqual, 0.0);
      }
    }
  }
}

void StrategyLp::require_best_set(const std::vector<bool>& best,
                                  const std::vector<std::vector<double>>& rows) {
  if (best.size() != rows.size()) throw std::invalid_argument("best set has wrong size");
  std::size_t anchor = rows.size();
  for (std::size_t b = 0; b < rows.size(); ++b) {
    if (best[b]) {
      anchor = b;
      break;
    }
  }
  if (anchor == rows.size()) throw std::invalid_argument("best set is empty");
  for (std::size_t b = 0; b < rows.size(); ++b) {
    if (b == anchor) continue;
    auto r = row();
    for (std::size_t a = 0; a < k_; ++a) r[a] = rows[anchor][a] - rows[b][a];
    if (best[b]) {
      lp_.add_row(std::move(r), Sense::kEqual, 0.0);
    } else {
      r[t_] = -1.0;
      lp_.add_row(std::move(r), Sense::kGreaterEqual, 0.0);
    }
  }
}

void StrategyLp::require_ratio(std::size_t lo, std::size_t hi, double factor) {
  auto r = row();
  r[lo] = 1.0;
  r[hi] -= factor;
  lp_.add_row(std::move(r), Sense::kLessEqual, 0.0);
}

void StrategyLp::require_cap(std::size_t a, double bound) {
  auto r = row();
  r[a] = 1.0;
  lp_.add_row(std::move(r), Sense::kLessEqual, bound);
}

void StrategyLp::require_m_weak(const WeakOrder& order, double m) {
  if (order.size() != k_) throw std::invalid_argument("order has wrong size");
  if (m == 0.0) return;
  for (std::size_t a = 0; a < k_; ++a) {
    for (std::size_t b = 0; b < k_; ++b) {
      if (a == b || order[a] < order[b]) continue;
      auto r = row();
      r[a] = 1.0;
      r[b] -= m;
      lp_.add_row(std::move(r), Sense::kGreaterEqual, 0.0);
    }
  }
}

StrategyLp::Solution StrategyLp::solve() const {
  const LpResult res = solve_exact(lp_);
  Solution out;
  if (res.status != LpStatus::kOptimal || res.objective_sign <= 0) return out;
  out.feasible = true;
  out.x.assign(res.values.begin(), res.values.begin() + k_);
  out.margin = res.values[t_];
  return out;
}

}  // namespace empeq
