#include "empeq/linprog.h"

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>

namespace empeq {

LinearProgram::LinearProgram(std::size_t num_vars)
    : num_vars_(num_vars), objective_(num_vars, 0.0) {}

void LinearProgram::add_row(std::vector<double> coeffs, Sense sense, double rhs) {
  if (coeffs.size() != num_vars_) {
    throw std::invalid_argument("row has wrong number of coefficients");
  }
  for (double c : coeffs) {
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite coefficient");
  }
  if (!std::isfinite(rhs)) throw std::invalid_argument("non-finite right-hand side");
  rows_.push_back(Row{std::move(coeffs), sense, rhs});
}

void LinearProgram::add_row(
    std::initializer_list<std::pair<std::size_t, double>> terms, Sense sense,
    double rhs) {
  std::vector<double> coeffs(num_vars_, 0.0);
  for (const auto& [var, c] : terms) coeffs.at(var) += c;
  add_row(std::move(coeffs), sense, rhs);
}

void LinearProgram::set_objective(std::vector<double> objective) {
  if (objective.size() != num_vars_) {
    throw std::invalid_argument("objective has wrong length");
  }
  objective_ = std::move(objective);
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "?";
}

namespace {

// Tableau with one row per constraint plus the reduced-cost row. Column
// layout: structural vars, slack/surplus vars, artificial vars, rhs.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols), cost_(cols), basis_(rows) {}

  mpq_class& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  mpq_class& cost(std::size_t c) { return cost_[c]; }
  std::size_t& basis(std::size_t r) { return basis_[r]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t rhs() const { return cols_ - 1; }

  void pivot(std::size_t pr, std::size_t pc) {
    const mpq_class inv = 1 / at(pr, pc);
    for (std::size_t c = 0; c < cols_; ++c) at(pr, c) *= inv;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr || sgn(at(r, pc)) == 0) continue;
      const mpq_class f = at(r, pc);
      for (std::size_t c = 0; c < cols_; ++c) {
        if (sgn(at(pr, c)) != 0) at(r, c) -= f * at(pr, c);
      }
    }
    if (sgn(cost_[pc]) != 0) {
      const mpq_class f = cost_[pc];
      for (std::size_t c = 0; c < cols_; ++c) {
        if (sgn(at(pr, c)) != 0) cost_[c] -= f * at(pr, c);
      }
    }
    basis_[pr] = pc;
  }

  // Maximizes with reduced costs stored as c_j - z_j; columns >= limit are
  // never entered. Returns false when unbounded.
  bool optimize(std::size_t limit, std::size_t& pivots) {
    for (;;) {
      std::size_t enter = limit;
      for (std::size_t c = 0; c < limit; ++c) {
        if (sgn(cost_[c]) > 0) {
          enter = c;
          break;
        }
      }
      if (enter == limit) return true;
      std::size_t leave = rows_;
      mpq_class best;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (sgn(at(r, enter)) <= 0) continue;
        mpq_class ratio = at(r, rhs()) / at(r, enter);
        if (leave == rows_ || ratio < best ||
            (ratio == best && basis_[r] < basis_[leave])) {
          best = ratio;
          leave = r;
        }
      }
      if (leave == rows_) return false;
      pivot(leave, enter);
      ++pivots;
    }
  }

  void remove_row(std::size_t r) {
    a_.erase(a_.begin() + r * cols_, a_.begin() + (r + 1) * cols_);
    basis_.erase(basis_.begin() + r);
    --rows_;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<mpq_class> a_;
  std::vector<mpq_class> cost_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpResult solve_exact(const LinearProgram& lp) {
  const std::size_t n = lp.num_vars();
  const std::size_t m = lp.num_rows();
  using Sense = LinearProgram::Sense;

  // Normalize to nonnegative right-hand sides.
  std::vector<std::vector<mpq_class>> coeffs(m, std::vector<mpq_class>(n));
  std::vector<mpq_class> rhs(m);
  std::vector<Sense> sense(m);
  std::size_t num_slack = 0, num_art = 0;
  for (std::size_t r = 0; r < m; ++r) {
    const auto& row = lp.rows()[r];
    for (std::size_t j = 0; j < n; ++j) coeffs[r][j] = row.coeffs[j];
    rhs[r] = row.rhs;
    sense[r] = row.sense;
    if (sgn(rhs[r]) < 0) {
      for (auto& c : coeffs[r]) c = -c;
      rhs[r] = -rhs[r];
      if (sense[r] == Sense::kLessEqual) {
        sense[r] = Sense::kGreaterEqual;
      } else if (sense[r] == Sense::kGreaterEqual) {
        sense[r] = Sense::kLessEqual;
      }
    }
    if (sense[r] != Sense::kEqual) ++num_slack;
    if (sense[r] != Sense::kLessEqual) ++num_art;
  }

  const std::size_t art0 = n + num_slack;
  const std::size_t cols = art0 + num_art + 1;
  Tableau t(m, cols);
  std::size_t slack = n, art = art0;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < n; ++j) t.at(r, j) = coeffs[r][j];
    t.at(r, t.rhs()) = rhs[r];
    switch (sense[r]) {
      case Sense::kLessEqual:
        t.at(r, slack) = 1;
        t.basis(r) = slack++;
        break;
      case Sense::kGreaterEqual:
        t.at(r, slack++) = -1;
        t.at(r, art) = 1;
        t.basis(r) = art++;
        break;
      case Sense::kEqual:
        t.at(r, art) = 1;
        t.basis(r) = art++;
        break;
    }
  }

  LpResult result;

  // Phase 1: maximize -sum(artificials).
  if (num_art > 0) {
    for (std::size_t c = 0; c < cols; ++c) t.cost(c) = 0;
    for (std::size_t r = 0; r < m; ++r) {
      if (t.basis(r) < art0) continue;
      for (std::size_t c = 0; c < cols; ++c) {
        if (c < art0 || c == t.rhs()) t.cost(c) += t.at(r, c);
      }
    }
    t.optimize(art0, result.pivots);
    if (sgn(t.cost(t.rhs())) != 0) {
      result.status = LpStatus::kInfeasible;
      return result;
    }
    // Drive remaining (zero-valued) artificials out of the basis.
    for (std::size_t r = 0; r < t.rows();) {
      if (t.basis(r) < art0) {
        ++r;
        continue;
      }
      std::size_t enter = art0;
      for (std::size_t c = 0; c < art0; ++c) {
        if (sgn(t.at(r, c)) != 0) {
          enter = c;
          break;
        }
      }
      if (enter == art0) {
        t.remove_row(r);  // redundant equality
      } else {
        t.pivot(r, enter);
        ++result.pivots;
        ++r;
      }
    }
  }

  // Phase 2: reduced costs c_j - c_B B^-1 A_j over non-artificial columns.
  std::vector<mpq_class> obj(cols);
  for (std::size_t j = 0; j < n; ++j) obj[j] = lp.objective()[j];
  for (std::size_t c = 0; c < cols; ++c) t.cost(c) = (c < art0) ? obj[c] : mpq_class(0);
  t.cost(t.rhs()) = 0;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const mpq_class cb = obj[t.basis(r)];
    if (sgn(cb) == 0) continue;
    for (std::size_t c = 0; c < cols; ++c) {
      if (c < art0 || c == t.rhs()) t.cost(c) -= cb * t.at(r, c);
    }
  }
  if (!t.optimize(art0, result.pivots)) {
    result.status = LpStatus::kUnbounded;
    return result;
  }

  std::vector<mpq_class> x(n);
  for (std::size_t r = 0; r < t.rows(); ++r) {
    if (t.basis(r) < n) x[t.basis(r)] = t.at(r, t.rhs());
  }
  mpq_class value = 0;
  for (std::size_t j = 0; j < n; ++j) value += obj[j] * x[j];
  result.status = LpStatus::kOptimal;
  result.objective = value.get_d();
  result.objective_sign = sgn(value);
  result.values.resize(n);
  for (std::size_t j = 0; j < n; ++j) result.values[j] = x[j].get_d();
  return result;
}

}  // namespace empeq
