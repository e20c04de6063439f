#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace empeq {

// Dense linear program over x >= 0:
//   maximize objective . x  subject to  rows[r].coeffs . x (<=|>=|==) rhs.
// Inputs are doubles; each is converted exactly to a rational and the problem
// is solved in exact arithmetic, so feasibility and the sign of the optimum
// are decided without rounding.
class LinearProgram {
 public:
  enum class Sense { kLessEqual, kGreaterEqual, kEqual };

  explicit LinearProgram(std::size_t num_vars);

  std::size_t num_vars() const { return num_vars_; }
  std::size_t num_rows() const { return rows_.size(); }

  void add_row(std::vector<double> coeffs, Sense sense, double rhs);
  // Sparse convenience: pairs of (variable, coefficient).
  void add_row(std::initializer_list<std::pair<std::size_t, double>> terms,
               Sense sense, double rhs);
  void set_objective(std::vector<double> objective);

  struct Row {
    std::vector<double> coeffs;
    Sense sense;
    double rhs;
  };
  const std::vector<Row>& rows() const { return rows_; }
  const std::vector<double>& objective() const { return objective_; }

 private:
  std::size_t num_vars_;
  std::vector<Row> rows_;
  std::vector<double> objective_;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  // Rounded optimum; objective_sign is exact (-1, 0, +1).
  double objective = 0.0;
  int objective_sign = 0;
  std::vector<double> values;
  std::size_t pivots = 0;
};

// Two-phase primal simplex with Bland's rule; always terminates.
LpResult solve_exact(const LinearProgram& lp);

std::string to_string(LpStatus status);

}  // namespace empeq
