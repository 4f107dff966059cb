#pragma once

#include <string>
#include <vector>

#include "storval/lp.hpp"

namespace storval {

struct SolverOptions {
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-7;   // on reduced costs
  double pivot_tol = 1e-9;
  long max_iterations = 200000;
  bool anti_cycling = true;  // Bland's rule fallback after stalling
  bool scaling = true;       // row/column equilibration
  int refactor_interval = 100;
  int stall_window = 1000;  // degenerate pivots before the Bland fallback
};

enum class SolveStatus { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(SolveStatus status);

struct Solution {
  SolveStatus status = SolveStatus::infeasible;
  double objective = 0.0;            // cost . primal + objective offset
  std::vector<double> primal;        // per variable
  std::vector<double> dual;          // per row; d(objective)/d(rhs)
  std::vector<double> reduced_cost;  // per variable
  long iterations = 0;
  double solve_seconds = 0.0;
};

// Equalities over structural variables plus one slack per inequality row
// (coefficient +1; bounds [0,inf) for <=, (-inf,0] for >=). Equality rows get
// no slack. Structural variables keep their original index.
struct StandardForm {
  int num_rows = 0;
  int num_structural = 0;
  // CSC over structural + slack columns
  std::vector<int> col_start;
  std::vector<int> row_index;
  std::vector<double> values;
  std::vector<double> lower, upper, cost;
  std::vector<double> rhs;
  std::vector<int> slack_of_row;  // column index, -1 for equality rows

  int num_cols() const { return static_cast<int>(lower.size()); }
};

StandardForm to_standard_form(const LinearProgram& lp);

Solution solve(const LinearProgram& lp, const SolverOptions& opts = {});

struct CertificateReport {
  double max_primal_residual = 0.0;
  double max_dual_residual = 0.0;
  double max_complementarity = 0.0;
  double relative_duality_gap = 0.0;
  std::string worst_row;  // row with the largest primal residual, if any
  bool pass = false;

  std::string to_string() const;
};

// Optimality certificate for an optimal solution: primal/dual residuals,
// complementary slackness and the relative duality gap, all checked against
// tol. Refuses non-optimal solutions.
CertificateReport verify_kkt(const LinearProgram& lp, const Solution& solution,
                             double tol = 1e-6);

}  // namespace storval
