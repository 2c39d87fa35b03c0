#pragma once

#include <Eigen/Dense>
#include <vector>

namespace gcg {

// Dense bounded-variable primal simplex for small/medium LPs:
//
//   minimize    obj' x
//   subject to  A x (<= or >=) rhs   row-wise
//               lo <= x <= up        (entries may be +/-infinity)
//
// The caller must supply a starting point with every variable at one of its
// bounds that satisfies all row constraints (a bound vertex); the games
// solved here always have one. Dual values are recovered from the final
// reduced costs so callers can build optimality certificates.
struct LpProblem {
  Eigen::MatrixXd a;
  Eigen::VectorXd rhs;
  std::vector<char> sense;  // '<' or '>'
  Eigen::VectorXd obj;
  Eigen::VectorXd lo;
  Eigen::VectorXd up;
};

struct LpResult {
  Eigen::VectorXd x;
  double objective = 0.0;
  // Duals for rows in the caller's orientation: y >= 0, and for '<=' rows
  // obj'x == rhs'y-ish terms handled by the certificate builder.
  Eigen::VectorXd row_dual;
  Eigen::VectorXd reduced_cost;  // per structural variable
  int iterations = 0;
};

LpResult solve_bounded_lp(const LpProblem& problem, const Eigen::VectorXd& start);

}  // namespace gcg
