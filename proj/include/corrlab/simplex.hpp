#pragma once

#include <stdexcept>

#include <Eigen/Dense>

namespace corrlab::lp {

/// Linear program in standard form: minimize c.x subject to A x = b, x >= 0.
struct Problem {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

struct Options {
  double pivot_tol = 1e-10;        ///< smallest usable pivot / reduced-cost magnitude
  double feasibility_tol = 1e-9;   ///< phase-one optimum above this means infeasible
  int max_iterations = 50000;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
  Status status = Status::Infeasible;
  Eigen::VectorXd x;          ///< primal solution (Optimal only)
  double objective = 0.0;     ///< c.x at the solution
  double infeasibility = 0.0; ///< phase-one optimum: sum of artificial values
  int iterations = 0;
};

/// Raised when the solver cannot reach a verdict (iteration cap, bad input).
class LpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense two-phase tableau simplex with Bland's anti-cycling rule.
Result solve(const Problem& problem, const Options& options = {});

const char* to_string(Status status);

}  // namespace corrlab::lp
