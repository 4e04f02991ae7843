#pragma once

#include <functional>
#include <span>
#include <vector>

namespace zigpcast::optim {

// Returns f(x) and writes df/dx into `grad`. Non-finite values mark x as
// infeasible; the line search backs off from such points.
using ValueAndGradient = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct MaximizeOptions {
  int max_iterations = 500;
  // Stop once the gradient infinity-norm of f falls below this.
  double gradient_tolerance = 1e-10;
  // Newton iterations (finite-difference Hessian of the analytic gradient)
  // run after BFGS stalls or converges.
  int polish_iterations = 8;
};

struct MaximizeResult {
  std::vector<double> x;
  double value = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  // Objective value after every accepted step; non-decreasing.
  std::vector<double> trace;
};

// BFGS with Armijo backtracking, followed by a guarded Newton polish.
MaximizeResult maximize(const ValueAndGradient& f, std::vector<double> x0,
                        const MaximizeOptions& options = {});

}  // namespace zigpcast::optim
