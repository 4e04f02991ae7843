#include "zigpcast/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace zigpcast::optim {

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Evaluator {
  const ValueAndGradient& f;

  double operator()(const Vec& x, Vec& grad) const {
    grad.resize(x.size());
    const double v = f(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
                       std::span<double>(grad.data(), static_cast<std::size_t>(grad.size())));
    if (!std::isfinite(v) || !grad.allFinite()) return -std::numeric_limits<double>::infinity();
    return v;
  }
};

double inf_norm(const Vec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// Backtracking along `dir` (an ascent direction). Returns false if no
// improving step was found.
bool line_search(const Evaluator& eval, const Vec& x, double value, const Vec& grad, const Vec& dir,
                 Vec& x_new, double& value_new, Vec& grad_new) {
  constexpr double kArmijo = 1e-4;
  const double slope = grad.dot(dir);
  if (!(slope > 0.0)) return false;
  double step = 1.0;
  // Keep trial points inside a sane neighbourhood; the likelihood overflows
  // for absurd linear predictors.
  const double dir_norm = inf_norm(dir);
  if (dir_norm > 10.0) step = 10.0 / dir_norm;
  for (int attempt = 0; attempt < 60; ++attempt) {
    x_new = x + step * dir;
    value_new = eval(x_new, grad_new);
    if (std::isfinite(value_new) && value_new >= value + kArmijo * step * slope) return true;
    step *= 0.5;
  }
  return false;
}

Mat fd_hessian(const Evaluator& eval, const Vec& x) {
  const auto n = x.size();
  Mat h(n, n);
  Vec gp, gm;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double step = 1e-5 * (1.0 + std::abs(x[i]));
    Vec xp = x, xm = x;
    xp[i] += step;
    xm[i] -= step;
    eval(xp, gp);
    eval(xm, gm);
    h.col(i) = (gp - gm) / (2.0 * step);
  }
  return 0.5 * (h + h.transpose());
}

}  // namespace

MaximizeResult maximize(const ValueAndGradient& f, std::vector<double> x0, const MaximizeOptions& options) {
  const Evaluator eval{f};
  const auto n = static_cast<Eigen::Index>(x0.size());
  Vec x = Eigen::Map<Vec>(x0.data(), n);
  Vec grad;
  double value = eval(x, grad);

  MaximizeResult result;
  result.trace.push_back(value);
  if (!std::isfinite(value)) {
    result.x = std::move(x0);
    result.value = value;
    result.gradient_norm = std::numeric_limits<double>::infinity();
    return result;
  }

  // Inverse Hessian approximation of -f.
  Mat inv_h = Mat::Identity(n, n);
  bool scaled = false;
  Vec x_new, grad_new;
  double value_new = 0.0;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    if (inf_norm(grad) < options.gradient_tolerance) break;
    Vec dir = inv_h * grad;
    if (grad.dot(dir) <= 0.0) {
      inv_h.setIdentity();
      dir = grad;
    }
    if (!line_search(eval, x, value, grad, dir, x_new, value_new, grad_new)) {
      if (inv_h.isIdentity()) break;
      inv_h.setIdentity();
      scaled = false;
      continue;
    }
    const Vec s = x_new - x;
    // Curvature pair for minimizing -f.
    const Vec y = grad - grad_new;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (!scaled) {
        inv_h = Mat::Identity(n, n) * (sy / y.dot(y));
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Mat left = Mat::Identity(n, n) - rho * s * y.transpose();
      inv_h = left * inv_h * left.transpose() + rho * s * s.transpose();
    }
    const bool stalled = std::abs(value_new - value) <= 1e-15 * (1.0 + std::abs(value));
    x = x_new;
    grad = grad_new;
    value = value_new;
    result.trace.push_back(value);
    if (stalled) {
      ++iter;
      break;
    }
  }

  for (int p = 0; p < options.polish_iterations; ++p) {
    if (inf_norm(grad) < options.gradient_tolerance) break;
    const Mat neg_h = -fd_hessian(eval, x);
    Eigen::LDLT<Mat> ldlt(neg_h);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || (ldlt.vectorD().array() <= 0.0).any()) break;
    const Vec dir = ldlt.solve(grad);
    if (!dir.allFinite()) break;
    if (!line_search(eval, x, value, grad, dir, x_new, value_new, grad_new)) break;
    x = x_new;
    grad = grad_new;
    value = value_new;
    result.trace.push_back(value);
    ++iter;
  }

  result.x.assign(x.data(), x.data() + n);
  result.value = value;
  result.gradient_norm = inf_norm(grad);
  result.iterations = iter;
  result.converged = result.gradient_norm < options.gradient_tolerance;
  return result;
}

}  // namespace zigpcast::optim
