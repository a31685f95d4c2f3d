#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace poolcast {

/// A smooth maximization target over an unconstrained real vector,
/// already including any reparameterization log-Jacobian.
class UnconstrainedTarget {
 public:
  virtual ~UnconstrainedTarget() = default;
  virtual int dim() const = 0;
  virtual double value_and_gradient(const Eigen::VectorXd& v,
                                    Eigen::VectorXd& grad) const = 0;
};

struct OptimOptions {
  int max_iter = 1000;
  double grad_tol = 1e-8;  // sup-norm of the gradient
  int restarts = 3;        // attempt 0 starts at zero, the rest are jittered
  double jitter_sd = 0.5;
  std::uint64_t seed = 0;
};

struct TraceRow {
  int restart = 0;
  int iteration = 0;
  double objective = 0.0;
  double grad_norm = 0.0;
};

struct OptimResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  double grad_norm = 0.0;
  std::vector<TraceRow> trace;  // accepted steps only; objective ascends
};

/// BFGS ascent with a strong-Wolfe line search. Deterministic given
/// options; returns the best restart by objective value.
OptimResult maximize(const UnconstrainedTarget& target,
                     const OptimOptions& opts = {});

/// Central finite differences of the analytic gradient, symmetrized as
/// (H + H^T)/2.
Eigen::MatrixXd hessian_at(const UnconstrainedTarget& target,
                           const Eigen::VectorXd& v, double step = 1e-5);

}  // namespace poolcast
