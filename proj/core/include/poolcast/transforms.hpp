#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "poolcast/model.hpp"

namespace poolcast {

/// Maps the constrained ParameterSet onto an unconstrained real vector.
/// Positive scalars go through log/exp; the simplex through centered
/// stick-breaking (the zero vector maps to the uniform simplex), so a
/// D-simplex occupies D-1 coordinates.
struct Bijection {
  ModelSpec spec;
  std::vector<std::pair<std::string, int>> layout;  // (block name, length)
  int total_dim = 0;
};

Bijection make_bijection(const ModelSpec& spec);

Eigen::VectorXd to_unconstrained(const ParameterSet& params,
                                 const Bijection& b);

struct ConstrainResult {
  ParameterSet params;
  double log_jacobian = 0.0;
};

ConstrainResult to_constrained(const Eigen::VectorXd& v, const Bijection& b);

/// Chains a constrained-space gradient (theta taken as the full D-vector)
/// through the bijection and adds the log-Jacobian's own derivatives,
/// yielding the gradient of  log_posterior(constrain(v)) + log_jacobian(v).
Eigen::VectorXd chain_gradient(const ParameterSet& params,
                               const ParameterSet& grad,
                               const Eigen::VectorXd& v, const Bijection& b);

/// Stick-breaking: R^{D-1} -> interior of the D-simplex. Accumulates the
/// log |det Jacobian| into log_jac when non-null.
Eigen::VectorXd simplex_constrain(const Eigen::VectorXd& y, double* log_jac);
Eigen::VectorXd simplex_unconstrain(const Eigen::VectorXd& x);

}  // namespace poolcast
