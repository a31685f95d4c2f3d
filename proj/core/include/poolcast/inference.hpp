#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "poolcast/model.hpp"
#include "poolcast/optimize.hpp"
#include "poolcast/timeseries.hpp"
#include "poolcast/transforms.hpp"

namespace poolcast {

/// The Jacobian-adjusted log posterior of a pooling model over the
/// unconstrained space, ready for the optimizer.
class PoolingTarget : public UnconstrainedTarget {
 public:
  PoolingTarget(const TimeSeries& series, const ModelSpec& spec);

  int dim() const override { return bijection_.total_dim; }
  double value_and_gradient(const Eigen::VectorXd& v,
                            Eigen::VectorXd& grad) const override;

  const Bijection& bijection() const { return bijection_; }
  const StandardizationInfo& standardization() const { return info_; }
  const Eigen::VectorXd& y_std() const { return y_std_; }
  const Eigen::VectorXd& time() const { return t_; }
  const PoolingAssignment& pooling() const { return pooling_; }
  const ModelSpec& spec() const { return bijection_.spec; }

 private:
  Bijection bijection_;
  StandardizationInfo info_;
  Eigen::VectorXd y_std_;
  Eigen::VectorXd t_;
  PoolingAssignment pooling_;
};

struct MapResult {
  ParameterSet params;
  double log_post = 0.0;   // constrained-space log posterior at params
  double objective = 0.0;  // log_post + log_jacobian, the maximized value
  Eigen::VectorXd unconstrained_opt;
  int iterations = 0;
  bool converged = false;
  double grad_norm = 0.0;
  StandardizationInfo standardization;
  std::vector<TraceRow> trace;
};

/// MAP of the Jacobian-adjusted posterior by quasi-Newton ascent with
/// seeded restarts. Deterministic given options. Non-convergence within
/// max_iter yields converged = false, not an exception.
MapResult map_fit(const TimeSeries& series, const ModelSpec& spec,
                  const OptimOptions& opts = {});

/// Hessian of the Jacobian-adjusted log posterior at unconstrained v.
Eigen::MatrixXd hessian_at(const Eigen::VectorXd& v, const TimeSeries& series,
                           const ModelSpec& spec, double step = 1e-5);

struct PosteriorDraws {
  enum class Source { Laplace };

  Eigen::MatrixXd draws;  // S x unconstrained dim
  std::vector<ParameterSet> params;
  std::uint64_t seed = 0;
  Source source = Source::Laplace;

  int size() const { return static_cast<int>(draws.rows()); }
};

/// Gaussian draws centered at the MAP with covariance (-H)^-1, mapped
/// through the bijection so every draw satisfies the constraints.
PosteriorDraws laplace_draws(const MapResult& fit, const TimeSeries& series,
                             const ModelSpec& spec, int n_draws = 1000,
                             std::uint64_t seed = 0);

/// Rows ~ Normal(mean, (-hessian)^-1). Escalating jitter 1e-8..1e-2 is
/// applied if -hessian is not positive definite; beyond that a curvature
/// error is raised.
Eigen::MatrixXd gaussian_draws(const Eigen::VectorXd& mean,
                               const Eigen::MatrixXd& hessian, int n_draws,
                               std::uint64_t seed);

}  // namespace poolcast
