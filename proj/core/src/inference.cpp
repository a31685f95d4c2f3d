#include "poolcast/inference.hpp"

#include <Eigen/Cholesky>
#include <limits>
#include <cmath>
#include <string>

#include "poolcast/errors.hpp"
#include "poolcast/rng.hpp"

namespace poolcast {

PoolingTarget::PoolingTarget(const TimeSeries& series, const ModelSpec& spec)
    : bijection_(make_bijection(spec)) {
  if (spec.standardize) {
    auto [y, info] = standardize(series);
    y_std_ = std::move(y);
    info_ = info;
  } else {
    info_ = identity_standardization(series);
    y_std_ = series.values;
  }
  t_ = scaled_time(series.dates, info_.time_scale);
  pooling_ = model_pooling(spec, series.dates);
}

double PoolingTarget::value_and_gradient(const Eigen::VectorXd& v,
                                         Eigen::VectorXd& grad) const {
  const ConstrainResult c = to_constrained(v, bijection_);
  const ParameterSet& p = c.params;
  // exp() under/overflow during line-search probes: report -inf so the
  // optimizer rejects the step instead of tripping domain checks.
  bool scales_ok = std::isfinite(p.sigma_obs) && p.sigma_obs > 0.0;
  if (spec().kind != ModelKind::Complete) {
    scales_ok = scales_ok && std::isfinite(p.k_sigma) && p.k_sigma > 0.0 &&
                std::isfinite(p.m_sigma) && p.m_sigma > 0.0;
  }
  if (!scales_ok) {
    grad.setConstant(dim(), std::numeric_limits<double>::quiet_NaN());
    return -std::numeric_limits<double>::infinity();
  }
  const double value =
      log_posterior(p, y_std_, t_, pooling_, spec()) + c.log_jacobian;
  const ParameterSet g = grad_constrained(p, y_std_, t_, pooling_, spec());
  grad = chain_gradient(p, g, v, bijection_);
  return value;
}

MapResult map_fit(const TimeSeries& series, const ModelSpec& spec,
                  const OptimOptions& opts) {
  const PoolingTarget target(series, spec);
  OptimResult opt = maximize(target, opts);
  const ConstrainResult c = to_constrained(opt.x, target.bijection());

  MapResult out;
  out.params = c.params;
  out.objective = opt.value;
  out.log_post = opt.value - c.log_jacobian;
  out.unconstrained_opt = std::move(opt.x);
  out.iterations = opt.iterations;
  out.converged = opt.converged;
  out.grad_norm = opt.grad_norm;
  out.standardization = target.standardization();
  out.trace = std::move(opt.trace);
  return out;
}

Eigen::MatrixXd hessian_at(const Eigen::VectorXd& v, const TimeSeries& series,
                           const ModelSpec& spec, double step) {
  const PoolingTarget target(series, spec);
  return hessian_at(target, v, step);
}

Eigen::MatrixXd gaussian_draws(const Eigen::VectorXd& mean,
                               const Eigen::MatrixXd& hessian, int n_draws,
                               std::uint64_t seed) {
  if (n_draws < 1) throw ContractError("gaussian_draws: need n_draws >= 1");
  const Eigen::Index n = mean.size();
  Eigen::MatrixXd neg_h = -hessian;

  Eigen::LLT<Eigen::MatrixXd> llt(neg_h);
  double jitter = 0.0;
  if (llt.info() != Eigen::Success) {
    for (jitter = 1e-8; jitter <= 1e-2; jitter *= 10.0) {
      llt.compute(neg_h + jitter * Eigen::MatrixXd::Identity(n, n));
      if (llt.info() == Eigen::Success) break;
    }
    if (llt.info() != Eigen::Success) {
      throw NumericalError(
          "curvature: -Hessian not positive definite even with jitter up to "
          "1e-2; inspect the model or data (the mode may be degenerate)");
    }
  }

  // x = mean + L^-T z has covariance (L L^T)^-1 = (-H)^-1.
  auto rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd draws(n_draws, n);
  Eigen::VectorXd z(n);
  const Eigen::MatrixXd L = llt.matrixL();
  for (int s = 0; s < n_draws; ++s) {
    for (Eigen::Index i = 0; i < n; ++i) z(i) = normal(rng);
    draws.row(s) =
        (mean + L.transpose().triangularView<Eigen::Upper>().solve(z))
            .transpose();
  }
  return draws;
}

PosteriorDraws laplace_draws(const MapResult& fit, const TimeSeries& series,
                             const ModelSpec& spec, int n_draws,
                             std::uint64_t seed) {
  if (!fit.converged) {
    throw ContractError(
        "laplace_draws: fit did not converge; refusing to expand around a "
        "non-stationary point");
  }
  const PoolingTarget target(series, spec);
  const Eigen::MatrixXd H = hessian_at(target, fit.unconstrained_opt);

  PosteriorDraws out;
  out.seed = seed;
  out.draws = gaussian_draws(fit.unconstrained_opt, H, n_draws, seed);
  out.params.reserve(static_cast<std::size_t>(n_draws));
  for (int s = 0; s < n_draws; ++s) {
    out.params.push_back(
        to_constrained(out.draws.row(s).transpose(), target.bijection())
            .params);
  }
  return out;
}

}  // namespace poolcast
