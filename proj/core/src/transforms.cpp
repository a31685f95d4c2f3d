#include "poolcast/transforms.hpp"

#include <cmath>

#include "poolcast/errors.hpp"

namespace poolcast {

namespace {

double inverse_logit(double y) { return 1.0 / (1.0 + std::exp(-y)); }

double logit(double x) { return std::log(x / (1.0 - x)); }

// log(1 + exp(a)) without overflow.
double log1p_exp(double a) {
  if (a > 0.0) return a + std::log1p(std::exp(-a));
  return std::log1p(std::exp(a));
}

void require_finite(const Eigen::VectorXd& v, const char* what) {
  if (!v.allFinite()) {
    throw DomainError(std::string(what) + ": non-finite input");
  }
}

}  // namespace

Eigen::VectorXd simplex_constrain(const Eigen::VectorXd& y, double* log_jac) {
  require_finite(y, "simplex_constrain");
  const Eigen::Index D = y.size() + 1;
  Eigen::VectorXd x(D);
  double stick = 1.0;
  for (Eigen::Index l = 0; l < D - 1; ++l) {
    const double adj = y(l) - std::log(static_cast<double>(D - l - 1));
    const double z = inverse_logit(adj);
    x(l) = stick * z;
    if (log_jac != nullptr) {
      *log_jac += std::log(stick) - log1p_exp(-adj) - log1p_exp(adj);
    }
    stick -= x(l);
  }
  x(D - 1) = stick;
  return x;
}

Eigen::VectorXd simplex_unconstrain(const Eigen::VectorXd& x) {
  require_finite(x, "simplex_unconstrain");
  const Eigen::Index D = x.size();
  Eigen::VectorXd y(D - 1);
  double stick = 1.0;
  for (Eigen::Index l = 0; l < D - 1; ++l) {
    const double z = x(l) / stick;
    y(l) = logit(z) + std::log(static_cast<double>(D - l - 1));
    stick -= x(l);
  }
  return y;
}

Bijection make_bijection(const ModelSpec& spec) {
  validate(spec);
  Bijection b;
  b.spec = spec;
  const auto cards = parameter_cardinalities(spec);
  int pooled_total = 0;
  for (int c : cards) pooled_total += c;

  if (spec.kind == ModelKind::Complete) {
    b.layout = {{"k", 1}, {"m", 1}, {"log_sigma_obs", 1}};
  } else {
    b.layout = {{"k_mu", 1},
                {"log_k_sigma", 1},
                {"m_mu", 1},
                {"log_m_sigma", 1},
                {"k", pooled_total},
                {"m", pooled_total},
                {"theta", static_cast<int>(cards.size()) - 1},
                {"log_sigma_obs", 1}};
  }
  b.total_dim = 0;
  for (const auto& [name, len] : b.layout) b.total_dim += len;
  return b;
}

Eigen::VectorXd to_unconstrained(const ParameterSet& params,
                                 const Bijection& b) {
  validate(params, b.spec);
  Eigen::VectorXd v(b.total_dim);
  Eigen::Index at = 0;
  if (b.spec.kind == ModelKind::Complete) {
    v(at++) = params.k[0](0);
    v(at++) = params.m[0](0);
    v(at++) = std::log(params.sigma_obs);
    return v;
  }
  v(at++) = params.k_mu;
  v(at++) = std::log(params.k_sigma);
  v(at++) = params.m_mu;
  v(at++) = std::log(params.m_sigma);
  for (const auto& block : params.k) {
    v.segment(at, block.size()) = block;
    at += block.size();
  }
  for (const auto& block : params.m) {
    v.segment(at, block.size()) = block;
    at += block.size();
  }
  const Eigen::VectorXd y = simplex_unconstrain(params.theta);
  v.segment(at, y.size()) = y;
  at += y.size();
  v(at++) = std::log(params.sigma_obs);
  return v;
}

ConstrainResult to_constrained(const Eigen::VectorXd& v, const Bijection& b) {
  require_finite(v, "to_constrained");
  if (v.size() != b.total_dim) {
    throw DomainError("unconstrained vector has length " +
                      std::to_string(v.size()) + "; bijection expects " +
                      std::to_string(b.total_dim));
  }
  ConstrainResult out;
  out.params = make_parameters(b.spec);
  ParameterSet& p = out.params;
  Eigen::Index at = 0;
  if (b.spec.kind == ModelKind::Complete) {
    p.k[0](0) = v(at++);
    p.m[0](0) = v(at++);
    p.sigma_obs = std::exp(v(at));
    out.log_jacobian = v(at);
    return out;
  }
  p.k_mu = v(at++);
  p.k_sigma = std::exp(v(at));
  out.log_jacobian += v(at++);
  p.m_mu = v(at++);
  p.m_sigma = std::exp(v(at));
  out.log_jacobian += v(at++);
  for (auto& block : p.k) {
    block = v.segment(at, block.size());
    at += block.size();
  }
  for (auto& block : p.m) {
    block = v.segment(at, block.size());
    at += block.size();
  }
  const Eigen::Index D = p.theta.size();
  p.theta = simplex_constrain(v.segment(at, D - 1), &out.log_jacobian);
  at += D - 1;
  p.sigma_obs = std::exp(v(at));
  out.log_jacobian += v(at);
  return out;
}

Eigen::VectorXd chain_gradient(const ParameterSet& params,
                               const ParameterSet& grad,
                               const Eigen::VectorXd& v, const Bijection& b) {
  Eigen::VectorXd g(b.total_dim);
  Eigen::Index at = 0;
  if (b.spec.kind == ModelKind::Complete) {
    g(at++) = grad.k[0](0);
    g(at++) = grad.m[0](0);
    g(at++) = grad.sigma_obs * params.sigma_obs + 1.0;
    return g;
  }
  g(at++) = grad.k_mu;
  g(at++) = grad.k_sigma * params.k_sigma + 1.0;
  g(at++) = grad.m_mu;
  g(at++) = grad.m_sigma * params.m_sigma + 1.0;
  for (const auto& block : grad.k) {
    g.segment(at, block.size()) = block;
    at += block.size();
  }
  for (const auto& block : grad.m) {
    g.segment(at, block.size()) = block;
    at += block.size();
  }

  // Stick-breaking chain. With z_l = logistic(y_l - log(D-l-1)):
  //   dx_l/dy_l = x_l (1 - z_l),  dx_j/dy_l = -x_j z_l  (j > l),
  //   d log|J| / dy_l = 1 - z_l (D - l).
  const Eigen::Index D = params.theta.size();
  const auto y = v.segment(at, D - 1);
  for (Eigen::Index l = 0; l < D - 1; ++l) {
    const double adj = y(l) - std::log(static_cast<double>(D - l - 1));
    const double z = inverse_logit(adj);
    double acc = grad.theta(l) * params.theta(l) * (1.0 - z);
    for (Eigen::Index j = l + 1; j < D; ++j) {
      acc -= z * grad.theta(j) * params.theta(j);
    }
    acc += 1.0 - z * static_cast<double>(D - l);
    g(at + l) = acc;
  }
  at += D - 1;
  g(at) = grad.sigma_obs * params.sigma_obs + 1.0;
  return g;
}

}  // namespace poolcast
