#include "poolcast/model.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <utility>

#include "poolcast/errors.hpp"

namespace poolcast {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kSimplexTol = 1e-12;
}  // namespace

double log_normal_pdf(double x, double mean, double sd) {
  if (!(sd > 0.0)) throw DomainError("normal sd must be positive");
  const double z = (x - mean) / sd;
  return -0.5 * kLog2Pi - std::log(sd) - 0.5 * z * z;
}

double log_exponential_pdf(double x, double rate) {
  if (!(rate > 0.0)) throw DomainError("exponential rate must be positive");
  if (x < 0.0) throw DomainError("exponential variate must be nonnegative");
  return std::log(rate) - rate * x;
}

void validate(const PriorConstants& priors) {
  if (!(priors.trend_loc_scale > 0.0) || !(priors.offset_loc_scale > 0.0) ||
      !(priors.hyper_sd_rate > 0.0) || !(priors.noise_sd_scale > 0.0)) {
    throw ConfigError("prior constants must all be strictly positive");
  }
}

ModelSpec complete_spec() { return ModelSpec{ModelKind::Complete, {}, {}, true}; }

ModelSpec partial_spec(SeasonalityKind dim) {
  return ModelSpec{ModelKind::Partial, {dim}, {}, true};
}

ModelSpec mixed_spec(std::vector<SeasonalityKind> dims) {
  return ModelSpec{ModelKind::Mixed, std::move(dims), {}, true};
}

void validate(const ModelSpec& spec) {
  validate(spec.priors);
  switch (spec.kind) {
    case ModelKind::Complete:
      if (!spec.dims.empty()) {
        throw ConfigError("complete pooling takes no seasonality dims");
      }
      break;
    case ModelKind::Partial:
      if (spec.dims.size() != 1) {
        throw ConfigError("partial pooling takes exactly one seasonality dim");
      }
      break;
    case ModelKind::Mixed: {
      if (spec.dims.empty()) {
        throw ConfigError("mixed pooling needs at least one seasonality dim");
      }
      std::set<SeasonalityKind::Tag> seen;
      for (const auto& dim : spec.dims) {
        if (!seen.insert(dim.tag).second) {
          throw ConfigError("mixed pooling dims must be distinct");
        }
      }
      break;
    }
  }
}

std::string model_name(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::Complete:
      return "complete";
    case ModelKind::Partial:
      return "partial-" + spec.dims[0].name();
    case ModelKind::Mixed: {
      std::string name = "mixed";
      for (const auto& dim : spec.dims) name += "-" + dim.name();
      return name;
    }
  }
  return "unknown";
}

std::vector<int> parameter_cardinalities(const ModelSpec& spec) {
  if (spec.kind == ModelKind::Complete) return {1};
  std::vector<int> out;
  out.reserve(spec.dims.size());
  for (const auto& dim : spec.dims) out.push_back(dim.cardinality());
  return out;
}

PoolingAssignment model_pooling(const ModelSpec& spec,
                                const std::vector<CalendarDate>& dates) {
  if (spec.kind == ModelKind::Complete) {
    PoolingAssignment p;
    p.indices.resize(static_cast<Eigen::Index>(dates.size()), 0);
    return p;
  }
  return build_pooling(dates, spec.dims);
}

ParameterSet make_parameters(const ModelSpec& spec) {
  validate(spec);
  const auto cards = parameter_cardinalities(spec);
  ParameterSet p;
  p.k.reserve(cards.size());
  p.m.reserve(cards.size());
  for (int c : cards) {
    p.k.push_back(Eigen::VectorXd::Zero(c));
    p.m.push_back(Eigen::VectorXd::Zero(c));
  }
  const auto n_dims = static_cast<Eigen::Index>(cards.size());
  p.theta = Eigen::VectorXd::Constant(n_dims, 1.0 / static_cast<double>(n_dims));
  return p;
}

void validate(const ParameterSet& params, const ModelSpec& spec) {
  const auto cards = parameter_cardinalities(spec);
  if (params.k.size() != cards.size() || params.m.size() != cards.size()) {
    throw DomainError("parameter arrays do not match the model's dimensions");
  }
  for (std::size_t d = 0; d < cards.size(); ++d) {
    if (params.k[d].size() != cards[d] || params.m[d].size() != cards[d]) {
      throw DomainError("parameter arrays do not match subcategory counts");
    }
  }
  if (params.theta.size() != static_cast<Eigen::Index>(cards.size())) {
    throw DomainError("theta length does not match the model's dimensions");
  }
  if ((params.theta.array() < 0.0).any() ||
      std::abs(params.theta.sum() - 1.0) > kSimplexTol) {
    throw DomainError("theta is not a simplex");
  }
  if (!(params.sigma_obs > 0.0)) throw DomainError("sigma_obs must be positive");
  if (spec.kind != ModelKind::Complete) {
    if (!(params.k_sigma > 0.0) || !(params.m_sigma > 0.0)) {
      throw DomainError("hyper scale parameters must be positive");
    }
  }
}

namespace {

void check_pooling(const ParameterSet& params, const PoolingAssignment& pooling,
                   const ModelSpec& spec, Eigen::Index n_rows) {
  if (pooling.cols() != spec.pooled_dims()) {
    throw DomainError("pooling has " + std::to_string(pooling.cols()) +
                      " columns; model expects " +
                      std::to_string(spec.pooled_dims()));
  }
  if (pooling.rows() != n_rows) {
    throw DomainError("pooling rows do not match the time axis");
  }
  for (Eigen::Index d = 0; d < pooling.cols(); ++d) {
    const auto card = params.k[static_cast<std::size_t>(d)].size();
    for (Eigen::Index i = 0; i < pooling.rows(); ++i) {
      const int j = pooling.indices(i, d);
      if (j < 0 || j >= card) {
        throw IndexError("pooling index " + std::to_string(j) +
                         " out of range for dimension " + std::to_string(d) +
                         " (cardinality " + std::to_string(card) + ")");
      }
    }
  }
}

}  // namespace

Eigen::VectorXd predict_mean(const ParameterSet& params,
                             const Eigen::VectorXd& t,
                             const PoolingAssignment& pooling,
                             const ModelSpec& spec) {
  check_pooling(params, pooling, spec, t.size());
  const Eigen::Index n = t.size();
  Eigen::VectorXd yhat(n);
  if (spec.kind == ModelKind::Complete) {
    yhat = params.k[0](0) * t.array() + params.m[0](0);
    return yhat;
  }
  const int D = spec.pooled_dims();
  for (Eigen::Index i = 0; i < n; ++i) {
    double slope = 0.0;
    double offset = 0.0;
    for (int d = 0; d < D; ++d) {
      const int j = pooling.indices(i, d);
      slope += params.theta(d) * params.k[static_cast<std::size_t>(d)](j);
      offset += params.theta(d) * params.m[static_cast<std::size_t>(d)](j);
    }
    yhat(i) = slope * t(i) + offset;
  }
  return yhat;
}

double log_prior(const ParameterSet& params, const ModelSpec& spec) {
  const PriorConstants& pc = spec.priors;
  if (spec.kind == ModelKind::Complete) {
    // Flat prior on sigma_obs; only the trend/offset locations are shrunk.
    if (!(params.sigma_obs > 0.0)) {
      throw DomainError("sigma_obs must be positive");
    }
    return log_normal_pdf(params.k[0](0), 0.0, pc.trend_loc_scale) +
           log_normal_pdf(params.m[0](0), 0.0, pc.offset_loc_scale);
  }
  if (!(params.k_sigma > 0.0) || !(params.m_sigma > 0.0) ||
      !(params.sigma_obs > 0.0)) {
    throw DomainError("scale parameters must be positive");
  }
  double lp = log_normal_pdf(params.k_mu, 0.0, pc.trend_loc_scale) +
              log_normal_pdf(params.m_mu, 0.0, pc.offset_loc_scale) +
              log_exponential_pdf(params.k_sigma, pc.hyper_sd_rate) +
              log_exponential_pdf(params.m_sigma, pc.hyper_sd_rate);
  for (std::size_t d = 0; d < params.k.size(); ++d) {
    for (Eigen::Index j = 0; j < params.k[d].size(); ++j) {
      lp += log_normal_pdf(params.k[d](j), params.k_mu, params.k_sigma);
      lp += log_normal_pdf(params.m[d](j), params.m_mu, params.m_sigma);
    }
  }
  // Half-normal kernel on the noise sd; the factor 2 from the truncation
  // is constant and dropped. Uniform simplex prior on theta contributes 0.
  lp += log_normal_pdf(params.sigma_obs, 0.0, pc.noise_sd_scale);
  return lp;
}

double log_likelihood(const ParameterSet& params, const Eigen::VectorXd& y_std,
                      const Eigen::VectorXd& t,
                      const PoolingAssignment& pooling, const ModelSpec& spec) {
  if (!(params.sigma_obs > 0.0)) throw DomainError("sigma_obs must be positive");
  if (y_std.size() != t.size()) {
    throw DomainError("series and time axis lengths differ");
  }
  const Eigen::VectorXd yhat = predict_mean(params, t, pooling, spec);
  const double s = params.sigma_obs;
  const double n = static_cast<double>(y_std.size());
  const double sq = (y_std - yhat).squaredNorm();
  return -0.5 * n * kLog2Pi - n * std::log(s) - 0.5 * sq / (s * s);
}

double log_posterior(const ParameterSet& params, const Eigen::VectorXd& y_std,
                     const Eigen::VectorXd& t, const PoolingAssignment& pooling,
                     const ModelSpec& spec) {
  return log_prior(params, spec) +
         log_likelihood(params, y_std, t, pooling, spec);
}

Eigen::VectorXd pointwise_log_lik(const ParameterSet& params,
                                  const Eigen::VectorXd& y_std,
                                  const Eigen::VectorXd& t,
                                  const PoolingAssignment& pooling,
                                  const ModelSpec& spec) {
  if (!(params.sigma_obs > 0.0)) throw DomainError("sigma_obs must be positive");
  const Eigen::VectorXd yhat = predict_mean(params, t, pooling, spec);
  const double s = params.sigma_obs;
  const double log_s = std::log(s);
  Eigen::VectorXd out(y_std.size());
  for (Eigen::Index i = 0; i < y_std.size(); ++i) {
    const double z = (y_std(i) - yhat(i)) / s;
    out(i) = -0.5 * kLog2Pi - log_s - 0.5 * z * z;
  }
  return out;
}

ParameterSet grad_constrained(const ParameterSet& params,
                              const Eigen::VectorXd& y_std,
                              const Eigen::VectorXd& t,
                              const PoolingAssignment& pooling,
                              const ModelSpec& spec) {
  check_pooling(params, pooling, spec, t.size());
  if (!(params.sigma_obs > 0.0)) throw DomainError("sigma_obs must be positive");
  const PriorConstants& pc = spec.priors;
  const Eigen::VectorXd yhat = predict_mean(params, t, pooling, spec);
  const Eigen::VectorXd resid = y_std - yhat;
  const double s = params.sigma_obs;
  const double inv_var = 1.0 / (s * s);
  const double n = static_cast<double>(y_std.size());

  ParameterSet g = make_parameters(spec);
  g.k_sigma = 0.0;
  g.m_sigma = 0.0;
  g.theta.setZero();
  g.sigma_obs = 0.0;

  // Likelihood terms.
  if (spec.kind == ModelKind::Complete) {
    g.k[0](0) = inv_var * resid.dot(t);
    g.m[0](0) = inv_var * resid.sum();
  } else {
    const int D = spec.pooled_dims();
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      const double w = inv_var * resid(i);
      for (int d = 0; d < D; ++d) {
        const int j = pooling.indices(i, d);
        const auto du = static_cast<std::size_t>(d);
        g.k[du](j) += w * params.theta(d) * t(i);
        g.m[du](j) += w * params.theta(d);
        g.theta(d) += w * (params.k[du](j) * t(i) + params.m[du](j));
      }
    }
  }
  g.sigma_obs = -n / s + resid.squaredNorm() / (s * s * s);

  // Prior terms.
  if (spec.kind == ModelKind::Complete) {
    g.k[0](0) -= params.k[0](0) / (pc.trend_loc_scale * pc.trend_loc_scale);
    g.m[0](0) -= params.m[0](0) / (pc.offset_loc_scale * pc.offset_loc_scale);
    return g;  // flat sigma_obs prior
  }

  const double k_var = params.k_sigma * params.k_sigma;
  const double m_var = params.m_sigma * params.m_sigma;
  double k_mu_pull = 0.0;
  double m_mu_pull = 0.0;
  double k_sigma_grad = 0.0;
  double m_sigma_grad = 0.0;
  for (std::size_t d = 0; d < params.k.size(); ++d) {
    for (Eigen::Index j = 0; j < params.k[d].size(); ++j) {
      const double dk = params.k[d](j) - params.k_mu;
      const double dm = params.m[d](j) - params.m_mu;
      g.k[d](j) -= dk / k_var;
      g.m[d](j) -= dm / m_var;
      k_mu_pull += dk / k_var;
      m_mu_pull += dm / m_var;
      k_sigma_grad += -1.0 / params.k_sigma + dk * dk / (k_var * params.k_sigma);
      m_sigma_grad += -1.0 / params.m_sigma + dm * dm / (m_var * params.m_sigma);
    }
  }
  g.k_mu = k_mu_pull -
           params.k_mu / (pc.trend_loc_scale * pc.trend_loc_scale);
  g.m_mu = m_mu_pull -
           params.m_mu / (pc.offset_loc_scale * pc.offset_loc_scale);
  g.k_sigma = k_sigma_grad - pc.hyper_sd_rate;
  g.m_sigma = m_sigma_grad - pc.hyper_sd_rate;
  g.sigma_obs -= params.sigma_obs / (pc.noise_sd_scale * pc.noise_sd_scale);
  return g;
}

}  // namespace poolcast
