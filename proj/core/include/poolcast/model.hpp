#pragma once

#include <Eigen/Core>
#include <vector>

#include "poolcast/calendar.hpp"
#include "poolcast/timeseries.hpp"

namespace poolcast {

/// Scales and rates of the fixed priors (model scale, not data units).
struct PriorConstants {
  double trend_loc_scale = 5.0;   // k_mu, k ~ Normal(0, .)
  double offset_loc_scale = 5.0;  // m_mu, m ~ Normal(0, .)
  double hyper_sd_rate = 1.0;     // k_sigma, m_sigma ~ Exponential(.)
  double noise_sd_scale = 0.5;    // sigma_obs ~ half-Normal(0, .)
};

void validate(const PriorConstants& priors);

enum class ModelKind { Complete, Partial, Mixed };

/// Which pooling structure to fit, over which seasonality dimensions.
///
/// Complete has no seasonal dimensions: one trend/offset pair for all data.
/// Partial pools over exactly one dimension. Mixed blends two or more
/// dimensions through a simplex weight; a one-dimensional Mixed spec is
/// accepted and is exactly equivalent to Partial.
struct ModelSpec {
  ModelKind kind = ModelKind::Complete;
  std::vector<SeasonalityKind> dims;
  PriorConstants priors;
  bool standardize = true;

  /// Number of pooled dimensions (0 for Complete).
  int pooled_dims() const { return static_cast<int>(dims.size()); }
};

ModelSpec complete_spec();
ModelSpec partial_spec(SeasonalityKind dim);
ModelSpec mixed_spec(std::vector<SeasonalityKind> dims);

void validate(const ModelSpec& spec);
std::string model_name(const ModelSpec& spec);

/// Subcategory counts per parameter dimension: {1} for Complete,
/// the dims' cardinalities otherwise.
std::vector<int> parameter_cardinalities(const ModelSpec& spec);

/// Pooling indices the model consumes: T x 0 for Complete, else one
/// column per spec dimension.
PoolingAssignment model_pooling(const ModelSpec& spec,
                                const std::vector<CalendarDate>& dates);

/// All constrained model parameters. Also used as the gradient holder,
/// in which case the positivity/simplex invariants do not apply.
struct ParameterSet {
  double k_mu = 0.0;
  double k_sigma = 1.0;  // > 0
  double m_mu = 0.0;
  double m_sigma = 1.0;  // > 0
  std::vector<Eigen::VectorXd> k;  // per dim, per subcategory growth rates
  std::vector<Eigen::VectorXd> m;  // per dim, per subcategory offsets
  Eigen::VectorXd theta;           // simplex over dims
  double sigma_obs = 1.0;          // > 0
};

/// Zero-initialized parameters with the shapes the spec requires
/// (theta uniform, scales 1).
ParameterSet make_parameters(const ModelSpec& spec);

/// Checks shapes, positivity, and the simplex-sum invariant (1e-12).
void validate(const ParameterSet& params, const ModelSpec& spec);

/// Model-scale prediction mean:
///   yhat_i = (sum_d theta_d k[d][pool(i,d)]) t_i + sum_d theta_d m[d][pool(i,d)]
/// Complete reduces to k t + m; Partial to k[pool] t + m[pool].
Eigen::VectorXd predict_mean(const ParameterSet& params,
                             const Eigen::VectorXd& t,
                             const PoolingAssignment& pooling,
                             const ModelSpec& spec);

double log_prior(const ParameterSet& params, const ModelSpec& spec);

double log_likelihood(const ParameterSet& params, const Eigen::VectorXd& y_std,
                      const Eigen::VectorXd& t,
                      const PoolingAssignment& pooling, const ModelSpec& spec);

double log_posterior(const ParameterSet& params, const Eigen::VectorXd& y_std,
                     const Eigen::VectorXd& t, const PoolingAssignment& pooling,
                     const ModelSpec& spec);

/// Element i = log N(y_std_i | yhat_i, sigma_obs). Sums to log_likelihood.
Eigen::VectorXd pointwise_log_lik(const ParameterSet& params,
                                  const Eigen::VectorXd& y_std,
                                  const Eigen::VectorXd& t,
                                  const PoolingAssignment& pooling,
                                  const ModelSpec& spec);

/// Exact partials of log_posterior with respect to every constrained
/// parameter. The theta gradient is the full D-vector taken before any
/// simplex projection; the inference layer chains the simplex bijection.
ParameterSet grad_constrained(const ParameterSet& params,
                              const Eigen::VectorXd& y_std,
                              const Eigen::VectorXd& t,
                              const PoolingAssignment& pooling,
                              const ModelSpec& spec);

// Scalar log densities shared across the model and the baselines.
double log_normal_pdf(double x, double mean, double sd);
double log_exponential_pdf(double x, double rate);

}  // namespace poolcast
