#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "poolcast/inference.hpp"
#include "poolcast/model.hpp"
#include "poolcast/optimize.hpp"
#include "poolcast/timeseries.hpp"

namespace poolcast {

struct FourierTerm {
  double period_days = 7.0;  // > 0
  int order = 3;             // >= 1
};

struct FourierConfig {
  std::vector<FourierTerm> terms;

  int feature_count() const {
    int n = 0;
    for (const auto& term : terms) n += 2 * term.order;
    return n;
  }
};

void validate(const FourierConfig& config);
std::string fourier_name(const FourierConfig& config);

/// Row i, term (P, n): [cos(2 pi 1 t_i / P), sin(2 pi 1 t_i / P), ...,
/// cos(2 pi n t_i / P), sin(2 pi n t_i / P)], terms concatenated in config
/// order. t is in raw day offsets so P keeps its calendar meaning.
Eigen::MatrixXd fourier_features(const Eigen::VectorXd& t_days,
                                 const FourierConfig& config);

struct FourierParams {
  double k = 0.0;
  double m = 0.0;
  Eigen::VectorXd beta;
  double sigma_obs = 1.0;  // > 0
};

/// Standardized-scale regression target with Normal(0, 5) coefficient
/// priors and the shared half-normal noise kernel. The trend rides the
/// scaled time axis; the trigonometric features ride raw day offsets.
class FourierTarget : public UnconstrainedTarget {
 public:
  FourierTarget(const TimeSeries& series, const FourierConfig& config,
                bool standardize_y, const PriorConstants& priors);

  int dim() const override;
  double value_and_gradient(const Eigen::VectorXd& v,
                            Eigen::VectorXd& grad) const override;

  FourierParams unpack(const Eigen::VectorXd& v) const;
  Eigen::VectorXd pack(const FourierParams& p) const;
  const StandardizationInfo& standardization() const { return info_; }
  const Eigen::MatrixXd& features() const { return features_; }
  const Eigen::VectorXd& y_std() const { return y_std_; }
  const Eigen::VectorXd& time_scaled() const { return t_scaled_; }

 private:
  StandardizationInfo info_;
  Eigen::VectorXd y_std_;
  Eigen::VectorXd t_scaled_;
  Eigen::MatrixXd features_;
  PriorConstants priors_;
};

struct FourierFit {
  FourierParams params;
  double objective = 0.0;
  Eigen::VectorXd unconstrained_opt;
  int iterations = 0;
  bool converged = false;
  double grad_norm = 0.0;
  StandardizationInfo standardization;
  std::vector<TraceRow> trace;
};

FourierFit fit_fourier(const TimeSeries& series, const FourierConfig& config,
                       const OptimOptions& opts = {}, bool standardize_y = true,
                       const PriorConstants& priors = {});

/// Original-scale plug-in prediction at the given dates.
Eigen::VectorXd predict_fourier(const FourierParams& params,
                                const std::vector<CalendarDate>& dates,
                                const FourierConfig& config,
                                const StandardizationInfo& info);

struct FourierDraws {
  Eigen::MatrixXd draws;
  std::vector<FourierParams> params;
  std::uint64_t seed = 0;
};

FourierDraws fourier_laplace_draws(const FourierFit& fit,
                                   const TimeSeries& series,
                                   const FourierConfig& config, int n_draws,
                                   std::uint64_t seed,
                                   bool standardize_y = true,
                                   const PriorConstants& priors = {});

/// Standardized-scale prediction means per draw at the given dates (S x T).
Eigen::MatrixXd fourier_draw_means_std(const FourierDraws& draws,
                                       const std::vector<CalendarDate>& dates,
                                       const FourierConfig& config,
                                       const StandardizationInfo& info);

/// CSV with header date,value; the result is tagged as a forecast series.
TimeSeries import_external_forecast(const std::string& path,
                                    const std::string& name);

}  // namespace poolcast
