#include "poolcast/forecast.hpp"

#include <cmath>

#include "poolcast/errors.hpp"

namespace poolcast {

Eigen::VectorXd point_forecast(const ParameterSet& params,
                               const ModelSpec& spec,
                               const StandardizationInfo& info,
                               const std::vector<CalendarDate>& dates) {
  const PoolingAssignment pooling = model_pooling(spec, dates);
  const Eigen::VectorXd t = scaled_time(dates, info.time_scale);
  return destandardize(predict_mean(params, t, pooling, spec), info);
}

Eigen::MatrixXd draw_means(const PosteriorDraws& draws, const ModelSpec& spec,
                           const StandardizationInfo& info,
                           const std::vector<CalendarDate>& dates) {
  if (draws.params.empty()) {
    throw ContractError("draw_means: no posterior draws");
  }
  const PoolingAssignment pooling = model_pooling(spec, dates);
  const Eigen::VectorXd t = scaled_time(dates, info.time_scale);
  Eigen::MatrixXd out(draws.size(), t.size());
  for (int s = 0; s < draws.size(); ++s) {
    out.row(s) =
        destandardize(
            predict_mean(draws.params[static_cast<std::size_t>(s)], t, pooling,
                         spec),
            info)
            .transpose();
  }
  return out;
}

double normal_mixture_quantile(const Eigen::VectorXd& means,
                               const Eigen::VectorXd& sds, double p) {
  if (means.size() == 0 || means.size() != sds.size()) {
    throw ContractError("normal_mixture_quantile: bad component arrays");
  }
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("quantile level must be in (0, 1)");
  }
  auto cdf = [&](double x) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < means.size(); ++i) {
      acc += 0.5 * std::erfc(-(x - means(i)) / (sds(i) * std::sqrt(2.0)));
    }
    return acc / static_cast<double>(means.size());
  };
  double lo = (means - 10.0 * sds).minCoeff();
  double hi = (means + 10.0 * sds).maxCoeff();
  for (int i = 0; i < 200 && hi - lo > 1e-12 * (1.0 + std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Forecast forecast_from_draws(const PosteriorDraws& draws,
                             const ModelSpec& spec,
                             const StandardizationInfo& info,
                             const std::vector<CalendarDate>& dates,
                             double level_lo, double level_hi) {
  const Eigen::MatrixXd means = draw_means(draws, spec, info, dates);
  const int S = static_cast<int>(means.rows());
  Eigen::VectorXd sds(S);
  for (int s = 0; s < S; ++s) {
    sds(s) = draws.params[static_cast<std::size_t>(s)].sigma_obs * info.y_sd;
  }

  Forecast out;
  out.dates = dates;
  out.level_lo = level_lo;
  out.level_hi = level_hi;
  out.mean = means.colwise().mean();
  out.q_lo.resize(means.cols());
  out.q_hi.resize(means.cols());
  for (Eigen::Index i = 0; i < means.cols(); ++i) {
    out.q_lo(i) = normal_mixture_quantile(means.col(i), sds, level_lo);
    out.q_hi(i) = normal_mixture_quantile(means.col(i), sds, level_hi);
  }
  return out;
}

}  // namespace poolcast
