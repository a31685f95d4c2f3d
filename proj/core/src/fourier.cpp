#include "poolcast/fourier.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <set>

#include "poolcast/csv.hpp"
#include "poolcast/errors.hpp"

namespace poolcast {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;

Eigen::VectorXd day_offsets(const std::vector<CalendarDate>& dates,
                            const TimeScale& scale) {
  Eigen::VectorXd t(static_cast<Eigen::Index>(dates.size()));
  for (std::size_t i = 0; i < dates.size(); ++i) {
    t(static_cast<Eigen::Index>(i)) =
        static_cast<double>(days_between(scale.origin, dates[i]));
  }
  return t;
}

}  // namespace

void validate(const FourierConfig& config) {
  std::set<double> periods;
  for (const auto& term : config.terms) {
    if (!(term.period_days > 0.0)) {
      throw ConfigError("fourier period must be positive");
    }
    if (term.order < 1) throw ConfigError("fourier order must be >= 1");
    if (!periods.insert(term.period_days).second) {
      throw ConfigError("duplicate fourier period " +
                        std::to_string(term.period_days));
    }
  }
}

std::string fourier_name(const FourierConfig& config) {
  std::string name = "fourier";
  for (const auto& term : config.terms) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "-P%g-n%d", term.period_days, term.order);
    name += buf;
  }
  return name;
}

Eigen::MatrixXd fourier_features(const Eigen::VectorXd& t_days,
                                 const FourierConfig& config) {
  validate(config);
  if (!t_days.allFinite()) {
    throw DomainError("fourier_features: non-finite time axis");
  }
  Eigen::MatrixXd X(t_days.size(), config.feature_count());
  Eigen::Index col = 0;
  for (const auto& term : config.terms) {
    for (int h = 1; h <= term.order; ++h) {
      const double omega = 2.0 * std::numbers::pi * h / term.period_days;
      for (Eigen::Index i = 0; i < t_days.size(); ++i) {
        X(i, col) = std::cos(omega * t_days(i));
        X(i, col + 1) = std::sin(omega * t_days(i));
      }
      col += 2;
    }
  }
  return X;
}

FourierTarget::FourierTarget(const TimeSeries& series,
                             const FourierConfig& config, bool standardize_y,
                             const PriorConstants& priors)
    : priors_(priors) {
  validate(config);
  validate(priors);
  if (standardize_y) {
    auto [y, info] = standardize(series);
    y_std_ = std::move(y);
    info_ = info;
  } else {
    info_ = identity_standardization(series);
    y_std_ = series.values;
  }
  const Eigen::VectorXd t_days = day_offsets(series.dates, info_.time_scale);
  t_scaled_ = t_days / static_cast<double>(info_.time_scale.span_days);
  features_ = fourier_features(t_days, config);
}

int FourierTarget::dim() const {
  return 2 + static_cast<int>(features_.cols()) + 1;
}

FourierParams FourierTarget::unpack(const Eigen::VectorXd& v) const {
  FourierParams p;
  p.k = v(0);
  p.m = v(1);
  p.beta = v.segment(2, features_.cols());
  p.sigma_obs = std::exp(v(v.size() - 1));
  return p;
}

Eigen::VectorXd FourierTarget::pack(const FourierParams& p) const {
  Eigen::VectorXd v(dim());
  v(0) = p.k;
  v(1) = p.m;
  v.segment(2, features_.cols()) = p.beta;
  v(v.size() - 1) = std::log(p.sigma_obs);
  return v;
}

double FourierTarget::value_and_gradient(const Eigen::VectorXd& v,
                                         Eigen::VectorXd& grad) const {
  if (!v.allFinite()) throw DomainError("fourier target: non-finite point");
  const FourierParams p = unpack(v);
  if (!std::isfinite(p.sigma_obs) || !(p.sigma_obs > 0.0)) {
    grad.setConstant(dim(), std::numeric_limits<double>::quiet_NaN());
    return -std::numeric_limits<double>::infinity();
  }
  const double s = p.sigma_obs;
  const double n = static_cast<double>(y_std_.size());
  const Eigen::VectorXd yhat =
      p.k * t_scaled_ + features_ * p.beta +
      Eigen::VectorXd::Constant(y_std_.size(), p.m);
  const Eigen::VectorXd resid = y_std_ - yhat;
  const double sq = resid.squaredNorm();

  const double trend_var = priors_.trend_loc_scale * priors_.trend_loc_scale;
  const double offset_var =
      priors_.offset_loc_scale * priors_.offset_loc_scale;
  const double noise_var = priors_.noise_sd_scale * priors_.noise_sd_scale;

  double value = -0.5 * n * kLog2Pi - n * std::log(s) - 0.5 * sq / (s * s);
  value += log_normal_pdf(p.k, 0.0, priors_.trend_loc_scale);
  value += log_normal_pdf(p.m, 0.0, priors_.offset_loc_scale);
  for (Eigen::Index j = 0; j < p.beta.size(); ++j) {
    value += log_normal_pdf(p.beta(j), 0.0, priors_.offset_loc_scale);
  }
  value += log_normal_pdf(s, 0.0, priors_.noise_sd_scale);
  value += std::log(s);  // log-Jacobian of sigma_obs = exp(v_last)

  grad.resize(v.size());
  const double inv_var = 1.0 / (s * s);
  grad(0) = inv_var * resid.dot(t_scaled_) - p.k / trend_var;
  grad(1) = inv_var * resid.sum() - p.m / offset_var;
  grad.segment(2, features_.cols()) =
      inv_var * (features_.transpose() * resid) - p.beta / offset_var;
  const double dsigma = -n / s + sq / (s * s * s) - s / noise_var;
  grad(v.size() - 1) = dsigma * s + 1.0;
  return value;
}

FourierFit fit_fourier(const TimeSeries& series, const FourierConfig& config,
                       const OptimOptions& opts, bool standardize_y,
                       const PriorConstants& priors) {
  const FourierTarget target(series, config, standardize_y, priors);
  OptimResult opt = maximize(target, opts);

  FourierFit out;
  out.params = target.unpack(opt.x);
  out.objective = opt.value;
  out.unconstrained_opt = std::move(opt.x);
  out.iterations = opt.iterations;
  out.converged = opt.converged;
  out.grad_norm = opt.grad_norm;
  out.standardization = target.standardization();
  out.trace = std::move(opt.trace);
  return out;
}

Eigen::VectorXd predict_fourier(const FourierParams& params,
                                const std::vector<CalendarDate>& dates,
                                const FourierConfig& config,
                                const StandardizationInfo& info) {
  const Eigen::VectorXd t_days = day_offsets(dates, info.time_scale);
  const Eigen::VectorXd t_scaled =
      t_days / static_cast<double>(info.time_scale.span_days);
  const Eigen::MatrixXd X = fourier_features(t_days, config);
  const Eigen::VectorXd yhat_std =
      params.k * t_scaled + X * params.beta +
      Eigen::VectorXd::Constant(t_scaled.size(), params.m);
  return destandardize(yhat_std, info);
}

FourierDraws fourier_laplace_draws(const FourierFit& fit,
                                   const TimeSeries& series,
                                   const FourierConfig& config, int n_draws,
                                   std::uint64_t seed, bool standardize_y,
                                   const PriorConstants& priors) {
  if (!fit.converged) {
    throw ContractError("fourier_laplace_draws: fit did not converge");
  }
  const FourierTarget target(series, config, standardize_y, priors);
  const Eigen::MatrixXd H = hessian_at(target, fit.unconstrained_opt);

  FourierDraws out;
  out.seed = seed;
  out.draws = gaussian_draws(fit.unconstrained_opt, H, n_draws, seed);
  out.params.reserve(static_cast<std::size_t>(n_draws));
  for (int s = 0; s < n_draws; ++s) {
    out.params.push_back(target.unpack(out.draws.row(s).transpose()));
  }
  return out;
}

Eigen::MatrixXd fourier_draw_means_std(const FourierDraws& draws,
                                       const std::vector<CalendarDate>& dates,
                                       const FourierConfig& config,
                                       const StandardizationInfo& info) {
  if (draws.params.empty()) {
    throw ContractError("fourier_draw_means_std: no draws");
  }
  const Eigen::VectorXd t_days = day_offsets(dates, info.time_scale);
  const Eigen::VectorXd t_scaled =
      t_days / static_cast<double>(info.time_scale.span_days);
  const Eigen::MatrixXd X = fourier_features(t_days, config);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(draws.params.size()),
                      t_scaled.size());
  for (std::size_t s = 0; s < draws.params.size(); ++s) {
    const FourierParams& p = draws.params[s];
    out.row(static_cast<Eigen::Index>(s)) =
        (p.k * t_scaled + X * p.beta +
         Eigen::VectorXd::Constant(t_scaled.size(), p.m))
            .transpose();
  }
  return out;
}

TimeSeries import_external_forecast(const std::string& path,
                                    const std::string& name) {
  TimeSeries series = load_csv(path);
  series.name = name;
  series.kind = TimeSeries::Kind::Forecast;
  return series;
}

}  // namespace poolcast
