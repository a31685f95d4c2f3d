#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "poolcast/fourier.hpp"
#include "poolcast/inference.hpp"
#include "poolcast/model.hpp"
#include "poolcast/timeseries.hpp"

namespace poolcast {

struct Fold {
  CalendarDate train_end_exclusive;  // == test_start
  CalendarDate test_start;
  CalendarDate test_end_inclusive;
};

/// Expanding-window plan: consecutive non-overlapping test windows of
/// horizon_days, each trained on everything earlier.
struct FoldPlan {
  std::vector<Fold> folds;
  int horizon_days = 30;
};

FoldPlan make_folds(const std::vector<CalendarDate>& dates,
                    const CalendarDate& first_test_start,
                    int horizon_days = 30, int n_folds = 12);

/// 100 * mean |actual - forecast| / |actual|. Zero actuals are a hard
/// error unless an epsilon floor (> 0) is supplied.
double mape(const Eigen::VectorXd& actual, const Eigen::VectorXd& forecast,
            double epsilon = 0.0);

struct Lpd {
  Eigen::VectorXd per_point;
  double total = 0.0;
};

/// log( (1/S) sum_s N(y_i | mean_s_i, sigma_s) ) per point via log-sum-exp
/// on the model scale, plus the -log y_sd change-of-variables term so the
/// result refers to the original scale.
Lpd mixture_lpd(const Eigen::MatrixXd& mean_std,
                const Eigen::VectorXd& sigma_std,
                const Eigen::VectorXd& y_test_std, double y_sd);

Lpd test_log_predictive_density(const PosteriorDraws& draws,
                                const ModelSpec& spec,
                                const TimeSeries& test_data,
                                const StandardizationInfo& info);

Lpd test_log_predictive_density(const FourierDraws& draws,
                                const FourierConfig& config,
                                const TimeSeries& test_data,
                                const StandardizationInfo& info);

struct GpdFit {
  double k_hat = 0.0;
  double sigma_hat = 0.0;
};

/// Zhang-Stephens profile-likelihood estimate of the generalized Pareto
/// shape/scale: grid over the transformed parameter, weights from the
/// relative likelihood, posterior-mean estimator. Fewer than 5 excesses
/// yields a diagnostic-only k_hat = +inf.
GpdFit fit_generalized_pareto(const Eigen::VectorXd& excesses_sorted);

/// GPD quantile function; k = 0 falls back to the exponential.
double gpd_quantile(double p, double k, double sigma);

struct PsisResult {
  double elpd = 0.0;
  Eigen::VectorXd per_point;
  Eigen::VectorXd k_hat;  // per point; flagged when > 0.7
  std::vector<std::string> warnings;

  int flagged_count() const;
  double k_max() const;
};

constexpr double kParetoKThreshold = 0.7;

/// Pareto-smoothed importance-sampling LOO from an S x N pointwise
/// log-likelihood matrix.
PsisResult psis_loo(const Eigen::MatrixXd& loglik);

// ---- benchmark harness -------------------------------------------------

struct BenchmarkModel {
  enum class Kind { Pooling, Fourier, External };

  Kind kind = Kind::Pooling;
  std::string name;
  ModelSpec spec;                  // Pooling
  FourierConfig fourier;           // Fourier
  bool fourier_standardize = true;
  TimeSeries external;             // External (imported forecast)
};

BenchmarkModel pooling_model(const ModelSpec& spec, std::string name = "");
BenchmarkModel fourier_model(const FourierConfig& config,
                             std::string name = "");
BenchmarkModel external_model(const TimeSeries& forecast);

struct BenchmarkOptions {
  OptimOptions optim;
  int n_draws = 1000;
  std::uint64_t seed = 0;
  double mape_epsilon = 0.0;
  bool compute_loo = true;
};

struct CellResult {
  int fold = 0;
  double mape = std::numeric_limits<double>::quiet_NaN();
  double lpd = std::numeric_limits<double>::quiet_NaN();
  std::string error;  // empty when the cell succeeded
};

struct ModelEval {
  std::string model;
  std::vector<CellResult> cells;
  double mean_mape = std::numeric_limits<double>::quiet_NaN();
  double test_lpd = std::numeric_limits<double>::quiet_NaN();
  double loo_elpd = std::numeric_limits<double>::quiet_NaN();
  double pareto_k_max = std::numeric_limits<double>::quiet_NaN();
  int pareto_flagged = 0;
  int loo_points = 0;
  std::vector<std::string> warnings;
};

struct EvaluationReport {
  std::string dataset;
  FoldPlan plan;
  std::vector<ModelEval> models;

  const ModelEval& by_name(const std::string& name) const;
};

/// Fits every model on every fold's training window, forecasts the
/// horizon, and accumulates original-scale MAPE and test log predictive
/// density; PSIS-LOO runs on the final training fit of each probabilistic
/// model. Fold failures are recorded per cell. Deterministic given seeds.
EvaluationReport run_benchmark(const TimeSeries& data,
                               const std::vector<BenchmarkModel>& models,
                               const FoldPlan& plan,
                               const BenchmarkOptions& opts = {});

/// Long format: dataset,model,fold,metric,value.
std::string report_to_csv(const EvaluationReport& report);

/// Aligned text summary, models as columns.
std::string report_to_table(const EvaluationReport& report);

/// Mean-MAPE comparison across several datasets (datasets as rows,
/// models as columns).
std::string comparison_table(const std::vector<EvaluationReport>& reports);

}  // namespace poolcast
