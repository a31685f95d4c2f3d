#include "poolcast/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

#include "poolcast/csv.hpp"
#include "poolcast/errors.hpp"
#include "poolcast/forecast.hpp"
#include "poolcast/rng.hpp"

namespace poolcast {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454836;

double log_sum_exp(const Eigen::VectorXd& x) {
  const double m = x.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((x.array() - m).exp().sum());
}

}  // namespace

FoldPlan make_folds(const std::vector<CalendarDate>& dates,
                    const CalendarDate& first_test_start, int horizon_days,
                    int n_folds) {
  if (horizon_days < 1) throw ConfigError("fold horizon must be >= 1 day");
  if (n_folds < 1) throw ConfigError("need at least one fold");
  if (dates.empty()) throw PlanningError("no dates to plan folds over");

  FoldPlan plan;
  plan.horizon_days = horizon_days;
  for (int f = 0; f < n_folds; ++f) {
    Fold fold;
    fold.test_start =
        add_days(first_test_start, static_cast<std::int64_t>(f) * horizon_days);
    fold.train_end_exclusive = fold.test_start;
    fold.test_end_inclusive = add_days(fold.test_start, horizon_days - 1);
    plan.folds.push_back(fold);
  }

  std::size_t train_rows = 0;
  for (const auto& d : dates) {
    if (d < first_test_start) ++train_rows;
  }
  if (train_rows < 2) {
    throw PlanningError("only " + std::to_string(train_rows) +
                        " training dates precede " +
                        format_date(first_test_start) + "; need at least 2");
  }
  const CalendarDate last_needed = plan.folds.back().test_end_inclusive;
  if (dates.back() < last_needed) {
    throw PlanningError("data ends " + format_date(dates.back()) +
                        " but fold " + std::to_string(n_folds) +
                        " tests through " + format_date(last_needed));
  }
  return plan;
}

double mape(const Eigen::VectorXd& actual, const Eigen::VectorXd& forecast,
            double epsilon) {
  if (actual.size() != forecast.size() || actual.size() < 1) {
    throw ContractError("mape: vectors must have equal nonzero length");
  }
  double acc = 0.0;
  for (Eigen::Index i = 0; i < actual.size(); ++i) {
    double denom = std::abs(actual(i));
    if (denom == 0.0) {
      if (!(epsilon > 0.0)) {
        throw DomainError("mape: actual value at index " + std::to_string(i) +
                          " is zero; enable an epsilon floor to proceed");
      }
      denom = epsilon;
    } else if (epsilon > 0.0) {
      denom = std::max(denom, epsilon);
    }
    acc += std::abs(actual(i) - forecast(i)) / denom;
  }
  return 100.0 * acc / static_cast<double>(actual.size());
}

Lpd mixture_lpd(const Eigen::MatrixXd& mean_std,
                const Eigen::VectorXd& sigma_std,
                const Eigen::VectorXd& y_test_std, double y_sd) {
  const Eigen::Index S = mean_std.rows();
  if (S < 1) throw ContractError("mixture_lpd: no draws");
  if (sigma_std.size() != S || mean_std.cols() != y_test_std.size()) {
    throw ContractError("mixture_lpd: shape mismatch");
  }
  Lpd out;
  out.per_point.resize(y_test_std.size());
  Eigen::VectorXd work(S);
  const double log_s_count = std::log(static_cast<double>(S));
  for (Eigen::Index i = 0; i < y_test_std.size(); ++i) {
    for (Eigen::Index s = 0; s < S; ++s) {
      const double sd = sigma_std(s);
      const double z = (y_test_std(i) - mean_std(s, i)) / sd;
      work(s) = -0.5 * kLog2Pi - std::log(sd) - 0.5 * z * z;
    }
    out.per_point(i) = log_sum_exp(work) - log_s_count - std::log(y_sd);
  }
  out.total = out.per_point.sum();
  return out;
}

Lpd test_log_predictive_density(const PosteriorDraws& draws,
                                const ModelSpec& spec,
                                const TimeSeries& test_data,
                                const StandardizationInfo& info) {
  if (draws.params.empty()) {
    throw ContractError("test_log_predictive_density: no draws");
  }
  const PoolingAssignment pooling = model_pooling(spec, test_data.dates);
  const Eigen::VectorXd t = scaled_time(test_data.dates, info.time_scale);
  const Eigen::VectorXd y_std = to_standardized(test_data.values, info);

  const int S = draws.size();
  Eigen::MatrixXd means(S, t.size());
  Eigen::VectorXd sigmas(S);
  for (int s = 0; s < S; ++s) {
    const ParameterSet& p = draws.params[static_cast<std::size_t>(s)];
    means.row(s) = predict_mean(p, t, pooling, spec).transpose();
    sigmas(s) = p.sigma_obs;
  }
  return mixture_lpd(means, sigmas, y_std, info.y_sd);
}

Lpd test_log_predictive_density(const FourierDraws& draws,
                                const FourierConfig& config,
                                const TimeSeries& test_data,
                                const StandardizationInfo& info) {
  if (draws.params.empty()) {
    throw ContractError("test_log_predictive_density: no draws");
  }
  const Eigen::MatrixXd means =
      fourier_draw_means_std(draws, test_data.dates, config, info);
  Eigen::VectorXd sigmas(static_cast<Eigen::Index>(draws.params.size()));
  for (std::size_t s = 0; s < draws.params.size(); ++s) {
    sigmas(static_cast<Eigen::Index>(s)) = draws.params[s].sigma_obs;
  }
  const Eigen::VectorXd y_std = to_standardized(test_data.values, info);
  return mixture_lpd(means, sigmas, y_std, info.y_sd);
}

GpdFit fit_generalized_pareto(const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  if (n < 5) return {kInf, kNaN};
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(x(i) > 0.0) || (i > 0 && x(i) < x(i - 1))) {
      throw DomainError("fit_generalized_pareto: excesses must be sorted "
                        "and strictly positive");
    }
  }

  // Grid over theta = -k/sigma; profile out k given theta, weight grid
  // points by relative likelihood and take the posterior mean.
  const int m_grid = 30 + static_cast<int>(std::floor(std::sqrt(n)));
  const double x_max = x(n - 1);
  const Eigen::Index quart =
      static_cast<Eigen::Index>(std::floor(n / 4.0 + 0.5)) - 1;
  const double x_star = x(std::max<Eigen::Index>(quart, 0));

  Eigen::VectorXd theta(m_grid), log_lik(m_grid);
  for (int j = 0; j < m_grid; ++j) {
    double th = 1.0 / x_max +
                (1.0 - std::sqrt(m_grid / (j + 0.5))) / (3.0 * x_star);
    if (th == 0.0) th = -1e-30;
    double k = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) k += std::log1p(-th * x(i));
    k /= static_cast<double>(n);
    theta(j) = th;
    log_lik(j) = static_cast<double>(n) * (std::log(-th / k) - k - 1.0);
  }
  const Eigen::VectorXd w =
      (log_lik.array() - log_sum_exp(log_lik)).exp();
  const double theta_hat = w.dot(theta);

  GpdFit fit;
  if (theta_hat == 0.0) {
    fit.k_hat = 0.0;
    fit.sigma_hat = x.mean();
    return fit;
  }
  double k = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) k += std::log1p(-theta_hat * x(i));
  fit.k_hat = k / static_cast<double>(n);
  fit.sigma_hat = -fit.k_hat / theta_hat;
  return fit;
}

double gpd_quantile(double p, double k, double sigma) {
  if (!(p >= 0.0 && p < 1.0)) throw DomainError("gpd_quantile: p in [0, 1)");
  if (std::abs(k) < 1e-12) return -sigma * std::log1p(-p);
  return sigma * (std::pow(1.0 - p, -k) - 1.0) / k;
}

int PsisResult::flagged_count() const {
  int n = 0;
  for (Eigen::Index i = 0; i < k_hat.size(); ++i) {
    if (k_hat(i) > kParetoKThreshold) ++n;
  }
  return n;
}

double PsisResult::k_max() const {
  return k_hat.size() > 0 ? k_hat.maxCoeff() : kNaN;
}

PsisResult psis_loo(const Eigen::MatrixXd& loglik) {
  const Eigen::Index S = loglik.rows();
  const Eigen::Index N = loglik.cols();
  if (S < 1 || N < 1) throw ContractError("psis_loo: empty matrix");
  for (Eigen::Index s = 0; s < S; ++s) {
    for (Eigen::Index i = 0; i < N; ++i) {
      if (!std::isfinite(loglik(s, i))) {
        throw DataError("psis_loo: non-finite log likelihood at draw " +
                        std::to_string(s) + ", point " + std::to_string(i));
      }
    }
  }

  PsisResult out;
  out.per_point.resize(N);
  out.k_hat.resize(N);
  if (S < 100) {
    out.warnings.push_back("psis_loo: only " + std::to_string(S) +
                           " draws; at least 100 are recommended");
  }

  const Eigen::Index tail_cap = std::min<Eigen::Index>(
      static_cast<Eigen::Index>(std::ceil(0.2 * static_cast<double>(S))),
      static_cast<Eigen::Index>(std::ceil(3.0 * std::sqrt(S))));

  std::vector<Eigen::Index> order(static_cast<std::size_t>(S));
  Eigen::VectorXd lw(S);
  for (Eigen::Index i = 0; i < N; ++i) {
    lw = -loglik.col(i);  // raw log importance ratios
    const double raw_max = lw.maxCoeff();

    double k_hat = -kInf;
    if (tail_cap >= 1 && tail_cap < S) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](Eigen::Index a, Eigen::Index b) {
                         return lw(a) < lw(b);
                       });
      const double cutoff = lw(order[static_cast<std::size_t>(S - tail_cap - 1)]);
      std::vector<Eigen::Index> tail;
      for (Eigen::Index r = S - tail_cap; r < S; ++r) {
        const Eigen::Index idx = order[static_cast<std::size_t>(r)];
        if (lw(idx) > cutoff) tail.push_back(idx);
      }
      const auto m_eff = static_cast<Eigen::Index>(tail.size());
      if (m_eff == 0) {
        k_hat = -kInf;  // no variation above the cutoff
      } else if (m_eff < 5) {
        k_hat = kInf;  // too few tail samples to fit a shape
      } else {
        Eigen::VectorXd excess(m_eff);
        for (Eigen::Index r = 0; r < m_eff; ++r) {
          excess(r) = lw(tail[static_cast<std::size_t>(r)]) - cutoff;
        }
        const GpdFit fit = fit_generalized_pareto(excess);
        k_hat = fit.k_hat;
        if (std::isfinite(fit.k_hat)) {
          // Replace the tail by the fitted GPD's expected order
          // statistics, truncated at the raw maximum.
          for (Eigen::Index r = 0; r < m_eff; ++r) {
            const double p =
                (static_cast<double>(r) + 0.5) / static_cast<double>(m_eff);
            const double smoothed =
                cutoff + gpd_quantile(p, fit.k_hat, fit.sigma_hat);
            lw(tail[static_cast<std::size_t>(r)]) = std::min(smoothed, raw_max);
          }
        }
      }
    }

    out.k_hat(i) = k_hat;
    Eigen::VectorXd num = lw + loglik.col(i);
    out.per_point(i) = log_sum_exp(num) - log_sum_exp(lw);
  }
  out.elpd = out.per_point.sum();
  return out;
}

// ---- benchmark harness -------------------------------------------------

BenchmarkModel pooling_model(const ModelSpec& spec, std::string name) {
  validate(spec);
  BenchmarkModel m;
  m.kind = BenchmarkModel::Kind::Pooling;
  m.spec = spec;
  m.name = name.empty() ? model_name(spec) : std::move(name);
  return m;
}

BenchmarkModel fourier_model(const FourierConfig& config, std::string name) {
  validate(config);
  BenchmarkModel m;
  m.kind = BenchmarkModel::Kind::Fourier;
  m.fourier = config;
  m.name = name.empty() ? fourier_name(config) : std::move(name);
  return m;
}

BenchmarkModel external_model(const TimeSeries& forecast) {
  BenchmarkModel m;
  m.kind = BenchmarkModel::Kind::External;
  m.external = forecast;
  m.name = forecast.name;
  return m;
}

const ModelEval& EvaluationReport::by_name(const std::string& name) const {
  for (const auto& m : models) {
    if (m.model == name) return m;
  }
  throw ContractError("no model '" + name + "' in the report");
}

namespace {

Eigen::VectorXd external_values_at(const TimeSeries& external,
                                   const std::vector<CalendarDate>& dates) {
  std::map<CalendarDate, double> lookup;
  for (std::size_t i = 0; i < external.dates.size(); ++i) {
    lookup[external.dates[i]] = external.values(static_cast<Eigen::Index>(i));
  }
  std::vector<std::string> missing;
  Eigen::VectorXd out(static_cast<Eigen::Index>(dates.size()));
  for (std::size_t i = 0; i < dates.size(); ++i) {
    const auto it = lookup.find(dates[i]);
    if (it == lookup.end()) {
      missing.push_back(format_date(dates[i]));
    } else {
      out(static_cast<Eigen::Index>(i)) = it->second;
    }
  }
  if (!missing.empty()) {
    std::string joined;
    for (std::size_t i = 0; i < missing.size(); ++i) {
      if (i > 0) joined += ", ";
      joined += missing[i];
    }
    throw AlignmentError("imported forecast '" + external.name +
                         "' is missing evaluation dates: " + joined);
  }
  return out;
}

struct LooInputs {
  Eigen::MatrixXd loglik;  // S x N, original-scale pointwise log likelihood
};

LooInputs pooling_loo_inputs(const PosteriorDraws& draws,
                             const ModelSpec& spec, const TimeSeries& train,
                             const StandardizationInfo& info) {
  const PoolingAssignment pooling = model_pooling(spec, train.dates);
  const Eigen::VectorXd t = scaled_time(train.dates, info.time_scale);
  const Eigen::VectorXd y_std = to_standardized(train.values, info);
  LooInputs out;
  out.loglik.resize(draws.size(), t.size());
  const double jac = std::log(info.y_sd);
  for (int s = 0; s < draws.size(); ++s) {
    out.loglik.row(s) =
        (pointwise_log_lik(draws.params[static_cast<std::size_t>(s)], y_std, t,
                           pooling, spec)
             .array() -
         jac)
            .transpose();
  }
  return out;
}

LooInputs fourier_loo_inputs(const FourierDraws& draws,
                             const FourierConfig& config,
                             const TimeSeries& train,
                             const StandardizationInfo& info) {
  const Eigen::MatrixXd means =
      fourier_draw_means_std(draws, train.dates, config, info);
  const Eigen::VectorXd y_std = to_standardized(train.values, info);
  LooInputs out;
  out.loglik.resize(means.rows(), means.cols());
  const double jac = std::log(info.y_sd);
  for (Eigen::Index s = 0; s < means.rows(); ++s) {
    const double sd = draws.params[static_cast<std::size_t>(s)].sigma_obs;
    for (Eigen::Index i = 0; i < means.cols(); ++i) {
      const double z = (y_std(i) - means(s, i)) / sd;
      out.loglik(s, i) = -0.5 * kLog2Pi - std::log(sd) - 0.5 * z * z - jac;
    }
  }
  return out;
}

}  // namespace

EvaluationReport run_benchmark(const TimeSeries& data,
                               const std::vector<BenchmarkModel>& models,
                               const FoldPlan& plan,
                               const BenchmarkOptions& opts) {
  if (models.empty()) throw ConfigError("run_benchmark: no models configured");
  {
    std::set<std::string> names;
    for (const auto& m : models) {
      if (!names.insert(m.name).second) {
        throw ConfigError("run_benchmark: duplicate model name '" + m.name +
                          "'");
      }
    }
  }

  EvaluationReport report;
  report.dataset = data.name;
  report.plan = plan;

  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    const BenchmarkModel& model = models[mi];
    ModelEval eval;
    eval.model = model.name;

    // Kept for the PSIS-LOO pass on the final training window.
    std::optional<MapResult> last_pool_fit;
    std::optional<PosteriorDraws> last_pool_draws;
    std::optional<FourierFit> last_fourier_fit;
    std::optional<FourierDraws> last_fourier_draws;
    TimeSeries last_train;

    int external_extras = 0;
    for (std::size_t fi = 0; fi < plan.folds.size(); ++fi) {
      const Fold& fold = plan.folds[fi];
      CellResult cell;
      cell.fold = static_cast<int>(fi) + 1;
      try {
        const TimeSeries test =
            slice(data, fold.test_start, fold.test_end_inclusive);
        if (test.dates.empty()) {
          throw DataError("no observations in the test window " +
                          format_date(fold.test_start) + ".." +
                          format_date(fold.test_end_inclusive));
        }
        const std::uint64_t fit_seed = mix_seed(opts.seed, mi, fi);
        const std::uint64_t draw_seed = mix_seed(fit_seed, 0x5eedULL);

        if (model.kind == BenchmarkModel::Kind::External) {
          const Eigen::VectorXd fc =
              external_values_at(model.external, test.dates);
          cell.mape = mape(test.values, fc, opts.mape_epsilon);
          external_extras = static_cast<int>(model.external.dates.size());
        } else if (model.kind == BenchmarkModel::Kind::Pooling) {
          const TimeSeries train = slice_before(data, fold.test_start);
          OptimOptions oo = opts.optim;
          oo.seed = fit_seed;
          MapResult fit = map_fit(train, model.spec, oo);
          if (!fit.converged) {
            throw NumericalError("fit did not converge (grad norm " +
                                 format_double(fit.grad_norm) + ")");
          }
          PosteriorDraws draws =
              laplace_draws(fit, train, model.spec, opts.n_draws, draw_seed);
          const Eigen::MatrixXd means =
              draw_means(draws, model.spec, fit.standardization, test.dates);
          cell.mape =
              mape(test.values, means.colwise().mean(), opts.mape_epsilon);
          cell.lpd = test_log_predictive_density(draws, model.spec, test,
                                                 fit.standardization)
                         .total;
          if (fi + 1 == plan.folds.size()) {
            last_pool_fit = std::move(fit);
            last_pool_draws = std::move(draws);
            last_train = train;
          }
        } else {
          const TimeSeries train = slice_before(data, fold.test_start);
          OptimOptions oo = opts.optim;
          oo.seed = fit_seed;
          FourierFit fit = fit_fourier(train, model.fourier, oo,
                                       model.fourier_standardize);
          if (!fit.converged) {
            throw NumericalError("fit did not converge (grad norm " +
                                 format_double(fit.grad_norm) + ")");
          }
          FourierDraws draws =
              fourier_laplace_draws(fit, train, model.fourier, opts.n_draws,
                                    draw_seed, model.fourier_standardize);
          const Eigen::MatrixXd means_std = fourier_draw_means_std(
              draws, test.dates, model.fourier, fit.standardization);
          const Eigen::VectorXd fc = destandardize(
              means_std.colwise().mean().transpose(), fit.standardization);
          cell.mape = mape(test.values, fc, opts.mape_epsilon);
          cell.lpd = test_log_predictive_density(draws, model.fourier, test,
                                                 fit.standardization)
                         .total;
          if (fi + 1 == plan.folds.size()) {
            last_fourier_fit = std::move(fit);
            last_fourier_draws = std::move(draws);
            last_train = train;
          }
        }
      } catch (const Error& e) {
        cell.error = std::string(e.category()) + ": " + e.what();
      }
      eval.cells.push_back(std::move(cell));
    }

    // Aggregate over clean cells.
    double mape_acc = 0.0;
    int mape_n = 0;
    double lpd_acc = 0.0;
    int lpd_n = 0;
    for (const auto& cell : eval.cells) {
      if (!cell.error.empty()) continue;
      if (std::isfinite(cell.mape)) {
        mape_acc += cell.mape;
        ++mape_n;
      }
      if (std::isfinite(cell.lpd)) {
        lpd_acc += cell.lpd;
        ++lpd_n;
      }
    }
    if (mape_n > 0) eval.mean_mape = mape_acc / mape_n;
    if (lpd_n > 0) eval.test_lpd = lpd_acc;
    if (external_extras > 0) {
      int used = 0;
      for (const auto& fold : plan.folds) {
        for (const auto& d : model.external.dates) {
          if (d >= fold.test_start && d <= fold.test_end_inclusive) ++used;
        }
      }
      if (used < external_extras) {
        eval.warnings.push_back(
            "ignored " + std::to_string(external_extras - used) +
            " imported rows outside the evaluation folds");
      }
    }

    if (opts.compute_loo) {
      try {
        if (last_pool_draws) {
          const LooInputs in =
              pooling_loo_inputs(*last_pool_draws, model.spec, last_train,
                                 last_pool_fit->standardization);
          const PsisResult psis = psis_loo(in.loglik);
          eval.loo_elpd = psis.elpd;
          eval.pareto_k_max = psis.k_max();
          eval.pareto_flagged = psis.flagged_count();
          eval.loo_points = static_cast<int>(psis.per_point.size());
          eval.warnings.insert(eval.warnings.end(), psis.warnings.begin(),
                               psis.warnings.end());
        } else if (last_fourier_draws) {
          const LooInputs in =
              fourier_loo_inputs(*last_fourier_draws, model.fourier,
                                 last_train, last_fourier_fit->standardization);
          const PsisResult psis = psis_loo(in.loglik);
          eval.loo_elpd = psis.elpd;
          eval.pareto_k_max = psis.k_max();
          eval.pareto_flagged = psis.flagged_count();
          eval.loo_points = static_cast<int>(psis.per_point.size());
          eval.warnings.insert(eval.warnings.end(), psis.warnings.begin(),
                               psis.warnings.end());
        }
      } catch (const Error& e) {
        eval.warnings.push_back(std::string("loo failed: ") + e.what());
      }
    }

    report.models.push_back(std::move(eval));
  }
  return report;
}

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void csv_row(std::string& out, const std::string& dataset,
             const std::string& model, const std::string& fold,
             const std::string& metric, const std::string& value) {
  out += csv_quote(dataset) + "," + csv_quote(model) + "," + fold + "," +
         metric + "," + value + "\n";
}

}  // namespace

std::string report_to_csv(const EvaluationReport& report) {
  std::string out = "dataset,model,fold,metric,value\n";
  for (const auto& m : report.models) {
    for (const auto& cell : m.cells) {
      const std::string fold = std::to_string(cell.fold);
      if (!cell.error.empty()) {
        csv_row(out, report.dataset, m.model, fold, "error",
                csv_quote(cell.error));
        continue;
      }
      csv_row(out, report.dataset, m.model, fold, "mape",
              format_double(cell.mape));
      if (std::isfinite(cell.lpd)) {
        csv_row(out, report.dataset, m.model, fold, "lpd",
                format_double(cell.lpd));
      }
    }
    csv_row(out, report.dataset, m.model, "all", "mean_mape",
            format_double(m.mean_mape));
    if (std::isfinite(m.test_lpd)) {
      csv_row(out, report.dataset, m.model, "all", "test_lpd",
              format_double(m.test_lpd));
    }
    if (std::isfinite(m.loo_elpd)) {
      csv_row(out, report.dataset, m.model, "all", "loo_elpd",
              format_double(m.loo_elpd));
      csv_row(out, report.dataset, m.model, "all", "pareto_k_max",
              format_double(m.pareto_k_max));
      csv_row(out, report.dataset, m.model, "all", "pareto_flagged",
              std::to_string(m.pareto_flagged));
    }
  }
  return out;
}

namespace {

std::string fixed(double x, int digits = 2) {
  if (!std::isfinite(x)) return std::isnan(x) ? "." : (x > 0 ? "inf" : "-inf");
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, x);
  return buf;
}

void append_table(std::ostringstream& os,
                  const std::vector<std::string>& headers,
                  const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths(headers.size());
  for (std::size_t c = 0; c < headers.size(); ++c) widths[c] = headers[c].size();
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      os << (c == 0 ? "" : "  ");
      os << row[c];
      os << std::string(widths[c] - row[c].size(), ' ');
    }
    os << "\n";
  };
  emit(headers);
  for (const auto& row : rows) emit(row);
}

}  // namespace

std::string report_to_table(const EvaluationReport& report) {
  std::ostringstream os;
  os << "dataset: " << report.dataset << "   folds: " << report.plan.folds.size()
     << " x " << report.plan.horizon_days << "d\n";

  std::vector<std::string> headers = {"metric"};
  for (const auto& m : report.models) headers.push_back(m.model);

  auto metric_row = [&](const std::string& label, auto getter) {
    std::vector<std::string> row = {label};
    for (const auto& m : report.models) row.push_back(getter(m));
    return row;
  };

  std::vector<std::vector<std::string>> rows;
  rows.push_back(metric_row("mean_mape", [](const ModelEval& m) {
    return fixed(m.mean_mape);
  }));
  rows.push_back(metric_row("test_lpd", [](const ModelEval& m) {
    return fixed(m.test_lpd);
  }));
  rows.push_back(metric_row("loo_elpd", [](const ModelEval& m) {
    return fixed(m.loo_elpd);
  }));
  rows.push_back(metric_row("pareto_k_max", [](const ModelEval& m) {
    return fixed(m.pareto_k_max, 3);
  }));
  rows.push_back(metric_row("pareto>0.7", [](const ModelEval& m) {
    return std::isfinite(m.pareto_k_max)
               ? std::to_string(m.pareto_flagged) + "/" +
                     std::to_string(m.loo_points)
               : std::string(".");
  }));
  rows.push_back(metric_row("failed_folds", [](const ModelEval& m) {
    int failures = 0;
    for (const auto& c : m.cells) {
      if (!c.error.empty()) ++failures;
    }
    return std::to_string(failures);
  }));
  append_table(os, headers, rows);

  for (const auto& m : report.models) {
    for (const auto& cell : m.cells) {
      if (!cell.error.empty()) {
        os << "note: " << m.model << " fold " << cell.fold << ": "
           << cell.error << "\n";
      }
    }
    for (const auto& w : m.warnings) {
      os << "note: " << m.model << ": " << w << "\n";
    }
  }
  return os.str();
}

std::string comparison_table(const std::vector<EvaluationReport>& reports) {
  std::ostringstream os;
  std::vector<std::string> model_names;
  for (const auto& r : reports) {
    for (const auto& m : r.models) {
      if (std::find(model_names.begin(), model_names.end(), m.model) ==
          model_names.end()) {
        model_names.push_back(m.model);
      }
    }
  }
  std::vector<std::string> headers = {"dataset (mean MAPE)"};
  headers.insert(headers.end(), model_names.begin(), model_names.end());
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : reports) {
    std::vector<std::string> row = {r.dataset};
    for (const auto& name : model_names) {
      std::string cell = ".";
      for (const auto& m : r.models) {
        if (m.model == name) {
          cell = fixed(m.mean_mape);
          break;
        }
      }
      row.push_back(cell);
    }
    rows.push_back(std::move(row));
  }
  append_table(os, headers, rows);
  return os.str();
}

}  // namespace poolcast
