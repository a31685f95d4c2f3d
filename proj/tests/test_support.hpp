#pragma once

// Shared helpers and independent oracles for the test suites. Everything
// here recomputes results from first principles so the checks stay
// independent of the library's own code paths.

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "poolcast/calendar.hpp"
#include "poolcast/model.hpp"
#include "poolcast/timeseries.hpp"

namespace testsupport {

inline constexpr double kPi = 3.14159265358979323846;

// Reference scalar densities.
inline double ref_log_normal(double x, double mu, double sd) {
  return -0.5 * std::log(2.0 * kPi * sd * sd) -
         (x - mu) * (x - mu) / (2.0 * sd * sd);
}

inline double ref_log_exponential(double x, double rate) {
  return std::log(rate) - rate * x;
}

// Element-by-element likelihood oracle.
inline double ref_gaussian_loglik(const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& mean, double sd) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    acc += ref_log_normal(y(i), mean(i), sd);
  }
  return acc;
}

// Brute-force prior oracle mirroring the generative statements.
inline double ref_log_prior(const poolcast::ParameterSet& p,
                            const poolcast::ModelSpec& spec) {
  const auto& pc = spec.priors;
  if (spec.kind == poolcast::ModelKind::Complete) {
    return ref_log_normal(p.k[0](0), 0.0, pc.trend_loc_scale) +
           ref_log_normal(p.m[0](0), 0.0, pc.offset_loc_scale);
  }
  double lp = ref_log_normal(p.k_mu, 0.0, pc.trend_loc_scale) +
              ref_log_normal(p.m_mu, 0.0, pc.offset_loc_scale) +
              ref_log_exponential(p.k_sigma, pc.hyper_sd_rate) +
              ref_log_exponential(p.m_sigma, pc.hyper_sd_rate) +
              ref_log_normal(p.sigma_obs, 0.0, pc.noise_sd_scale);
  for (std::size_t d = 0; d < p.k.size(); ++d) {
    for (Eigen::Index j = 0; j < p.k[d].size(); ++j) {
      lp += ref_log_normal(p.k[d](j), p.k_mu, p.k_sigma);
      lp += ref_log_normal(p.m[d](j), p.m_mu, p.m_sigma);
    }
  }
  return lp;
}

struct Instance {
  poolcast::ModelSpec spec;
  poolcast::ParameterSet params;
  Eigen::VectorXd y;
  Eigen::VectorXd t;
  poolcast::PoolingAssignment pooling;
};

// Seeded random instance of any model kind over real calendar dates.
inline Instance random_instance(const poolcast::ModelSpec& spec, int days,
                                unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Instance inst;
  inst.spec = spec;
  const auto dates =
      poolcast::date_range({2017, 1, 1},
                           poolcast::add_days({2017, 1, 1}, days - 1));
  inst.pooling = poolcast::model_pooling(spec, dates);
  inst.t = poolcast::scaled_time(
      dates, poolcast::TimeScale{{2017, 1, 1},
                                 std::max(1, days - 1)});

  inst.params = poolcast::make_parameters(spec);
  if (spec.kind != poolcast::ModelKind::Complete) {
    inst.params.k_mu = normal(rng);
    inst.params.m_mu = normal(rng);
    inst.params.k_sigma = 0.5 + unif(rng);
    inst.params.m_sigma = 0.5 + unif(rng);
  }
  for (auto& block : inst.params.k) {
    for (Eigen::Index j = 0; j < block.size(); ++j) block(j) = normal(rng);
  }
  for (auto& block : inst.params.m) {
    for (Eigen::Index j = 0; j < block.size(); ++j) block(j) = normal(rng);
  }
  const Eigen::Index D = inst.params.theta.size();
  Eigen::VectorXd w(D);
  for (Eigen::Index d = 0; d < D; ++d) w(d) = 0.2 + unif(rng);
  inst.params.theta = w / w.sum();
  inst.params.sigma_obs = 0.4 + unif(rng);

  inst.y.resize(inst.t.size());
  for (Eigen::Index i = 0; i < inst.y.size(); ++i) inst.y(i) = normal(rng);
  return inst;
}

// Central finite differences of log_posterior over every constrained
// coordinate (theta perturbed as a free vector, matching the contract).
inline poolcast::ParameterSet fd_grad_constrained(const Instance& inst,
                                                  double h = 1e-5) {
  using poolcast::log_posterior;
  poolcast::ParameterSet g = poolcast::make_parameters(inst.spec);
  auto eval = [&](const poolcast::ParameterSet& p) {
    return log_posterior(p, inst.y, inst.t, inst.pooling, inst.spec);
  };
  auto central = [&](double* coord) {
    const double save = *coord;
    *coord = save + h;
    const double up = eval(inst.params);
    *coord = save - h;
    const double down = eval(inst.params);
    *coord = save;
    return (up - down) / (2.0 * h);
  };
  auto& p = const_cast<poolcast::ParameterSet&>(inst.params);
  if (inst.spec.kind != poolcast::ModelKind::Complete) {
    g.k_mu = central(&p.k_mu);
    g.k_sigma = central(&p.k_sigma);
    g.m_mu = central(&p.m_mu);
    g.m_sigma = central(&p.m_sigma);
    for (Eigen::Index d = 0; d < p.theta.size(); ++d) {
      g.theta(d) = central(&p.theta(d));
    }
  }
  for (std::size_t d = 0; d < p.k.size(); ++d) {
    for (Eigen::Index j = 0; j < p.k[d].size(); ++j) {
      g.k[d](j) = central(&p.k[d](j));
      g.m[d](j) = central(&p.m[d](j));
    }
  }
  g.sigma_obs = central(&p.sigma_obs);
  return g;
}

// Worst relative disagreement between two parameter-shaped gradients.
inline double max_rel_error(const poolcast::ParameterSet& a,
                            const poolcast::ParameterSet& b,
                            bool hyper_and_theta) {
  double worst = 0.0;
  auto upd = [&](double x, double y) {
    const double scale = std::max({std::abs(x), std::abs(y), 1.0});
    worst = std::max(worst, std::abs(x - y) / scale);
  };
  if (hyper_and_theta) {
    upd(a.k_mu, b.k_mu);
    upd(a.k_sigma, b.k_sigma);
    upd(a.m_mu, b.m_mu);
    upd(a.m_sigma, b.m_sigma);
    for (Eigen::Index d = 0; d < a.theta.size(); ++d) {
      upd(a.theta(d), b.theta(d));
    }
  }
  for (std::size_t d = 0; d < a.k.size(); ++d) {
    for (Eigen::Index j = 0; j < a.k[d].size(); ++j) {
      upd(a.k[d](j), b.k[d](j));
      upd(a.m[d](j), b.m[d](j));
    }
  }
  upd(a.sigma_obs, b.sigma_obs);
  return worst;
}

// Ridge fixed point: the complete model's MAP given its flat noise prior,
// alternating the closed-form penalized least squares with the noise
// stationarity sigma^2 = RSS / (T - 1).
inline Eigen::Vector2d ridge_map_oracle(const Eigen::VectorXd& y,
                                        const Eigen::VectorXd& t,
                                        double loc_scale) {
  Eigen::MatrixXd X(t.size(), 2);
  X.col(0) = t;
  X.col(1) = Eigen::VectorXd::Ones(t.size());
  const Eigen::Matrix2d xtx = X.transpose() * X;
  const Eigen::Vector2d xty = X.transpose() * y;
  double sigma2 = 1.0;
  Eigen::Vector2d beta = Eigen::Vector2d::Zero();
  for (int it = 0; it < 200; ++it) {
    const double lambda = sigma2 / (loc_scale * loc_scale);
    beta = (xtx + lambda * Eigen::Matrix2d::Identity()).ldlt().solve(xty);
    const double rss = (y - X * beta).squaredNorm();
    const double next = rss / (static_cast<double>(t.size()) - 1.0);
    if (std::abs(next - sigma2) < 1e-15 * (1.0 + sigma2)) {
      sigma2 = next;
      break;
    }
    sigma2 = next;
  }
  return beta;
}

}  // namespace testsupport
