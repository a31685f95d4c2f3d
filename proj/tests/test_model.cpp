#include <doctest.h>

#include <algorithm>
#include <random>

#include "poolcast/errors.hpp"
#include "poolcast/model.hpp"
#include "test_support.hpp"

using namespace poolcast;
using namespace testsupport;

TEST_CASE("standardize uses the population sd") {
  TimeSeries s = make_series(
      "tiny", {{2018, 1, 1}, {2018, 1, 2}, {2018, 1, 3}},
      (Eigen::VectorXd(3) << 10.0, 20.0, 30.0).finished());
  auto [y_std, info] = standardize(s);
  const double expected = std::sqrt(3.0 / 2.0);  // 10 / population sd
  CHECK(y_std(0) == doctest::Approx(-expected).epsilon(1e-12));
  CHECK(y_std(1) == doctest::Approx(0.0));
  CHECK(y_std(2) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(info.y_mean == doctest::Approx(20.0));

  const Eigen::VectorXd back = destandardize(y_std, info);
  for (Eigen::Index i = 0; i < 3; ++i) {
    CHECK(back(i) == doctest::Approx(s.values(i)).epsilon(1e-12));
  }
}

TEST_CASE("standardize rejects constant series") {
  TimeSeries s = make_series("flat", {{2018, 1, 1}, {2018, 1, 2}},
                             Eigen::VectorXd::Constant(2, 4.0));
  CHECK_THROWS_AS(standardize(s), DataError);
}

TEST_CASE("series validation") {
  CHECK_THROWS_AS(make_series("short", {{2018, 1, 1}},
                              Eigen::VectorXd::Constant(1, 1.0)),
                  DataError);
  CHECK_THROWS_AS(
      make_series("dup", {{2018, 1, 2}, {2018, 1, 2}},
                  (Eigen::VectorXd(2) << 1.0, 2.0).finished()),
      DataError);
  Eigen::VectorXd bad(2);
  bad << 1.0, std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(make_series("nan", {{2018, 1, 1}, {2018, 1, 2}}, bad),
                  DataError);
}

TEST_CASE("predict_mean: complete, mixed, and the degenerate mixture") {
  // Complete: k = 2, m = 1, t = [3] -> [7].
  {
    ModelSpec spec = complete_spec();
    ParameterSet p = make_parameters(spec);
    p.k[0](0) = 2.0;
    p.m[0](0) = 1.0;
    PoolingAssignment pooling;
    pooling.indices.resize(1, 0);
    const Eigen::VectorXd t = Eigen::VectorXd::Constant(1, 3.0);
    CHECK(predict_mean(p, t, pooling, spec)(0) == doctest::Approx(7.0));
  }

  // Mixed D = 2, pooling row (0, 0), theta = (.5, .5): (.5*1+.5*3)*2 + .5*2.
  {
    ModelSpec spec = mixed_spec({week_seasonality(), month_seasonality()});
    ParameterSet p = make_parameters(spec);
    p.k[0](0) = 1.0;
    p.k[1](0) = 3.0;
    p.m[0](0) = 0.0;
    p.m[1](0) = 2.0;
    p.theta << 0.5, 0.5;
    const std::vector<CalendarDate> dates = {{2018, 1, 1}};  // Monday the 1st
    const PoolingAssignment pooling = model_pooling(spec, dates);
    const Eigen::VectorXd t = Eigen::VectorXd::Constant(1, 2.0);
    CHECK(predict_mean(p, t, pooling, spec)(0) == doctest::Approx(5.0));
  }

  // theta = (1, 0) reproduces the partial model on dimension 0.
  {
    ModelSpec mixed = mixed_spec({week_seasonality(), month_seasonality()});
    ModelSpec partial = partial_spec(week_seasonality());
    const auto inst = random_instance(mixed, 90, 17);
    ParameterSet pm = inst.params;
    pm.theta << 1.0, 0.0;
    ParameterSet pp = make_parameters(partial);
    pp.k[0] = pm.k[0];
    pp.m[0] = pm.m[0];
    pp.sigma_obs = pm.sigma_obs;
    const auto dates = date_range({2017, 1, 1}, {2017, 3, 31});
    const Eigen::VectorXd t =
        scaled_time(dates, TimeScale{{2017, 1, 1}, 89});
    const Eigen::VectorXd a =
        predict_mean(pm, t, model_pooling(mixed, dates), mixed);
    const Eigen::VectorXd b =
        predict_mean(pp, t, model_pooling(partial, dates), partial);
    CHECK((a - b).lpNorm<Eigen::Infinity>() == doctest::Approx(0.0));
  }
}

TEST_CASE("predict_mean rejects out-of-range pooling indices") {
  ModelSpec spec = partial_spec(week_seasonality());
  ParameterSet p = make_parameters(spec);
  PoolingAssignment pooling;
  pooling.dims = {week_seasonality()};
  pooling.indices.resize(1, 1);
  pooling.indices(0, 0) = 9;
  const Eigen::VectorXd t = Eigen::VectorXd::Zero(1);
  CHECK_THROWS_AS(predict_mean(p, t, pooling, spec), IndexError);
}

TEST_CASE("predict_mean is additive in (k, m) and affine in theta") {
  ModelSpec spec = mixed_spec({week_seasonality(), month_seasonality()});
  const auto a = random_instance(spec, 120, 3);
  auto b = random_instance(spec, 120, 4);
  b.params.theta = a.params.theta;

  ParameterSet sum = a.params;
  for (std::size_t d = 0; d < sum.k.size(); ++d) {
    sum.k[d] += b.params.k[d];
    sum.m[d] += b.params.m[d];
  }
  const Eigen::VectorXd lhs = predict_mean(sum, a.t, a.pooling, spec);
  const Eigen::VectorXd rhs = predict_mean(a.params, a.t, a.pooling, spec) +
                              predict_mean(b.params, a.t, a.pooling, spec);
  CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-12);

  ParameterSet t1 = a.params, t2 = a.params, mid = a.params;
  t1.theta << 1.0, 0.0;
  t2.theta << 0.0, 1.0;
  mid.theta << 0.5, 0.5;
  const Eigen::VectorXd blend =
      0.5 * predict_mean(t1, a.t, a.pooling, spec) +
      0.5 * predict_mean(t2, a.t, a.pooling, spec);
  CHECK((predict_mean(mid, a.t, a.pooling, spec) - blend)
            .lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("parameter sets equal after simplex normalization predict alike") {
  ModelSpec spec = mixed_spec({week_seasonality(), month_seasonality()});
  const auto inst = random_instance(spec, 60, 5);
  ParameterSet a = inst.params;
  a.theta << 0.25, 0.75;
  ParameterSet b = a;
  Eigen::VectorXd raw(2);
  raw << 1.0, 3.0;
  b.theta = raw / raw.sum();
  REQUIRE(a.theta == b.theta);
  const Eigen::VectorXd pa = predict_mean(a, inst.t, inst.pooling, spec);
  const Eigen::VectorXd pb = predict_mean(b, inst.t, inst.pooling, spec);
  CHECK(pa == pb);
}

TEST_CASE("log_prior matches the brute-force oracle and frozen spots") {
  // Frozen closed-form values.
  CHECK(log_normal_pdf(0.0, 0.0, 5.0) ==
        doctest::Approx(ref_log_normal(0.0, 0.0, 5.0)).epsilon(1e-12));
  CHECK(log_normal_pdf(0.0, 0.0, 5.0) == doctest::Approx(-2.5284).epsilon(1e-4));
  CHECK(log_exponential_pdf(1.0, 1.0) == doctest::Approx(-1.0));
  CHECK(log_normal_pdf(0.5, 0.0, 0.5) ==
        doctest::Approx(-0.7257913526447274).epsilon(1e-12));

  for (unsigned seed = 0; seed < 5; ++seed) {
    for (const ModelSpec& spec :
         {complete_spec(), partial_spec(week_seasonality()),
          partial_spec(month_seasonality()),
          mixed_spec({week_seasonality(), month_seasonality()})}) {
      const auto inst = random_instance(spec, 30, 100 + seed);
      CHECK(log_prior(inst.params, spec) ==
            doctest::Approx(ref_log_prior(inst.params, spec)).epsilon(1e-12));
    }
  }
}

TEST_CASE("log_prior rejects non-positive scales") {
  ModelSpec spec = partial_spec(week_seasonality());
  ParameterSet p = make_parameters(spec);
  p.k_sigma = -1.0;
  CHECK_THROWS_AS(log_prior(p, spec), DomainError);
  p.k_sigma = 1.0;
  p.sigma_obs = 0.0;
  CHECK_THROWS_AS(log_prior(p, spec), DomainError);
}

TEST_CASE("log_likelihood agrees with the elementwise density oracle") {
  // Single point at its mode.
  {
    ModelSpec spec = complete_spec();
    ParameterSet p = make_parameters(spec);
    p.k[0](0) = 0.0;
    p.m[0](0) = 0.0;
    p.sigma_obs = 1.0;
    PoolingAssignment pooling;
    pooling.indices.resize(1, 0);
    const Eigen::VectorXd t = Eigen::VectorXd::Zero(1);
    const Eigen::VectorXd y = Eigen::VectorXd::Zero(1);
    CHECK(log_likelihood(p, y, t, pooling, spec) ==
          doctest::Approx(-0.9189385332046727).epsilon(1e-12));

    PoolingAssignment pooling2;
    pooling2.indices.resize(2, 0);
    const Eigen::VectorXd t2 = Eigen::VectorXd::Zero(2);
    const Eigen::VectorXd y2 = Eigen::VectorXd::Zero(2);
    CHECK(log_likelihood(p, y2, t2, pooling2, spec) ==
          doctest::Approx(-1.8378770664093453).epsilon(1e-12));
  }

  for (unsigned seed = 0; seed < 8; ++seed) {
    const auto inst = random_instance(
        mixed_spec({week_seasonality(), month_seasonality()}), 45, 40 + seed);
    const Eigen::VectorXd mean =
        predict_mean(inst.params, inst.t, inst.pooling, inst.spec);
    const double expected =
        ref_gaussian_loglik(inst.y, mean, inst.params.sigma_obs);
    CHECK(log_likelihood(inst.params, inst.y, inst.t, inst.pooling,
                         inst.spec) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("log_posterior = prior + likelihood, permutation invariant") {
  const auto inst =
      random_instance(partial_spec(week_seasonality()), 60, 11);
  const double lp = log_posterior(inst.params, inst.y, inst.t, inst.pooling,
                                  inst.spec);
  CHECK(lp == log_prior(inst.params, inst.spec) +
                  log_likelihood(inst.params, inst.y, inst.t, inst.pooling,
                                 inst.spec));

  // Shuffle observation order (rows of y, t, pooling together).
  std::vector<Eigen::Index> order(static_cast<std::size_t>(inst.y.size()));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), std::mt19937_64(7));
  Instance shuffled = inst;
  for (std::size_t i = 0; i < order.size(); ++i) {
    shuffled.y(static_cast<Eigen::Index>(i)) = inst.y(order[i]);
    shuffled.t(static_cast<Eigen::Index>(i)) = inst.t(order[i]);
    shuffled.pooling.indices.row(static_cast<Eigen::Index>(i)) =
        inst.pooling.indices.row(order[i]);
  }
  const double lp2 = log_posterior(shuffled.params, shuffled.y, shuffled.t,
                                   shuffled.pooling, shuffled.spec);
  CHECK(lp2 == doctest::Approx(lp).epsilon(1e-12));
}

TEST_CASE("log_posterior falls as sigma_obs grows past the optimum") {
  auto inst = random_instance(complete_spec(), 50, 21);
  double prev = log_posterior(inst.params, inst.y, inst.t, inst.pooling,
                              inst.spec);
  bool decreasing_tail = true;
  inst.params.sigma_obs = 5.0;  // well above any sensible residual scale
  for (int i = 0; i < 10; ++i) {
    inst.params.sigma_obs *= 1.5;
    const double lp = log_posterior(inst.params, inst.y, inst.t, inst.pooling,
                                    inst.spec);
    if (i > 0 && lp >= prev) decreasing_tail = false;
    prev = lp;
  }
  CHECK(decreasing_tail);
}

TEST_CASE("pointwise log likelihood sums to the total") {
  for (unsigned seed = 0; seed < 4; ++seed) {
    const auto inst = random_instance(
        mixed_spec({week_seasonality(), month_seasonality()}), 75, 60 + seed);
    const Eigen::VectorXd pw = pointwise_log_lik(inst.params, inst.y, inst.t,
                                                 inst.pooling, inst.spec);
    const double total = log_likelihood(inst.params, inst.y, inst.t,
                                        inst.pooling, inst.spec);
    CHECK(pw.sum() == doctest::Approx(total).epsilon(1e-10));

    const Eigen::VectorXd mean =
        predict_mean(inst.params, inst.t, inst.pooling, inst.spec);
    for (Eigen::Index i = 0; i < 5; ++i) {
      CHECK(pw(i) == doctest::Approx(ref_log_normal(
                         inst.y(i), mean(i), inst.params.sigma_obs))
                         .epsilon(1e-12));
    }
  }
}

TEST_CASE("identical observations with identical pooling get equal entries") {
  ModelSpec spec = partial_spec(week_seasonality());
  const auto inst = random_instance(spec, 30, 77);
  Eigen::VectorXd y = inst.y;
  Eigen::VectorXd t = inst.t;
  PoolingAssignment pooling = inst.pooling;
  y(3) = y(10);
  t(3) = t(10);
  pooling.indices(3, 0) = pooling.indices(10, 0);
  const Eigen::VectorXd pw =
      pointwise_log_lik(inst.params, y, t, pooling, spec);
  CHECK(pw(3) == pw(10));
}

TEST_CASE("analytic gradient matches central finite differences") {
  for (const ModelSpec& spec :
       {complete_spec(), partial_spec(week_seasonality()),
        partial_spec(month_seasonality()),
        mixed_spec({week_seasonality(), month_seasonality()})}) {
    for (unsigned seed = 0; seed < 3; ++seed) {
      const auto inst = random_instance(spec, 60, 500 + seed);
      const ParameterSet analytic = grad_constrained(
          inst.params, inst.y, inst.t, inst.pooling, inst.spec);
      const ParameterSet fd = fd_grad_constrained(inst);
      const bool check_extras = spec.kind != ModelKind::Complete;
      CHECK(max_rel_error(analytic, fd, check_extras) < 1e-6);
    }
  }
}

TEST_CASE("gradient vanishes at a constructed noise-free optimum") {
  ModelSpec spec = complete_spec();
  ParameterSet p = make_parameters(spec);
  p.k[0](0) = 0.0;
  p.m[0](0) = 0.0;
  p.sigma_obs = 0.7;
  const auto dates = date_range({2017, 1, 1}, {2017, 2, 19});
  const Eigen::VectorXd t = scaled_time(dates, TimeScale{{2017, 1, 1}, 49});
  const Eigen::VectorXd y = Eigen::VectorXd::Zero(t.size());
  PoolingAssignment pooling = model_pooling(spec, dates);
  const ParameterSet g = grad_constrained(p, y, t, pooling, spec);
  CHECK(std::abs(g.k[0](0)) <= 1e-8);
  CHECK(std::abs(g.m[0](0)) <= 1e-8);
}

TEST_CASE("empty subcategories feel only the prior pull") {
  ModelSpec spec = partial_spec(week_seasonality());
  // Monday..Saturday only; Sunday's subcategory gets no data.
  std::vector<CalendarDate> dates;
  CalendarDate d{2017, 1, 2};  // a Monday
  for (int i = 0; i < 60; ++i) {
    if (day_of_week(d) != 6) dates.push_back(d);
    d = add_days(d, 1);
  }
  const auto pooling = model_pooling(spec, dates);
  const Eigen::VectorXd t =
      scaled_time(dates, TimeScale{{2017, 1, 2}, 59});
  auto inst = random_instance(spec, 10, 901);

  Eigen::VectorXd y(t.size());
  std::mt19937_64 rng(31);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = normal(rng);

  const ParameterSet g =
      grad_constrained(inst.params, y, t, pooling, spec);
  const double expected =
      -(inst.params.k[0](6) - inst.params.k_mu) /
      (inst.params.k_sigma * inst.params.k_sigma);
  CHECK(g.k[0](6) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("mixed with one dimension equals partial everywhere") {
  ModelSpec partial = partial_spec(week_seasonality());
  ModelSpec mixed = mixed_spec({week_seasonality()});
  const auto inst = random_instance(partial, 80, 123);
  ParameterSet pm = inst.params;  // same shapes: D = 1, theta = [1]

  const double lp_partial = log_posterior(inst.params, inst.y, inst.t,
                                          inst.pooling, partial);
  const double lp_mixed =
      log_posterior(pm, inst.y, inst.t, inst.pooling, mixed);
  CHECK(lp_partial == lp_mixed);

  const Eigen::VectorXd pred_p =
      predict_mean(inst.params, inst.t, inst.pooling, partial);
  const Eigen::VectorXd pred_m = predict_mean(pm, inst.t, inst.pooling, mixed);
  CHECK(pred_p == pred_m);

  const ParameterSet ga = grad_constrained(inst.params, inst.y, inst.t,
                                           inst.pooling, partial);
  const ParameterSet gb =
      grad_constrained(pm, inst.y, inst.t, inst.pooling, mixed);
  CHECK(max_rel_error(ga, gb, false) == 0.0);
  CHECK(ga.k_mu == gb.k_mu);
  CHECK(ga.k_sigma == gb.k_sigma);
}

TEST_CASE("likelihood decreases as any single residual grows") {
  auto inst = random_instance(partial_spec(week_seasonality()), 40, 321);
  const Eigen::VectorXd mean =
      predict_mean(inst.params, inst.t, inst.pooling, inst.spec);
  inst.y(7) = mean(7);  // start the walk at the mode of observation 7
  double prev = log_likelihood(inst.params, inst.y, inst.t, inst.pooling,
                               inst.spec);
  for (int step = 1; step <= 5; ++step) {
    inst.y(7) += 0.5;
    const double cur = log_likelihood(inst.params, inst.y, inst.t,
                                      inst.pooling, inst.spec);
    CHECK(cur < prev);
    prev = cur;
  }
}
