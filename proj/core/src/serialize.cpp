#include "poolcast/serialize.hpp"

#include <cstdint>
#include <cstdio>

#include <json.hpp>

#include "poolcast/csv.hpp"
#include "poolcast/errors.hpp"

namespace poolcast {

namespace {

using nlohmann::json;

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

std::string kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Complete:
      return "complete";
    case ModelKind::Partial:
      return "partial";
    case ModelKind::Mixed:
      return "mixed";
  }
  return "complete";
}

ModelKind kind_from_name(const std::string& name) {
  if (name == "complete") return ModelKind::Complete;
  if (name == "partial") return ModelKind::Partial;
  if (name == "mixed") return ModelKind::Mixed;
  throw ParseError("unknown model kind '" + name + "'");
}

}  // namespace

std::string fit_to_json(const SavedFit& fit) {
  json j;
  j["model"]["kind"] = kind_name(fit.spec.kind);
  json dims = json::array();
  for (const auto& d : fit.spec.dims) dims.push_back(d.name());
  j["model"]["dims"] = dims;
  j["model"]["standardize"] = fit.spec.standardize;
  j["model"]["priors"] = {{"trend_loc_scale", fit.spec.priors.trend_loc_scale},
                          {"offset_loc_scale", fit.spec.priors.offset_loc_scale},
                          {"hyper_sd_rate", fit.spec.priors.hyper_sd_rate},
                          {"noise_sd_scale", fit.spec.priors.noise_sd_scale}};

  const MapResult& r = fit.result;
  json params;
  params["k_mu"] = r.params.k_mu;
  params["k_sigma"] = r.params.k_sigma;
  params["m_mu"] = r.params.m_mu;
  params["m_sigma"] = r.params.m_sigma;
  params["sigma_obs"] = r.params.sigma_obs;
  params["theta"] = vector_to_json(r.params.theta);
  json k = json::array(), m = json::array();
  for (const auto& block : r.params.k) k.push_back(vector_to_json(block));
  for (const auto& block : r.params.m) m.push_back(vector_to_json(block));
  params["k"] = k;
  params["m"] = m;
  j["params"] = params;

  j["log_post"] = r.log_post;
  j["objective"] = r.objective;
  j["unconstrained_opt"] = vector_to_json(r.unconstrained_opt);
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["grad_norm"] = r.grad_norm;
  j["standardization"] = {
      {"y_mean", r.standardization.y_mean},
      {"y_sd", r.standardization.y_sd},
      {"origin", format_date(r.standardization.time_scale.origin)},
      {"span_days", r.standardization.time_scale.span_days}};
  return j.dump(2) + "\n";
}

SavedFit fit_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("fit json: ") + e.what());
  }
  try {
    SavedFit fit;
    fit.spec.kind = kind_from_name(j.at("model").at("kind").get<std::string>());
    for (const auto& d : j.at("model").at("dims")) {
      fit.spec.dims.push_back(parse_seasonality(d.get<std::string>()));
    }
    fit.spec.standardize = j.at("model").at("standardize").get<bool>();
    const auto& priors = j.at("model").at("priors");
    fit.spec.priors.trend_loc_scale = priors.at("trend_loc_scale").get<double>();
    fit.spec.priors.offset_loc_scale =
        priors.at("offset_loc_scale").get<double>();
    fit.spec.priors.hyper_sd_rate = priors.at("hyper_sd_rate").get<double>();
    fit.spec.priors.noise_sd_scale = priors.at("noise_sd_scale").get<double>();
    validate(fit.spec);

    MapResult& r = fit.result;
    const auto& params = j.at("params");
    r.params.k_mu = params.at("k_mu").get<double>();
    r.params.k_sigma = params.at("k_sigma").get<double>();
    r.params.m_mu = params.at("m_mu").get<double>();
    r.params.m_sigma = params.at("m_sigma").get<double>();
    r.params.sigma_obs = params.at("sigma_obs").get<double>();
    r.params.theta = vector_from_json(params.at("theta"));
    for (const auto& block : params.at("k")) {
      r.params.k.push_back(vector_from_json(block));
    }
    for (const auto& block : params.at("m")) {
      r.params.m.push_back(vector_from_json(block));
    }
    validate(r.params, fit.spec);

    r.log_post = j.at("log_post").get<double>();
    r.objective = j.at("objective").get<double>();
    r.unconstrained_opt = vector_from_json(j.at("unconstrained_opt"));
    r.iterations = j.at("iterations").get<int>();
    r.converged = j.at("converged").get<bool>();
    r.grad_norm = j.at("grad_norm").get<double>();
    r.standardization.y_mean =
        j.at("standardization").at("y_mean").get<double>();
    r.standardization.y_sd = j.at("standardization").at("y_sd").get<double>();
    r.standardization.time_scale.origin =
        parse_date(j.at("standardization").at("origin").get<std::string>());
    r.standardization.time_scale.span_days =
        j.at("standardization").at("span_days").get<std::int64_t>();
    return fit;
  } catch (const json::exception& e) {
    throw ParseError(std::string("fit json: ") + e.what());
  }
}

std::string trace_to_csv(const std::vector<TraceRow>& trace) {
  std::string out = "restart,iteration,objective,grad_norm\n";
  for (const auto& row : trace) {
    out += std::to_string(row.restart) + "," + std::to_string(row.iteration) +
           "," + format_double(row.objective) + "," +
           format_double(row.grad_norm) + "\n";
  }
  return out;
}

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace poolcast
