#include "deming/fit_io.hpp"

#include <cmath>
#include <cstdio>

#include "deming/error.hpp"

namespace deming {

namespace {

Json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json pair_json(const std::pair<double, double>& p) {
  return Json::array({p.first, p.second});
}

template <class T>
T required(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) {
    throw Error(ErrorKind::parse,
                std::string("fit artifact is missing '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorKind::parse,
                std::string("fit artifact field '") + key + "' has wrong type");
  }
}

}  // namespace

std::string fingerprint_hex(std::uint64_t fp) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fp));
  return buf;
}

Json to_json(const DemingFit& fit) {
  Json j;
  j["beta0"] = fit.beta0;
  j["beta1"] = fit.beta1;
  j["sigma2"] = fit.sigma2;
  j["lambda"] = fit.lambda;
  j["cov_params"] = Json::array({Json::array({fit.cov_params.b00, fit.cov_params.b01}),
                                 Json::array({fit.cov_params.b01, fit.cov_params.b11})});
  j["loglik"] = fit.loglik ? Json(*fit.loglik) : Json(nullptr);
  j["residual_sd"] = fit.residual_sd;
  j["scenario"] = std::string(to_string(fit.scenario));
  j["n_iterations"] = fit.n_iterations;
  j["converged"] = fit.converged;
  j["boundary"] = fit.boundary;
  j["cov_method"] = std::string(to_string(fit.cov_method));
  j["mse"] = fit.mse ? Json(*fit.mse) : Json(nullptr);
  j["n"] = fit.n;
  j["dataset_fingerprint"] = fingerprint_hex(fit.fingerprint);
  return j;
}

DemingFit fit_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::parse, "fit artifact is not an object");
  DemingFit fit;
  fit.beta0 = required<double>(j, "beta0");
  fit.beta1 = required<double>(j, "beta1");
  fit.sigma2 = required<double>(j, "sigma2");
  fit.lambda = required<double>(j, "lambda");
  const auto cov = required<std::vector<std::vector<double>>>(j, "cov_params");
  if (cov.size() != 2 || cov[0].size() != 2 || cov[1].size() != 2) {
    throw Error(ErrorKind::parse, "cov_params must be a 2x2 array");
  }
  fit.cov_params = {cov[0][0], cov[0][1], cov[1][1]};
  if (j.contains("loglik") && !j.at("loglik").is_null()) {
    fit.loglik = j.at("loglik").get<double>();
  }
  fit.residual_sd = required<double>(j, "residual_sd");
  fit.scenario = parse_scenario(required<std::string>(j, "scenario"));
  fit.n_iterations = required<int>(j, "n_iterations");
  fit.converged = required<bool>(j, "converged");
  if (j.contains("boundary")) fit.boundary = j.at("boundary").get<bool>();
  if (j.contains("cov_method")) {
    fit.cov_method = parse_cov_method(j.at("cov_method").get<std::string>());
  }
  if (j.contains("mse") && !j.at("mse").is_null()) fit.mse = j.at("mse").get<double>();
  fit.n = required<std::size_t>(j, "n");
  if (j.contains("dataset_fingerprint")) {
    fit.fingerprint = std::stoull(j.at("dataset_fingerprint").get<std::string>(),
                                  nullptr, 16);
  }
  return fit;
}

Json to_json(const ScenarioDiagnostics& d) {
  Json j;
  j["r_value"] = number_or_null(d.r_value);
  j["r_infinite"] = std::isinf(d.r_value);
  j["selected"] = std::string(to_string(d.selected));
  j["auto"] = d.auto_selected;
  j["thresholds"] = Json::array({d.thresholds.low, d.thresholds.high});
  j["lrt_statistic"] = d.lrt_statistic ? Json(*d.lrt_statistic) : Json(nullptr);
  j["lrt_p_value"] = d.lrt_p_value ? Json(*d.lrt_p_value) : Json(nullptr);
  return j;
}

Json to_json(const BootstrapResult& b, bool include_replicates) {
  Json j;
  j["B"] = b.B;
  j["seed"] = b.seed;
  j["level"] = b.level;
  j["n_failed"] = b.n_failed;
  j["warning"] = b.warning;
  j["ci_beta0"] = pair_json(b.ci_beta0);
  j["ci_beta1"] = pair_json(b.ci_beta1);
  j["cov_params"] = Json::array({Json::array({b.cov_params.b00, b.cov_params.b01}),
                                 Json::array({b.cov_params.b01, b.cov_params.b11})});
  if (include_replicates) {
    Json reps = Json::array();
    for (const auto& r : b.replicates) reps.push_back(Json::array({r[0], r[1], r[2]}));
    j["replicates"] = std::move(reps);
  }
  return j;
}

Json to_json(const ErrorProfile& p) {
  Json j;
  j["mean_sd_x"] = p.mean_sd_x;
  j["mean_sd_y"] = p.mean_sd_y;
  j["median_sd_x"] = p.median_sd_x;
  j["median_sd_y"] = p.median_sd_y;
  return j;
}

ErrorProfile error_profile_from_json(const Json& j) {
  ErrorProfile p;
  p.mean_sd_x = required<double>(j, "mean_sd_x");
  p.mean_sd_y = required<double>(j, "mean_sd_y");
  p.median_sd_x = required<double>(j, "median_sd_x");
  p.median_sd_y = required<double>(j, "median_sd_y");
  return p;
}

Json to_json(const EstimatorCoverage& c) {
  Json j;
  j["coverage_beta0"] = c.coverage_beta0;
  j["coverage_beta1"] = c.coverage_beta1;
  j["mean_width_beta0"] = c.mean_width_beta0;
  j["mean_width_beta1"] = c.mean_width_beta1;
  j["mean_beta0"] = c.mean_beta0;
  j["mean_beta1"] = c.mean_beta1;
  j["n_ok"] = c.n_ok;
  j["n_failed"] = c.n_failed;
  return j;
}

Json to_json(const CoverageReport& r) {
  Json j;
  j["deming"] = to_json(r.deming);
  j["wls"] = r.wls ? to_json(*r.wls) : Json(nullptr);
  j["attenuation_fraction"] =
      r.attenuation_fraction ? Json(*r.attenuation_fraction) : Json(nullptr);
  j["failure_budget_exceeded"] = r.failure_budget_exceeded;
  j["replicates"] = r.replicates.size();
  return j;
}

std::string dump_artifact(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace deming
