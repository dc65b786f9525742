#pragma once

#include <json.hpp>
#include <string>

#include "deming/core_model.hpp"
#include "deming/inference.hpp"
#include "deming/selection.hpp"
#include "deming/simulation.hpp"

namespace deming {

using Json = nlohmann::ordered_json;

// Fit artifact core: beta0, beta1, sigma2, lambda, cov_params (row-major
// 2x2), loglik, residual_sd, scenario, n_iterations, converged, followed by
// boundary, cov_method, mse, n and the dataset fingerprint.
Json to_json(const DemingFit& fit);
DemingFit fit_from_json(const Json& j);

Json to_json(const ScenarioDiagnostics& d);
Json to_json(const BootstrapResult& b, bool include_replicates);
Json to_json(const ErrorProfile& p);
ErrorProfile error_profile_from_json(const Json& j);
Json to_json(const EstimatorCoverage& c);
Json to_json(const CoverageReport& r);

std::string fingerprint_hex(std::uint64_t fp);

// Serialized form used for every artifact: two-space indent, trailing LF.
std::string dump_artifact(const Json& j);

}  // namespace deming
