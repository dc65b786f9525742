#include "deming/selection.hpp"

#include <cmath>
#include <limits>

#include "deming/error.hpp"
#include "deming/numeric.hpp"

namespace deming {

double compute_r_criterion(const Dataset& dataset,
                           const DemingFit& scenario_b_fit) {
  if (scenario_b_fit.scenario != Scenario::B) {
    throw Error(ErrorKind::usage, "r criterion requires a Scenario B fit");
  }
  if (scenario_b_fit.fingerprint != dataset.fingerprint()) {
    throw Error(ErrorKind::usage, "fit was produced on a different dataset");
  }
  CompensatedSum sd;
  for (const auto& o : dataset) sd += std::sqrt(o.effective_var_y());
  const double numerator = sd.value() / static_cast<double>(dataset.size());
  if (scenario_b_fit.residual_sd == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return numerator / scenario_b_fit.residual_sd;
}

Scenario select_scenario(double r, const RThresholds& thresholds) {
  if (r < thresholds.low) return Scenario::A;
  if (r >= thresholds.high) return Scenario::B;
  return Scenario::C;
}

LrtResult likelihood_ratio_test(const DemingFit& fit_restricted,
                                const DemingFit& fit_full) {
  if (fit_restricted.fingerprint != fit_full.fingerprint) {
    throw Error(ErrorKind::usage,
                "likelihood ratio test needs fits on the same dataset");
  }
  if (!fit_restricted.loglik || !fit_full.loglik) {
    throw Error(ErrorKind::usage,
                "likelihood ratio test needs a log-likelihood on both fits");
  }
  LrtResult r;
  r.statistic = std::max(0.0, 2.0 * (*fit_full.loglik - *fit_restricted.loglik));
  r.p_value = chi_square_1_sf(r.statistic);
  return r;
}

}  // namespace deming
