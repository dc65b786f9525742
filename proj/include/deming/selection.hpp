#pragma once

#include <optional>
#include <utility>

#include "deming/core_model.hpp"

namespace deming {

struct RThresholds {
  double low = 0.1;
  double high = 0.8;
};

/// Outcome of scenario selection, embedded in fit artifacts.
struct ScenarioDiagnostics {
  double r_value = 0.0;  // +inf when the Scenario B fit is exact
  Scenario selected = Scenario::B;
  std::optional<double> lrt_statistic;
  std::optional<double> lrt_p_value;
  RThresholds thresholds;
  bool auto_selected = false;
};

// Mean of sqrt(effective var_y) over the residual SD of a Scenario B fit.
// Returns +infinity when that residual SD is zero.
double compute_r_criterion(const Dataset& dataset,
                           const DemingFit& scenario_b_fit);

// r < low -> A, r >= high -> B, otherwise C.
Scenario select_scenario(double r, const RThresholds& thresholds = {});

struct LrtResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// 2 (loglik_full - loglik_restricted), floored at 0, against chi-square(1).
LrtResult likelihood_ratio_test(const DemingFit& fit_restricted,
                                const DemingFit& fit_full);

}  // namespace deming
