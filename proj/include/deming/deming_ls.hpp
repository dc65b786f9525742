#pragma once

#include <vector>

#include "deming/core_model.hpp"

namespace deming {

// Centered sums of squares and cross-products used by the closed form.
SimpleDemingSummary summarize(const Dataset& dataset);

/// Scenario A: constant unknown error variances with ratio
/// lambda = Var(x error) / Var(y error). Per-observation variances and
/// weights are ignored. Covariance of the estimates by delete-one jackknife.
DemingFit fit_simple_deming(const Dataset& dataset, double lambda = 1.0);

TrueValueEstimates estimate_true_values(const Dataset& dataset,
                                        const DemingFit& fit);

struct YorkOptions {
  double tolerance = 1e-12;
  int max_iterations = 500;
};

/// Working arrays of one York-Williamson sweep at a fixed slope.
struct YorkIterationState {
  std::vector<double> w_weights;
  double x_bar_w = 0.0;
  double y_bar_w = 0.0;
  std::vector<double> x_prime;
  std::vector<double> y_prime;
  std::vector<double> z_vals;
  double beta1_current = 0.0;
};

// One sweep at slope `beta1`, using effective (weight-divided) variances.
YorkIterationState york_sweep(const Dataset& dataset, double beta1);

/// Scenario B: known per-observation variances (divided by weights),
/// solved by the York-Williamson fixed-point iteration started from the
/// OLS slope. cov_params from the York/Williamson standard-error equations.
DemingFit fit_generalized_deming(const Dataset& dataset,
                                 const YorkOptions& options = {});

// The chi-square objective with true values minimized out:
// sum d_i^2 / (v_i + beta1^2 u_i).
double generalized_deming_objective(const Dataset& dataset, double beta0,
                                    double beta1);

/// Weighted least squares of y on x with observation weights only; the
/// attenuation-prone baseline.
DemingFit fit_wls(const Dataset& dataset);

// sqrt(sum d_i^2 / (n - 2)) of y-residuals from a line.
double residual_sd(const Dataset& dataset, double beta0, double beta1);

}  // namespace deming
