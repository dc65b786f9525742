#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "deming/core_model.hpp"
#include "deming/parallel.hpp"

namespace deming {

/// Which second-stage estimator to run, and its variance ratio.
struct EstimatorSpec {
  Scenario scenario = Scenario::B;
  double lambda = 1.0;
};

// Point estimate only (no bootstrap covariance for Scenario C).
DemingFit fit_estimator(const Dataset& dataset, const EstimatorSpec& spec);

struct BootstrapOptions {
  int replicates = 200;
  std::uint64_t seed = 42;
  double level = 0.95;
  // Draw rows with probability proportional to weight instead of uniformly.
  bool weighted_resample = false;
  ExecPolicy policy = ExecPolicy::parallel;
};

struct BootstrapResult {
  // One row per successful replicate: (beta0, beta1, sigma2).
  std::vector<std::array<double, 3>> replicates;
  Cov2 cov_params;
  std::pair<double, double> ci_beta0{0.0, 0.0};
  std::pair<double, double> ci_beta1{0.0, 0.0};
  double level = 0.95;
  int B = 0;
  std::uint64_t seed = 0;
  int n_failed = 0;
  bool warning = false;
};

// Resamples row indices for replicate `r`; exposed for tests.
std::vector<std::size_t> bootstrap_indices(const Dataset& dataset,
                                           std::uint64_t seed, std::size_t r,
                                           bool weighted);

/// Percentile bootstrap of the chosen estimator. Rows are resampled with
/// replacement with their weights attached. Replicate r draws from
/// child_seed(seed, r), so the result is the same for either ExecPolicy.
/// Throws if the estimator fails on the original dataset.
BootstrapResult bootstrap_fit(const Dataset& dataset,
                              const EstimatorSpec& estimator,
                              const BootstrapOptions& options = {});

struct PredictionVariance {
  double total = 0.0;
  double parameter_term = 0.0;  // X_new' Cov(beta) X_new
  double x_term = 0.0;          // (beta1^2 + Var(beta1)) Var(x_new)
  double e_y_term = 0.0;        // Var(e_y)
};

PredictionVariance prediction_variance(const DemingFit& fit,
                                       const Cov2& cov_params, double x_new,
                                       double var_x_new, double var_e_y);

enum class PiMode { individual, mean_variance, mse };

std::string_view to_string(PiMode m) noexcept;
PiMode parse_pi_mode(std::string_view s);

struct PredictionResult {
  double x_new = 0.0;
  double var_x_new = 0.0;
  double y_hat = 0.0;
  double var_y_new = 0.0;
  PredictionVariance components;
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
  int df = 0;
  PiMode mode = PiMode::individual;
};

// y_hat +/- t(1 - alpha/2, n - 2) sqrt(Var(y_new)).
PredictionResult prediction_interval(const DemingFit& fit,
                                     const Cov2& cov_params, double x_new,
                                     double var_x_new, double var_e_y,
                                     double level, std::size_t n,
                                     PiMode mode = PiMode::individual);

/// Summary of first-stage standard deviations on the transformed scale,
/// after weight division. Used by the mean-variance PI mode.
struct ErrorProfile {
  double mean_sd_x = 0.0;
  double mean_sd_y = 0.0;
  double median_sd_x = 0.0;
  double median_sd_y = 0.0;
};

ErrorProfile error_profile(const Dataset& dataset);

enum class SdSummary { mean, median };

// Var(x_new) and Var(e_y) for one point under a fit and PI mode.
// `var_x`, `var_y` are the point's effective first-stage variances and
// `weight` its frequency (used by the MSE mode only).
std::pair<double, double> prediction_inputs(const DemingFit& fit,
                                            PiMode mode,
                                            const ErrorProfile& profile,
                                            SdSummary summary, double var_x,
                                            double var_y, double weight);

/// Weighted fraction of observations whose y lies inside its own PI.
/// Takes the dataset before weight division; weights act as frequencies.
double pi_coverage(const Dataset& dataset, const DemingFit& fit, PiMode mode,
                   double level, SdSummary summary = SdSummary::mean);

}  // namespace deming
