#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "deming/core_model.hpp"
#include "deming/parallel.hpp"

namespace deming {

// Scenario C error model, per observation i:
//   x_i = X_i + e_xi + eps_i,    eps_i   ~ N(0, sigma2)
//   y_i = Y_i + e_yi + delta_i,  delta_i ~ N(0, sigma2 / lambda)
// with lambda = Var(eps)/Var(delta), the same ratio the simple Deming fit
// uses. e_xi, e_yi carry the known (weight-divided) variances.

/// Log-likelihood kernel (additive constants dropped):
/// -1/2 sum[log a_i + log b_i + (x_i - X_i)^2/a_i + (y_i - b0 - b1 X_i)^2/b_i]
/// with a_i = sigma2 + var_x_i and b_i = sigma2/lambda + var_y_i.
/// Throws a singular_likelihood Error when any a_i or b_i is not positive.
double mle_log_likelihood(const Dataset& dataset, double beta0, double beta1,
                          double sigma2, double lambda,
                          std::span<const double> X_hat);

// Closed-form maximizer of the kernel over each X_i.
std::vector<double> profile_true_values(const Dataset& dataset, double beta0,
                                        double beta1, double sigma2,
                                        double lambda);

// Kernel evaluated at the profiled true values.
double profiled_log_likelihood(const Dataset& dataset, double beta0,
                               double beta1, double sigma2, double lambda);

/// Analytic partial derivatives of the kernel.
struct MleGradient {
  double d_beta0 = 0.0;
  double d_beta1 = 0.0;
  double d_sigma2 = 0.0;
  std::vector<double> d_X;
};

MleGradient mle_gradient(const Dataset& dataset, double beta0, double beta1,
                         double sigma2, double lambda,
                         std::span<const double> X_hat);

struct MleState {
  double beta0 = 0.0;
  double beta1 = 0.0;
  double sigma2 = 0.0;
  std::vector<double> X_hat;
  double loglik = 0.0;
  int iteration = 0;
};

struct MleOptions {
  double tolerance = 1e-10;
  int max_iterations = 1000;
  // Holds sigma2 at this value and skips its update.
  std::optional<double> fixed_sigma2;
  // Covariance of (beta0, beta1) by bootstrap; off for bootstrap replicates.
  bool bootstrap_cov = true;
  int bootstrap_replicates = 200;
  std::uint64_t seed = 42;
  ExecPolicy policy = ExecPolicy::parallel;
  // Called after every accepted iteration.
  std::function<void(const MleState&)> on_iteration;
};

/// Scenario C maximum likelihood by block-coordinate ascent: profile X in
/// closed form, update (beta0, beta1) by weighted least squares of y on X,
/// then update sigma2 by a bracketed one-dimensional solve on
/// [lower, 10 * var(y)]. Warm-started from the Scenario B fit.
DemingFit fit_mle_deming(const Dataset& dataset, double lambda = 1.0,
                         const MleOptions& options = {});

}  // namespace deming
