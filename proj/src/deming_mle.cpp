#include "deming/deming_mle.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>

#include "deming/deming_ls.hpp"
#include "deming/error.hpp"
#include "deming/inference.hpp"
#include "deming/numeric.hpp"

namespace deming {

namespace {

void require_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::usage, "lambda must be positive and finite");
  }
}

void require_same_size(const Dataset& ds, std::span<const double> X) {
  if (X.size() != ds.size()) {
    throw Error(ErrorKind::usage, "true-value vector length " +
                                      std::to_string(X.size()) +
                                      " does not match dataset size " +
                                      std::to_string(ds.size()));
  }
}

// Residual pieces of the kernel at fixed (beta, X); the sigma2 update only
// needs these.
struct SigmaProblem {
  std::vector<double> u, v, rx2, ry2;
  double inv_lambda = 1.0;

  double loglik(double s) const {
    CompensatedSum acc;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double a = s + u[i];
      const double b = s * inv_lambda + v[i];
      acc += std::log(a) + std::log(b) + rx2[i] / a + ry2[i] / b;
    }
    return -0.5 * acc.value();
  }

  double derivative(double s) const {
    CompensatedSum acc;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double a = s + u[i];
      const double b = s * inv_lambda + v[i];
      acc += 1.0 / a + inv_lambda / b - rx2[i] / (a * a) -
             inv_lambda * ry2[i] / (b * b);
    }
    return -0.5 * acc.value();
  }
};

// Maximizes the kernel in sigma2 on [lower, upper]; never returns a point
// worse than `current`.
double update_sigma2(const SigmaProblem& prob, double current, double lower,
                     double upper) {
  auto neg = [&](double s) { return -prob.loglik(s); };
  const auto [s_min, f_min] = boost::math::tools::brent_find_minima(
      neg, lower, upper, std::numeric_limits<double>::digits / 2);
  (void)f_min;
  double best = s_min;

  // Polish the stationary point to full precision.
  const double span = upper - lower;
  if (prob.derivative(lower) <= 0.0 && best - lower < 1e-6 * span) {
    best = lower;
  } else {
    double lo = best, hi = best;
    double step = std::max(1e-10 * span, 1e-7 * best);
    double dlo = prob.derivative(lo);
    double dhi = dlo;
    for (int k = 0; k < 200 && dlo <= 0.0 && lo > lower; ++k) {
      lo = std::max(lower, lo - step);
      dlo = prob.derivative(lo);
      step *= 2.0;
    }
    step = std::max(1e-10 * span, 1e-7 * best);
    for (int k = 0; k < 200 && dhi >= 0.0 && hi < upper; ++k) {
      hi = std::min(upper, hi + step);
      dhi = prob.derivative(hi);
      step *= 2.0;
    }
    if (dlo > 0.0 && dhi < 0.0) {
      std::uintmax_t max_iter = 200;
      auto [a, b] = boost::math::tools::toms748_solve(
          [&](double s) { return prob.derivative(s); }, lo, hi, dlo, dhi,
          boost::math::tools::eps_tolerance<double>(
              std::numeric_limits<double>::digits - 2),
          max_iter);
      best = 0.5 * (a + b);
    } else if (dhi >= 0.0 && hi >= upper) {
      best = upper;
    } else if (dlo <= 0.0 && lo <= lower) {
      best = lower;
    }
  }
  return prob.loglik(best) >= prob.loglik(current) ? best : current;
}

}  // namespace

double mle_log_likelihood(const Dataset& dataset, double beta0, double beta1,
                          double sigma2, double lambda,
                          std::span<const double> X_hat) {
  require_lambda(lambda);
  require_same_size(dataset, X_hat);
  if (sigma2 < 0.0) {
    throw Error(ErrorKind::usage, "sigma2 must be nonnegative");
  }
  CompensatedSum acc;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& o = dataset[i];
    const double a = sigma2 + o.effective_var_x();
    const double b = sigma2 / lambda + o.effective_var_y();
    if (!(a > 0.0) || !(b > 0.0)) {
      throw Error(ErrorKind::singular_likelihood,
                  "row " + std::to_string(i + 1) +
                      ": zero total error variance in the likelihood");
    }
    const double rx = o.x - X_hat[i];
    const double ry = o.y - beta0 - beta1 * X_hat[i];
    acc += std::log(a) + std::log(b) + rx * rx / a + ry * ry / b;
  }
  return -0.5 * acc.value();
}

std::vector<double> profile_true_values(const Dataset& dataset, double beta0,
                                        double beta1, double sigma2,
                                        double lambda) {
  require_lambda(lambda);
  std::vector<double> X(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& o = dataset[i];
    const double a = sigma2 + o.effective_var_x();
    const double b = sigma2 / lambda + o.effective_var_y();
    const double den = b + beta1 * beta1 * a;
    X[i] = den > 0.0 ? (o.x * b + beta1 * a * (o.y - beta0)) / den : o.x;
  }
  return X;
}

double profiled_log_likelihood(const Dataset& dataset, double beta0,
                               double beta1, double sigma2, double lambda) {
  const auto X = profile_true_values(dataset, beta0, beta1, sigma2, lambda);
  return mle_log_likelihood(dataset, beta0, beta1, sigma2, lambda, X);
}

MleGradient mle_gradient(const Dataset& dataset, double beta0, double beta1,
                         double sigma2, double lambda,
                         std::span<const double> X_hat) {
  require_lambda(lambda);
  require_same_size(dataset, X_hat);
  MleGradient g;
  g.d_X.resize(dataset.size());
  CompensatedSum g0, g1, gs;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& o = dataset[i];
    const double a = sigma2 + o.effective_var_x();
    const double b = sigma2 / lambda + o.effective_var_y();
    const double rx = o.x - X_hat[i];
    const double ry = o.y - beta0 - beta1 * X_hat[i];
    g0 += ry / b;
    g1 += ry * X_hat[i] / b;
    g.d_X[i] = rx / a + beta1 * ry / b;
    gs += 1.0 / a + (1.0 / lambda) / b - (rx / a) * (rx / a) -
          (1.0 / lambda) * (ry / b) * (ry / b);
  }
  g.d_beta0 = g0.value();
  g.d_beta1 = g1.value();
  g.d_sigma2 = -0.5 * gs.value();
  return g;
}

DemingFit fit_mle_deming(const Dataset& dataset, double lambda,
                         const MleOptions& options) {
  require_fit_size(dataset);
  require_lambda(lambda);
  const std::size_t n = dataset.size();

  std::vector<double> u(n), v(n), ys(n);
  bool known_positive = true;
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = dataset[i].effective_var_x();
    v[i] = dataset[i].effective_var_y();
    ys[i] = dataset[i].y;
    if (u[i] <= 0.0 || v[i] <= 0.0) known_positive = false;
  }

  // Warm start from Scenario B; fall back to Scenario A when B is singular.
  DemingFit start;
  try {
    start = fit_generalized_deming(dataset);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::singular_weight &&
        e.kind() != ErrorKind::convergence) {
      throw;
    }
    start = fit_simple_deming(dataset, lambda);
  }
  double b0 = start.beta0;
  double b1 = start.beta1;

  const double upper = 10.0 * sample_variance(ys);
  if (!(upper > 0.0)) {
    throw Error(ErrorKind::degenerate_fit, "y has zero sample variance");
  }
  const double lower = known_positive ? 0.0 : 1e-12 * upper;

  double s2 = 0.0;
  if (options.fixed_sigma2) {
    s2 = *options.fixed_sigma2;
    if (!(s2 >= 0.0)) throw Error(ErrorKind::usage, "fixed sigma2 must be >= 0");
  } else {
    const double res2 = start.residual_sd * start.residual_sd;
    const double moment =
        (res2 - mean(v) - b1 * b1 * mean(u)) / (1.0 / lambda + b1 * b1);
    s2 = std::clamp(std::max(moment, 1e-12), lower, upper);
  }

  auto X = profile_true_values(dataset, b0, b1, s2, lambda);
  double ll = mle_log_likelihood(dataset, b0, b1, s2, lambda, X);
  std::vector<double> trace{ll};

  SigmaProblem prob;
  prob.u = u;
  prob.v = v;
  prob.rx2.resize(n);
  prob.ry2.resize(n);
  prob.inv_lambda = 1.0 / lambda;

  bool converged = false;
  int pinned = 0;
  int it = 0;
  while (it < options.max_iterations) {
    ++it;
    const double pb0 = b0, pb1 = b1, ps2 = s2;

    // (i) true values
    X = profile_true_values(dataset, b0, b1, s2, lambda);

    // (ii) weighted least squares of y on X with weights 1/b_i
    CompensatedSum sw, swx, swy;
    std::vector<double> wt(n);
    for (std::size_t i = 0; i < n; ++i) {
      wt[i] = 1.0 / (s2 / lambda + v[i]);
      sw += wt[i];
      swx += wt[i] * X[i];
      swy += wt[i] * dataset[i].y;
    }
    const double xb = swx.value() / sw.value();
    const double yb = swy.value() / sw.value();
    CompensatedSum sxx, sxy;
    for (std::size_t i = 0; i < n; ++i) {
      sxx += wt[i] * (X[i] - xb) * (X[i] - xb);
      sxy += wt[i] * (X[i] - xb) * (dataset[i].y - yb);
    }
    if (!(sxx.value() > 0.0)) {
      throw Error(ErrorKind::degenerate_fit, "profiled true values coincide");
    }
    b1 = sxy.value() / sxx.value();
    b0 = yb - b1 * xb;

    // (iii) sigma2
    if (!options.fixed_sigma2) {
      for (std::size_t i = 0; i < n; ++i) {
        const double rx = dataset[i].x - X[i];
        const double ry = dataset[i].y - b0 - b1 * X[i];
        prob.rx2[i] = rx * rx;
        prob.ry2[i] = ry * ry;
      }
      s2 = update_sigma2(prob, s2, lower, upper);
      pinned = (s2 <= lower) ? pinned + 1 : 0;
    }

    const double ll_new = mle_log_likelihood(dataset, b0, b1, s2, lambda, X);
    trace.push_back(ll_new);
    if (options.on_iteration) {
      options.on_iteration(MleState{b0, b1, s2, X, ll_new, it});
    }

    const double rel_ll = std::abs(ll_new - ll) / std::max(1.0, std::abs(ll_new));
    const double rel_par =
        std::max({std::abs(b0 - pb0) / std::max(1.0, std::abs(b0)),
                  std::abs(b1 - pb1) / std::max(1.0, std::abs(b1)),
                  std::abs(s2 - ps2) / std::max(1.0, s2)});
    ll = ll_new;
    if (rel_ll < options.tolerance && rel_par < options.tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw ConvergenceError("likelihood ascent did not converge in " +
                               std::to_string(options.max_iterations) +
                               " iterations",
                           b0, b1, s2, std::move(trace));
  }

  DemingFit fit;
  fit.beta0 = b0;
  fit.beta1 = b1;
  fit.sigma2 = s2;
  fit.lambda = lambda;
  fit.scenario = Scenario::C;
  fit.n_iterations = it;
  fit.converged = true;
  // Pinned for 3 iterations, or for the whole of a shorter run.
  fit.boundary = !options.fixed_sigma2 && pinned >= std::min(3, it);
  fit.n = n;
  fit.fingerprint = dataset.fingerprint();
  fit.residual_sd = residual_sd(dataset, b0, b1);
  fit.loglik = profiled_log_likelihood(dataset, b0, b1, s2, lambda);

  if (options.bootstrap_cov) {
    BootstrapOptions bopt;
    bopt.replicates = options.bootstrap_replicates;
    bopt.seed = options.seed;
    bopt.policy = options.policy;
    const auto boot = bootstrap_fit(dataset, {Scenario::C, lambda}, bopt);
    fit.cov_params = boot.cov_params;
    fit.cov_method = CovMethod::bootstrap;
  }
  return fit;
}

}  // namespace deming
