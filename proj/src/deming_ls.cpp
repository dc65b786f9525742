#include "deming/deming_ls.hpp"

#include <cmath>

#include "deming/deming_mle.hpp"
#include "deming/error.hpp"
#include "deming/numeric.hpp"

namespace deming {

namespace {

void require_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::usage, "lambda must be positive and finite");
  }
}

// Closed form with the "+" root, no sign heuristics.
double deming_slope(double u, double q, double p, double lambda) {
  const double a = lambda * q - u;
  return (a + std::sqrt((u - lambda * q) * (u - lambda * q) +
                        4.0 * lambda * p * p)) /
         (2.0 * lambda * p);
}

double ols_slope(const Dataset& ds) {
  const auto s = summarize(ds);
  if (s.u == 0.0) {
    throw Error(ErrorKind::degenerate_fit, "all x values are equal");
  }
  return s.p / s.u;
}

std::optional<double> scenario_b_loglik(const Dataset& ds, double b0,
                                        double b1) {
  for (const auto& o : ds) {
    if (o.effective_var_x() <= 0.0 || o.effective_var_y() <= 0.0) {
      return std::nullopt;
    }
  }
  return profiled_log_likelihood(ds, b0, b1, 0.0, 1.0);
}

}  // namespace

SimpleDemingSummary summarize(const Dataset& dataset) {
  SimpleDemingSummary s;
  const double n = static_cast<double>(dataset.size());
  if (dataset.empty()) return s;
  CompensatedSum sx, sy;
  for (const auto& o : dataset) {
    sx += o.x;
    sy += o.y;
  }
  s.x_bar = sx.value() / n;
  s.y_bar = sy.value() / n;
  CompensatedSum u, q, p;
  for (const auto& o : dataset) {
    const double dx = o.x - s.x_bar;
    const double dy = o.y - s.y_bar;
    u += dx * dx;
    q += dy * dy;
    p += dx * dy;
  }
  s.u = u.value();
  s.q = q.value();
  s.p = p.value();
  return s;
}

double residual_sd(const Dataset& dataset, double beta0, double beta1) {
  CompensatedSum ss;
  for (const auto& o : dataset) {
    const double d = o.y - (beta0 + beta1 * o.x);
    ss += d * d;
  }
  return std::sqrt(ss.value() / static_cast<double>(dataset.size() - 2));
}

DemingFit fit_simple_deming(const Dataset& dataset, double lambda) {
  require_fit_size(dataset);
  require_lambda(lambda);
  const auto s = summarize(dataset);
  if (s.u == 0.0) {
    throw Error(ErrorKind::degenerate_fit, "all x values are equal (u = 0)");
  }
  if (s.p == 0.0) {
    throw Error(ErrorKind::degenerate_fit,
                "zero cross-product p; the slope is undefined");
  }

  DemingFit fit;
  fit.beta1 = deming_slope(s.u, s.q, s.p, lambda);
  fit.beta0 = s.y_bar - fit.beta1 * s.x_bar;
  fit.lambda = lambda;
  fit.scenario = Scenario::A;
  fit.n = dataset.size();
  fit.fingerprint = dataset.fingerprint();
  fit.residual_sd = residual_sd(dataset, fit.beta0, fit.beta1);

  // Delete-one jackknife from exact downdates of the centered sums.
  const std::size_t n = dataset.size();
  const double nn = static_cast<double>(n);
  std::vector<double> jb0(n), jb1(n);
  bool ok = true;
  for (std::size_t k = 0; k < n && ok; ++k) {
    const double dx = dataset[k].x - s.x_bar;
    const double dy = dataset[k].y - s.y_bar;
    const double f = nn / (nn - 1.0);
    const double u = s.u - f * dx * dx;
    const double q = s.q - f * dy * dy;
    const double p = s.p - f * dx * dy;
    if (u <= 0.0 || p == 0.0) {
      ok = false;
      break;
    }
    const double xb = (nn * s.x_bar - dataset[k].x) / (nn - 1.0);
    const double yb = (nn * s.y_bar - dataset[k].y) / (nn - 1.0);
    jb1[k] = deming_slope(u, std::max(q, 0.0), p, lambda);
    jb0[k] = yb - jb1[k] * xb;
  }
  if (ok) {
    const double m0 = mean(jb0);
    const double m1 = mean(jb1);
    CompensatedSum c00, c01, c11;
    for (std::size_t k = 0; k < n; ++k) {
      c00 += (jb0[k] - m0) * (jb0[k] - m0);
      c01 += (jb0[k] - m0) * (jb1[k] - m1);
      c11 += (jb1[k] - m1) * (jb1[k] - m1);
    }
    const double f = (nn - 1.0) / nn;
    fit.cov_params = {f * c00.value(), f * c01.value(), f * c11.value()};
    fit.cov_method = CovMethod::jackknife;
  }
  return fit;
}

TrueValueEstimates estimate_true_values(const Dataset& dataset,
                                        const DemingFit& fit) {
  TrueValueEstimates t;
  t.X_hat.reserve(dataset.size());
  t.Y_hat.reserve(dataset.size());
  t.d.reserve(dataset.size());
  const double lb = fit.lambda * fit.beta1;
  const double denom = 1.0 + lb * fit.beta1;
  for (const auto& o : dataset) {
    const double d = o.y - (fit.beta0 + fit.beta1 * o.x);
    t.d.push_back(d);
    t.X_hat.push_back(o.x + lb * d / denom);
    t.Y_hat.push_back(o.y - d / denom);
  }
  return t;
}

YorkIterationState york_sweep(const Dataset& dataset, double beta1) {
  YorkIterationState st;
  const std::size_t n = dataset.size();
  st.beta1_current = beta1;
  st.w_weights.resize(n);
  st.x_prime.resize(n);
  st.y_prime.resize(n);
  st.z_vals.resize(n);
  CompensatedSum sw, swx, swy;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& o = dataset[i];
    const double w =
        1.0 / (o.effective_var_y() + beta1 * beta1 * o.effective_var_x());
    st.w_weights[i] = w;
    sw += w;
    swx += w * o.x;
    swy += w * o.y;
  }
  st.x_bar_w = swx.value() / sw.value();
  st.y_bar_w = swy.value() / sw.value();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& o = dataset[i];
    st.x_prime[i] = o.x - st.x_bar_w;
    st.y_prime[i] = o.y - st.y_bar_w;
    st.z_vals[i] = st.w_weights[i] * (o.effective_var_y() * st.x_prime[i] +
                                      beta1 * o.effective_var_x() * st.y_prime[i]);
  }
  return st;
}

double generalized_deming_objective(const Dataset& dataset, double beta0,
                                    double beta1) {
  CompensatedSum chi2;
  for (const auto& o : dataset) {
    const double d = o.y - beta0 - beta1 * o.x;
    chi2 += d * d / (o.effective_var_y() + beta1 * beta1 * o.effective_var_x());
  }
  return chi2.value();
}

DemingFit fit_generalized_deming(const Dataset& dataset,
                                 const YorkOptions& options) {
  require_fit_size(dataset);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset[i].var_x == 0.0 && dataset[i].var_y == 0.0) {
      throw Error(ErrorKind::singular_weight,
                  "row " + std::to_string(i + 1) +
                      ": var_x and var_y are both zero");
    }
  }

  double b1 = ols_slope(dataset);
  bool converged = false;
  int it = 0;
  while (it < options.max_iterations) {
    ++it;
    const auto st = york_sweep(dataset, b1);
    CompensatedSum num, den;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      num += st.w_weights[i] * st.z_vals[i] * st.y_prime[i];
      den += st.w_weights[i] * st.z_vals[i] * st.x_prime[i];
    }
    if (den.value() == 0.0 || !std::isfinite(num.value() / den.value())) {
      throw Error(ErrorKind::degenerate_fit,
                  "York iteration denominator vanished");
    }
    const double next = num.value() / den.value();
    const double change = std::abs(next - b1) / std::max(1.0, std::abs(next));
    b1 = next;
    if (change < options.tolerance) {
      converged = true;
      break;
    }
  }
  const auto st = york_sweep(dataset, b1);
  const double b0 = st.y_bar_w - b1 * st.x_bar_w;
  if (!converged) {
    throw ConvergenceError("York iteration did not converge in " +
                               std::to_string(options.max_iterations) +
                               " iterations",
                           b0, b1, 0.0);
  }

  DemingFit fit;
  fit.beta0 = b0;
  fit.beta1 = b1;
  fit.scenario = Scenario::B;
  fit.n_iterations = it;
  fit.converged = true;
  fit.n = dataset.size();
  fit.fingerprint = dataset.fingerprint();
  fit.residual_sd = residual_sd(dataset, b0, b1);
  fit.loglik = scenario_b_loglik(dataset, b0, b1);

  // Standard errors from the adjusted points x_adj = x_bar_w + z_i.
  CompensatedSum sw, swx;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    sw += st.w_weights[i];
    swx += st.w_weights[i] * (st.x_bar_w + st.z_vals[i]);
  }
  const double x_adj_bar = swx.value() / sw.value();
  CompensatedSum swu;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const double u = st.x_bar_w + st.z_vals[i] - x_adj_bar;
    swu += st.w_weights[i] * u * u;
  }
  if (swu.value() > 0.0) {
    const double var_b1 = 1.0 / swu.value();
    fit.cov_params = {1.0 / sw.value() + x_adj_bar * x_adj_bar * var_b1,
                      -x_adj_bar * var_b1, var_b1};
    fit.cov_method = CovMethod::williamson;
  }
  return fit;
}

DemingFit fit_wls(const Dataset& dataset) {
  require_fit_size(dataset);
  CompensatedSum sw, swx, swy;
  for (const auto& o : dataset) {
    sw += o.weight;
    swx += o.weight * o.x;
    swy += o.weight * o.y;
  }
  const double xb = swx.value() / sw.value();
  const double yb = swy.value() / sw.value();
  CompensatedSum sxx, sxy;
  for (const auto& o : dataset) {
    sxx += o.weight * (o.x - xb) * (o.x - xb);
    sxy += o.weight * (o.x - xb) * (o.y - yb);
  }
  if (sxx.value() == 0.0) {
    throw Error(ErrorKind::degenerate_fit, "all x values are equal");
  }

  DemingFit fit;
  fit.beta1 = sxy.value() / sxx.value();
  fit.beta0 = yb - fit.beta1 * xb;
  fit.scenario = Scenario::wls;
  fit.n = dataset.size();
  fit.fingerprint = dataset.fingerprint();
  fit.residual_sd = residual_sd(dataset, fit.beta0, fit.beta1);

  CompensatedSum rss;
  for (const auto& o : dataset) {
    const double r = o.y - fit.beta0 - fit.beta1 * o.x;
    rss += o.weight * r * r;
  }
  const double mse = rss.value() / static_cast<double>(dataset.size() - 2);
  fit.mse = mse;
  fit.cov_params = {mse * (1.0 / sw.value() + xb * xb / sxx.value()),
                    -xb * mse / sxx.value(), mse / sxx.value()};
  fit.cov_method = CovMethod::wls;
  return fit;
}

}  // namespace deming
