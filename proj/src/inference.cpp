#include "deming/inference.hpp"

#include <cmath>
#include <optional>
#include <random>

#include "deming/deming_ls.hpp"
#include "deming/deming_mle.hpp"
#include "deming/error.hpp"
#include "deming/numeric.hpp"

namespace deming {

namespace {

void require_level(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorKind::usage, "confidence level must lie in (0, 1)");
  }
}

}  // namespace

DemingFit fit_estimator(const Dataset& dataset, const EstimatorSpec& spec) {
  switch (spec.scenario) {
    case Scenario::A: return fit_simple_deming(dataset, spec.lambda);
    case Scenario::B: return fit_generalized_deming(dataset);
    case Scenario::C: {
      MleOptions opt;
      opt.bootstrap_cov = false;
      return fit_mle_deming(dataset, spec.lambda, opt);
    }
    case Scenario::wls: return fit_wls(dataset);
  }
  throw Error(ErrorKind::usage, "unknown estimator");
}

std::vector<std::size_t> bootstrap_indices(const Dataset& dataset,
                                           std::uint64_t seed, std::size_t r,
                                           bool weighted) {
  const std::size_t n = dataset.size();
  std::mt19937_64 gen(child_seed(seed, r));
  std::vector<std::size_t> idx(n);
  if (weighted) {
    std::vector<double> w;
    w.reserve(n);
    for (const auto& o : dataset) w.push_back(o.weight);
    std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
    for (auto& i : idx) i = pick(gen);
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (auto& i : idx) i = pick(gen);
  }
  return idx;
}

BootstrapResult bootstrap_fit(const Dataset& dataset,
                              const EstimatorSpec& estimator,
                              const BootstrapOptions& options) {
  if (options.replicates < 50) {
    throw Error(ErrorKind::usage, "bootstrap needs at least 50 replicates");
  }
  require_level(options.level);
  // Errors on the original data are fatal.
  (void)fit_estimator(dataset, estimator);

  const auto B = static_cast<std::size_t>(options.replicates);
  std::vector<std::optional<std::array<double, 3>>> slots(B);
  for_each_replicate(B, options.policy, [&](std::size_t r) {
    try {
      const auto idx =
          bootstrap_indices(dataset, options.seed, r, options.weighted_resample);
      std::vector<Observation> rows;
      rows.reserve(idx.size());
      for (auto i : idx) rows.push_back(dataset[i]);
      const auto fit = fit_estimator(Dataset(std::move(rows)), estimator);
      slots[r] = std::array<double, 3>{fit.beta0, fit.beta1, fit.sigma2};
    } catch (...) {
      slots[r].reset();
    }
  });

  BootstrapResult res;
  res.B = options.replicates;
  res.seed = options.seed;
  res.level = options.level;
  for (const auto& s : slots) {
    if (s) {
      res.replicates.push_back(*s);
    } else {
      ++res.n_failed;
    }
  }
  res.warning = static_cast<double>(res.n_failed) >
                0.05 * static_cast<double>(options.replicates);
  if (res.replicates.size() < 2) {
    throw Error(ErrorKind::degenerate_fit,
                "fewer than 2 bootstrap replicates succeeded");
  }

  std::vector<double> b0s, b1s;
  for (const auto& r : res.replicates) {
    b0s.push_back(r[0]);
    b1s.push_back(r[1]);
  }
  const double m0 = mean(b0s);
  const double m1 = mean(b1s);
  CompensatedSum c00, c01, c11;
  for (std::size_t k = 0; k < b0s.size(); ++k) {
    c00 += (b0s[k] - m0) * (b0s[k] - m0);
    c01 += (b0s[k] - m0) * (b1s[k] - m1);
    c11 += (b1s[k] - m1) * (b1s[k] - m1);
  }
  const double denom = static_cast<double>(b0s.size() - 1);
  res.cov_params = {c00.value() / denom, c01.value() / denom,
                    c11.value() / denom};
  const double alpha = 1.0 - options.level;
  res.ci_beta0 = {quantile(b0s, alpha / 2.0), quantile(b0s, 1.0 - alpha / 2.0)};
  res.ci_beta1 = {quantile(b1s, alpha / 2.0), quantile(b1s, 1.0 - alpha / 2.0)};
  return res;
}

PredictionVariance prediction_variance(const DemingFit& fit,
                                       const Cov2& cov, double x_new,
                                       double var_x_new, double var_e_y) {
  if (!std::isfinite(x_new) || !(var_x_new >= 0.0) || !(var_e_y >= 0.0)) {
    throw Error(ErrorKind::validation,
                "prediction needs finite x_new and nonnegative variances");
  }
  PredictionVariance pv;
  pv.parameter_term =
      cov.b00 + 2.0 * x_new * cov.b01 + x_new * x_new * cov.b11;
  pv.x_term = (fit.beta1 * fit.beta1 + cov.b11) * var_x_new;
  pv.e_y_term = var_e_y;
  pv.total = pv.parameter_term + pv.x_term + pv.e_y_term;
  return pv;
}

std::string_view to_string(PiMode m) noexcept {
  switch (m) {
    case PiMode::individual: return "individual";
    case PiMode::mean_variance: return "mean";
    case PiMode::mse: return "mse";
  }
  return "?";
}

PiMode parse_pi_mode(std::string_view s) {
  if (s == "individual") return PiMode::individual;
  if (s == "mean" || s == "mean-variance") return PiMode::mean_variance;
  if (s == "mse") return PiMode::mse;
  throw Error(ErrorKind::usage, "unknown PI mode '" + std::string(s) + "'");
}

PredictionResult prediction_interval(const DemingFit& fit, const Cov2& cov,
                                     double x_new, double var_x_new,
                                     double var_e_y, double level,
                                     std::size_t n, PiMode mode) {
  require_level(level);
  if (n < 3) {
    throw Error(ErrorKind::insufficient_data,
                "prediction intervals need n >= 3");
  }
  PredictionResult r;
  r.x_new = x_new;
  r.var_x_new = var_x_new;
  r.y_hat = fit.beta0 + fit.beta1 * x_new;
  r.components = prediction_variance(fit, cov, x_new, var_x_new, var_e_y);
  r.var_y_new = r.components.total;
  r.level = level;
  r.df = static_cast<int>(n) - 2;
  r.mode = mode;
  const double t =
      student_t_quantile(1.0 - (1.0 - level) / 2.0, static_cast<double>(r.df));
  const double half = t * std::sqrt(r.var_y_new);
  r.lower = r.y_hat - half;
  r.upper = r.y_hat + half;
  return r;
}

ErrorProfile error_profile(const Dataset& dataset) {
  std::vector<double> sx, sy;
  sx.reserve(dataset.size());
  sy.reserve(dataset.size());
  for (const auto& o : dataset) {
    sx.push_back(std::sqrt(o.effective_var_x()));
    sy.push_back(std::sqrt(o.effective_var_y()));
  }
  ErrorProfile p;
  if (dataset.empty()) return p;
  p.mean_sd_x = mean(sx);
  p.mean_sd_y = mean(sy);
  p.median_sd_x = median(sx);
  p.median_sd_y = median(sy);
  return p;
}

std::pair<double, double> prediction_inputs(const DemingFit& fit, PiMode mode,
                                            const ErrorProfile& profile,
                                            SdSummary summary, double var_x,
                                            double var_y, double weight) {
  const double sx = summary == SdSummary::mean ? profile.mean_sd_x
                                               : profile.median_sd_x;
  const double sy = summary == SdSummary::mean ? profile.mean_sd_y
                                               : profile.median_sd_y;
  if (mode == PiMode::mse && fit.scenario != Scenario::wls) {
    throw Error(ErrorKind::usage, "the mse PI mode applies to WLS fits only");
  }
  switch (fit.scenario) {
    case Scenario::wls:
      if (mode == PiMode::mse) {
        if (!fit.mse) throw Error(ErrorKind::usage, "WLS fit carries no MSE");
        return {0.0, *fit.mse / weight};
      }
      return {0.0, mode == PiMode::individual ? var_y : sy * sy};
    case Scenario::A: {
      // First-stage variances are ignored; the error variances come from the
      // residual scatter and lambda.
      const double s_d2 = fit.residual_sd * fit.residual_sd /
                          (1.0 + fit.lambda * fit.beta1 * fit.beta1);
      return {fit.lambda * s_d2, s_d2};
    }
    case Scenario::B:
    case Scenario::C: {
      const double ex = fit.scenario == Scenario::C ? fit.sigma2 : 0.0;
      const double ey = fit.scenario == Scenario::C ? fit.sigma2 / fit.lambda : 0.0;
      if (mode == PiMode::individual) return {var_x + ex, var_y + ey};
      return {sx * sx + ex, sy * sy + ey};
    }
  }
  return {0.0, 0.0};
}

double pi_coverage(const Dataset& dataset, const DemingFit& fit, PiMode mode,
                   double level, SdSummary summary) {
  require_level(level);
  const auto profile = error_profile(dataset);
  CompensatedSum inside, total;
  for (const auto& o : dataset) {
    const auto [vx, vy] = prediction_inputs(fit, mode, profile, summary,
                                            o.effective_var_x(),
                                            o.effective_var_y(), o.weight);
    const auto pi = prediction_interval(fit, fit.cov_params, o.x, vx, vy, level,
                                        dataset.size(), mode);
    total += o.weight;
    if (o.y >= pi.lower && o.y <= pi.upper) inside += o.weight;
  }
  return inside.value() / total.value();
}

}  // namespace deming
