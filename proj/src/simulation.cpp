#include "deming/simulation.hpp"

#include <cmath>
#include <random>

#include "deming/error.hpp"
#include "deming/numeric.hpp"

namespace deming {

namespace {

void check_variance_law(const VarianceLaw& law, const char* name) {
  const bool ok = std::isfinite(law.a) && std::isfinite(law.b) && law.a >= 0.0 &&
                  (law.kind != VarianceLaw::Kind::uniform_range || law.b >= law.a);
  if (!ok) {
    throw Error(ErrorKind::validation,
                std::string("invalid variance profile for ") + name);
  }
}

double draw_variance(const VarianceLaw& law, double X, std::mt19937_64& gen) {
  switch (law.kind) {
    case VarianceLaw::Kind::constant: return law.a;
    case VarianceLaw::Kind::uniform_range:
      return law.a == law.b ? law.a
                            : std::uniform_real_distribution<double>(law.a, law.b)(gen);
    case VarianceLaw::Kind::proportional: return law.a * std::abs(X);
  }
  return 0.0;
}

// Containment with a relative slack of 1e-12 so that zero-width intervals
// from exact data still count the truth as covered.
bool covers(const std::pair<double, double>& ci, double truth) {
  const double slack = 1e-12 * std::max(1.0, std::abs(truth));
  return ci.first - slack <= truth && truth <= ci.second + slack;
}

}  // namespace

void validate(const SimulationSpec& spec) {
  if (spec.n < 3) throw Error(ErrorKind::validation, "simulation needs n >= 3");
  if (!std::isfinite(spec.beta0) || !std::isfinite(spec.beta1)) {
    throw Error(ErrorKind::validation, "true coefficients must be finite");
  }
  if (spec.x_law.kind == XLaw::Kind::uniform && !(spec.x_law.b > spec.x_law.a)) {
    throw Error(ErrorKind::validation, "uniform x law needs b > a");
  }
  if (spec.x_law.kind == XLaw::Kind::normal && !(spec.x_law.b > 0.0)) {
    throw Error(ErrorKind::validation, "normal x law needs a positive sd");
  }
  check_variance_law(spec.var_x_law, "var_x");
  check_variance_law(spec.var_y_law, "var_y");
  if (!(spec.sigma2 >= 0.0) || !std::isfinite(spec.sigma2)) {
    throw Error(ErrorKind::validation, "sigma2 must be nonnegative");
  }
  if (!(spec.lambda > 0.0) || !std::isfinite(spec.lambda)) {
    throw Error(ErrorKind::validation, "lambda must be positive");
  }
  if (spec.weight_law.lo < 1 ||
      (spec.weight_law.kind == WeightLaw::Kind::integer_uniform &&
       spec.weight_law.hi < spec.weight_law.lo)) {
    throw Error(ErrorKind::validation, "invalid weight law");
  }
}

SimulatedData generate_dataset(const SimulationSpec& spec) {
  validate(spec);
  std::mt19937_64 gen(spec.seed);
  std::normal_distribution<double> std_normal(0.0, 1.0);

  SimulatedData out;
  out.beta0 = spec.beta0;
  out.beta1 = spec.beta1;
  out.X.reserve(spec.n);
  out.Y.reserve(spec.n);
  std::vector<Observation> obs;
  obs.reserve(spec.n);
  const double sd_eps = std::sqrt(spec.sigma2);
  const double sd_delta = std::sqrt(spec.sigma2 / spec.lambda);

  for (std::size_t i = 0; i < spec.n; ++i) {
    double X = 0.0;
    if (spec.x_law.kind == XLaw::Kind::uniform) {
      X = std::uniform_real_distribution<double>(spec.x_law.a, spec.x_law.b)(gen);
    } else {
      X = spec.x_law.a + spec.x_law.b * std_normal(gen);
    }
    const double Y = spec.beta0 + spec.beta1 * X;
    const double var_x = draw_variance(spec.var_x_law, X, gen);
    const double var_y = draw_variance(spec.var_y_law, X, gen);
    double weight = spec.weight_law.lo;
    if (spec.weight_law.kind == WeightLaw::Kind::integer_uniform) {
      weight = std::uniform_int_distribution<int>(spec.weight_law.lo,
                                                  spec.weight_law.hi)(gen);
    } else {
      weight = static_cast<double>(spec.weight_law.lo);
    }
    const double e_x = std::sqrt(var_x / weight) * std_normal(gen);
    const double e_y = std::sqrt(var_y / weight) * std_normal(gen);
    const double eps = sd_eps * std_normal(gen);
    const double delta = sd_delta * std_normal(gen);
    out.X.push_back(X);
    out.Y.push_back(Y);
    obs.push_back({X + e_x + eps, Y + e_y + delta, var_x, var_y, weight});
  }
  out.dataset = Dataset(std::move(obs));
  return out;
}

std::vector<ProportionEstimate> estimate_group_proportions(
    const std::vector<GroupCount>& groups) {
  std::vector<ProportionEstimate> out;
  out.reserve(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& g = groups[i];
    if (g.n_trials < 1 || g.k < 0 || g.k > g.n_trials || !(g.weight > 0.0)) {
      throw Error(ErrorKind::validation,
                  "group " + std::to_string(i + 1) +
                      ": need 0 <= k <= n_trials, n_trials >= 1, weight > 0");
    }
    const double n = static_cast<double>(g.n_trials);
    ProportionEstimate e;
    e.value = static_cast<double>(g.k) / n;
    e.weight = g.weight;
    if (g.k == 0 || g.k == g.n_trials) {
      e.variance = 0.5 / (n * n);
      e.floored = true;
    } else {
      e.variance = e.value * (1.0 - e.value) / n;
    }
    out.push_back(e);
  }
  return out;
}

std::vector<FirstStageRecord> pair_first_stage(
    const std::vector<ProportionEstimate>& z,
    const std::vector<ProportionEstimate>& w) {
  if (z.size() != w.size()) {
    throw Error(ErrorKind::validation, "paired estimates differ in length");
  }
  std::vector<FirstStageRecord> out;
  out.reserve(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i].weight != w[i].weight) {
      throw Error(ErrorKind::validation,
                  "group " + std::to_string(i + 1) + ": weights disagree");
    }
    out.push_back({z[i].value, w[i].value, z[i].variance, w[i].variance,
                   z[i].weight});
  }
  return out;
}

CoverageReport run_coverage_study(const SimulationSpec& spec,
                                  const CoverageConfig& config) {
  validate(spec);
  if (config.replicates < 50) {
    throw Error(ErrorKind::usage, "coverage study needs at least 50 replicates");
  }
  const auto M = static_cast<std::size_t>(config.replicates);
  std::vector<ReplicateEstimate> reps(M);

  for_each_replicate(M, config.policy, [&](std::size_t m) {
    auto& rep = reps[m];
    rep.replicate = m;
    SimulationSpec s = spec;
    s.seed = stream_seed(spec.seed, 3 * m);
    std::optional<SimulatedData> data;
    try {
      data = generate_dataset(s);
    } catch (...) {
      return;
    }
    BootstrapOptions bopt;
    bopt.replicates = config.bootstrap;
    bopt.level = config.level;
    bopt.policy = ExecPolicy::serial;
    try {
      const auto fit = fit_estimator(data->dataset, config.estimator);
      bopt.seed = stream_seed(spec.seed, 3 * m + 1);
      const auto boot = bootstrap_fit(data->dataset, config.estimator, bopt);
      rep.deming_beta0 = fit.beta0;
      rep.deming_beta1 = fit.beta1;
      rep.deming_ci_beta0 = boot.ci_beta0;
      rep.deming_ci_beta1 = boot.ci_beta1;
      rep.deming_ok = true;
    } catch (...) {
      rep.deming_ok = false;
    }
    if (config.include_wls) {
      try {
        const EstimatorSpec wls{Scenario::wls, 1.0};
        const auto fit = fit_estimator(data->dataset, wls);
        bopt.seed = stream_seed(spec.seed, 3 * m + 2);
        const auto boot = bootstrap_fit(data->dataset, wls, bopt);
        rep.wls_beta0 = fit.beta0;
        rep.wls_beta1 = fit.beta1;
        rep.wls_ci_beta0 = boot.ci_beta0;
        rep.wls_ci_beta1 = boot.ci_beta1;
        rep.wls_ok = true;
      } catch (...) {
        rep.wls_ok = false;
      }
    }
  });

  auto summarize = [&](bool wls) {
    EstimatorCoverage c;
    CompensatedSum c0, c1, w0, w1, m0, m1;
    for (const auto& r : reps) {
      const bool ok = wls ? r.wls_ok : r.deming_ok;
      if (!ok) {
        ++c.n_failed;
        continue;
      }
      ++c.n_ok;
      const auto& ci0 = wls ? r.wls_ci_beta0 : r.deming_ci_beta0;
      const auto& ci1 = wls ? r.wls_ci_beta1 : r.deming_ci_beta1;
      c0 += covers(ci0, spec.beta0) ? 1.0 : 0.0;
      c1 += covers(ci1, spec.beta1) ? 1.0 : 0.0;
      w0 += ci0.second - ci0.first;
      w1 += ci1.second - ci1.first;
      m0 += wls ? r.wls_beta0 : r.deming_beta0;
      m1 += wls ? r.wls_beta1 : r.deming_beta1;
    }
    if (c.n_ok > 0) {
      const double k = c.n_ok;
      c.coverage_beta0 = c0.value() / k;
      c.coverage_beta1 = c1.value() / k;
      c.mean_width_beta0 = w0.value() / k;
      c.mean_width_beta1 = w1.value() / k;
      c.mean_beta0 = m0.value() / k;
      c.mean_beta1 = m1.value() / k;
    }
    return c;
  };

  CoverageReport report;
  report.deming = summarize(false);
  const double budget = 0.05 * static_cast<double>(M);
  report.failure_budget_exceeded = report.deming.n_failed > budget;
  if (config.include_wls) {
    report.wls = summarize(true);
    report.failure_budget_exceeded =
        report.failure_budget_exceeded || report.wls->n_failed > budget;
    int both = 0, attenuated = 0;
    for (const auto& r : reps) {
      if (r.deming_ok && r.wls_ok) {
        ++both;
        if (std::abs(r.wls_beta1) < std::abs(r.deming_beta1)) ++attenuated;
      }
    }
    if (both > 0) {
      report.attenuation_fraction = static_cast<double>(attenuated) / both;
    }
  }
  report.replicates = std::move(reps);
  return report;
}

}  // namespace deming
