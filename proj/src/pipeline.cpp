#include "deming/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "deming/deming_ls.hpp"
#include "deming/deming_mle.hpp"
#include "deming/error.hpp"

namespace deming {

TwoStageInput load_input(const std::string& path, const TransformSpec& tx,
                         const TransformSpec& ty) {
  TwoStageInput in;
  in.transform_x = tx;
  in.transform_y = ty;
  const auto schema = detect_schema(path);
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  if (schema == CsvSchema::first_stage) {
    auto recs = parse_first_stage(f);
    in.data = transform_dataset(recs, tx, ty);
    in.first_stage = std::move(recs);
  } else {
    if (tx.kind != TransformKind::identity || ty.kind != TransformKind::identity ||
        tx.scale != 1.0 || ty.scale != 1.0) {
      throw Error(ErrorKind::usage,
                  "transforms apply to raw z,w input; '" + path +
                      "' already holds x,y columns");
    }
    in.data = parse_dataset(f);
  }
  return in;
}

namespace {

bool column_all_zero(const Dataset& ds, bool x_column) {
  for (const auto& o : ds) {
    if ((x_column ? o.var_x : o.var_y) != 0.0) return false;
  }
  return true;
}

bool has_singular_row(const Dataset& ds) {
  for (const auto& o : ds) {
    if (o.var_x == 0.0 && o.var_y == 0.0) return true;
  }
  return false;
}

}  // namespace

FitOutcome run_fit(const TwoStageInput& input, const FitConfig& config) {
  const Dataset& ds = input.data;
  require_fit_size(ds);

  FitOutcome out;
  out.profile = error_profile(ds);
  out.selection.thresholds = config.thresholds;
  out.selection.r_value = std::numeric_limits<double>::quiet_NaN();

  Scenario chosen;
  if (config.scenario) {
    chosen = *config.scenario;
  } else {
    out.selection.auto_selected = true;
    if (column_all_zero(ds, true) || column_all_zero(ds, false) ||
        has_singular_row(ds)) {
      chosen = Scenario::A;
    } else {
      out.scenario_b_prefit = fit_generalized_deming(ds);
      out.selection.r_value = compute_r_criterion(ds, *out.scenario_b_prefit);
      chosen = select_scenario(out.selection.r_value, config.thresholds);
    }
  }
  out.selection.selected = chosen;

  const int boot_count = config.bootstrap > 0 ? config.bootstrap : 200;
  BootstrapOptions bopt;
  bopt.replicates = boot_count;
  bopt.seed = config.seed;
  bopt.level = config.level;
  bopt.weighted_resample = config.weighted_resample;
  bopt.policy = config.policy;

  switch (chosen) {
    case Scenario::A: out.fit = fit_simple_deming(ds, config.lambda); break;
    case Scenario::B:
      out.fit = out.scenario_b_prefit ? *out.scenario_b_prefit
                                      : fit_generalized_deming(ds);
      break;
    case Scenario::C: {
      MleOptions mopt;
      mopt.bootstrap_cov = false;
      out.fit = fit_mle_deming(ds, config.lambda, mopt);
      break;
    }
    case Scenario::wls: out.fit = fit_wls(ds); break;
  }

  if (chosen == Scenario::C) {
    if (!out.scenario_b_prefit && !has_singular_row(ds)) {
      out.scenario_b_prefit = fit_generalized_deming(ds);
    }
    if (out.scenario_b_prefit && out.scenario_b_prefit->loglik && out.fit.loglik) {
      const auto lrt = likelihood_ratio_test(*out.scenario_b_prefit, out.fit);
      out.selection.lrt_statistic = lrt.statistic;
      out.selection.lrt_p_value = lrt.p_value;
    }
  }

  if (config.bootstrap > 0 || chosen == Scenario::C) {
    out.bootstrap = bootstrap_fit(ds, {chosen, config.lambda}, bopt);
    if (chosen == Scenario::C) {
      out.fit.cov_params = out.bootstrap->cov_params;
      out.fit.cov_method = CovMethod::bootstrap;
    }
    if (config.bootstrap == 0) out.bootstrap.reset();
  }

  try {
    out.wls = fit_wls(ds);
  } catch (const Error&) {
    out.wls.reset();
  }

  out.plot.reserve(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& o = ds[i];
    PlotRow row{};
    row.x = o.x;
    row.y = o.y;
    row.sd_x = std::sqrt(o.effective_var_x());
    row.sd_y = std::sqrt(o.effective_var_y());
    row.weight = o.weight;
    row.y_fit = out.fit.beta0 + out.fit.beta1 * o.x;
    row.y_fit_wls = out.wls ? out.wls->beta0 + out.wls->beta1 * o.x
                            : std::numeric_limits<double>::quiet_NaN();
    if (input.first_stage) {
      row.z = (*input.first_stage)[i].z;
      row.w = (*input.first_stage)[i].w;
      row.w_fit = input.transform_y.inverse(row.y_fit);
    } else {
      row.z = o.x;
      row.w = o.y;
      row.w_fit = row.y_fit;
    }
    out.plot.push_back(row);
  }
  return out;
}

}  // namespace deming
