#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "deming/core_model.hpp"
#include "deming/inference.hpp"
#include "deming/selection.hpp"
#include "deming/transforms.hpp"

namespace deming {

/// Second-stage data plus, when the input was raw first-stage records, the
/// records themselves (for raw-scale plot output).
struct TwoStageInput {
  Dataset data;
  std::optional<std::vector<FirstStageRecord>> first_stage;
  TransformSpec transform_x;
  TransformSpec transform_y;
};

// Reads either CSV schema; applies the transforms to z,w input. A non-identity
// transform on x,y input is a usage error.
TwoStageInput load_input(const std::string& path, const TransformSpec& tx,
                         const TransformSpec& ty);

struct FitConfig {
  std::optional<Scenario> scenario;  // empty = auto selection
  double lambda = 1.0;
  RThresholds thresholds;
  int bootstrap = 0;  // 0 = no bootstrap CIs (Scenario C still uses 200)
  std::uint64_t seed = 42;
  double level = 0.95;
  bool weighted_resample = false;
  ExecPolicy policy = ExecPolicy::parallel;
};

/// One row of plot data on both scales.
struct PlotRow {
  double x, y, sd_x, sd_y, weight, y_fit, y_fit_wls;
  double z, w, w_fit;
};

struct FitOutcome {
  DemingFit fit;
  std::optional<DemingFit> scenario_b_prefit;
  ScenarioDiagnostics selection;
  std::optional<BootstrapResult> bootstrap;
  std::optional<DemingFit> wls;
  ErrorProfile profile;
  std::vector<PlotRow> plot;
};

/// Second stage end to end: optional Scenario B pre-fit with r-criterion
/// selection, the final fit, the LRT when Scenario C is fitted, bootstrap
/// CIs, the WLS baseline and plot data.
FitOutcome run_fit(const TwoStageInput& input, const FitConfig& config);

}  // namespace deming
