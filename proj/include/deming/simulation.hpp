#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "deming/core_model.hpp"
#include "deming/inference.hpp"
#include "deming/parallel.hpp"

namespace deming {

struct XLaw {
  enum class Kind { uniform, normal };
  Kind kind = Kind::uniform;
  double a = 0.0;  // lower bound, or mean
  double b = 1.0;  // upper bound, or standard deviation
};

/// Profile of the known per-observation variance.
struct VarianceLaw {
  enum class Kind { constant, uniform_range, proportional };
  Kind kind = Kind::constant;
  double a = 0.0;  // constant value, range low, or proportionality factor
  double b = 0.0;  // range high
};

struct WeightLaw {
  enum class Kind { constant, integer_uniform };
  Kind kind = Kind::constant;
  int lo = 1;
  int hi = 1;
};

struct SimulationSpec {
  std::size_t n = 300;
  double beta0 = 0.0;
  double beta1 = 1.0;
  XLaw x_law;
  VarianceLaw var_x_law;
  VarianceLaw var_y_law;
  // Extra unknown error: Var(eps) = sigma2 on x, Var(delta) = sigma2/lambda.
  double sigma2 = 0.0;
  double lambda = 1.0;
  WeightLaw weight_law;
  std::uint64_t seed = 1;
};

void validate(const SimulationSpec& spec);

struct SimulatedData {
  Dataset dataset;
  double beta0 = 0.0;
  double beta1 = 0.0;
  std::vector<double> X;
  std::vector<double> Y;
};

/// Draws true X, sets Y on the line, and adds independent Gaussian errors.
/// A row with weight w is a group mean, so its known-variance errors are
/// drawn with variance var/w while the emitted var_x, var_y stay the
/// profile values.
SimulatedData generate_dataset(const SimulationSpec& spec);

struct GroupCount {
  long k = 0;
  long n_trials = 1;
  double weight = 1.0;
};

struct ProportionEstimate {
  double value = 0.0;
  double variance = 0.0;
  double weight = 1.0;
  bool floored = false;
};

/// Binomial first stage: p = k/n, var = p(1-p)/n; boundary proportions get
/// the floor 0.5/n^2 and are flagged.
std::vector<ProportionEstimate> estimate_group_proportions(
    const std::vector<GroupCount>& groups);

// Pairs two per-group estimates into first-stage records. Weights must agree.
std::vector<FirstStageRecord> pair_first_stage(
    const std::vector<ProportionEstimate>& z,
    const std::vector<ProportionEstimate>& w);

struct CoverageConfig {
  EstimatorSpec estimator;
  int replicates = 200;
  int bootstrap = 200;
  double level = 0.95;
  bool include_wls = true;
  ExecPolicy policy = ExecPolicy::parallel;
};

struct EstimatorCoverage {
  double coverage_beta0 = 0.0;
  double coverage_beta1 = 0.0;
  double mean_width_beta0 = 0.0;
  double mean_width_beta1 = 0.0;
  double mean_beta0 = 0.0;
  double mean_beta1 = 0.0;
  int n_ok = 0;
  int n_failed = 0;
};

struct ReplicateEstimate {
  std::size_t replicate = 0;
  bool deming_ok = false;
  double deming_beta0 = 0.0;
  double deming_beta1 = 0.0;
  std::pair<double, double> deming_ci_beta0{0.0, 0.0};
  std::pair<double, double> deming_ci_beta1{0.0, 0.0};
  bool wls_ok = false;
  double wls_beta0 = 0.0;
  double wls_beta1 = 0.0;
  std::pair<double, double> wls_ci_beta0{0.0, 0.0};
  std::pair<double, double> wls_ci_beta1{0.0, 0.0};
};

struct CoverageReport {
  EstimatorCoverage deming;
  std::optional<EstimatorCoverage> wls;
  // Fraction of replicates (both fits ok) with |beta1_wls| < |beta1_deming|.
  std::optional<double> attenuation_fraction;
  // More than 5% of replicates failed for some estimator.
  bool failure_budget_exceeded = false;
  std::vector<ReplicateEstimate> replicates;
};

/// Simulates M datasets, fits and bootstraps each, and reports how often the
/// percentile CIs contain the true coefficients. Replicate m draws its data
/// and bootstrap streams from stream_seed(spec.seed, ...), so serial and
/// parallel runs agree bit for bit.
CoverageReport run_coverage_study(const SimulationSpec& spec,
                                  const CoverageConfig& config);

}  // namespace deming
