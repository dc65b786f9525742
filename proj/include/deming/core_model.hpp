#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace deming {

/// Raw-scale first-stage value pair with the variances of its errors.
struct FirstStageRecord {
  double z = 0.0;
  double w = 0.0;
  double var_z = 0.0;
  double var_w = 0.0;
  double weight = 1.0;
};

/// Second-stage (transformed) observation. Variances are the first-stage
/// error variances on the transformed scale, before weight division.
struct Observation {
  double x = 0.0;
  double y = 0.0;
  double var_x = 0.0;
  double var_y = 0.0;
  double weight = 1.0;

  // Variances after dividing by the group frequency.
  double effective_var_x() const noexcept { return var_x / weight; }
  double effective_var_y() const noexcept { return var_y / weight; }
};

// Throws a validation Error unless every field is finite, both variances are
// nonnegative and the weight is positive. `row` is used in the message only.
void validate(const Observation& obs, std::size_t row);
void validate(const FirstStageRecord& rec, std::size_t row);

/// Immutable ordered collection of observations.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<Observation> observations);

  std::size_t size() const noexcept { return obs_.size(); }
  bool empty() const noexcept { return obs_.empty(); }
  const Observation& operator[](std::size_t i) const { return obs_[i]; }
  std::span<const Observation> observations() const noexcept { return obs_; }
  auto begin() const noexcept { return obs_.begin(); }
  auto end() const noexcept { return obs_.end(); }

  // FNV-1a over the bit patterns of every field, in row order.
  std::uint64_t fingerprint() const noexcept;

 private:
  std::vector<Observation> obs_;
};

// Throws an insufficient_data Error when fewer than 3 observations are present.
void require_fit_size(const Dataset& dataset);

enum class Scenario { A, B, C, wls };

std::string_view to_string(Scenario s) noexcept;
Scenario parse_scenario(std::string_view s);

/// Symmetric 2x2 covariance of (beta0, beta1).
struct Cov2 {
  double b00 = 0.0;
  double b01 = 0.0;
  double b11 = 0.0;
};

enum class CovMethod { none, jackknife, williamson, wls, bootstrap };

std::string_view to_string(CovMethod m) noexcept;
CovMethod parse_cov_method(std::string_view s);

struct DemingFit {
  double beta0 = 0.0;
  double beta1 = 0.0;
  double sigma2 = 0.0;
  double lambda = 1.0;
  Cov2 cov_params;
  CovMethod cov_method = CovMethod::none;
  std::optional<double> loglik;
  double residual_sd = 0.0;
  Scenario scenario = Scenario::A;
  int n_iterations = 0;
  bool converged = true;
  // Scenario C only: sigma2 settled on its lower bound.
  bool boundary = false;
  // WLS only: weighted residual mean square, sum(w r^2)/(n-2).
  std::optional<double> mse;
  std::size_t n = 0;
  std::uint64_t fingerprint = 0;
};

struct TrueValueEstimates {
  std::vector<double> X_hat;
  std::vector<double> Y_hat;
  std::vector<double> d;
};

struct SimpleDemingSummary {
  double u = 0.0;
  double q = 0.0;
  double p = 0.0;
  double x_bar = 0.0;
  double y_bar = 0.0;
};

/// Header-addressed numeric table read from comma-separated text.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::optional<std::size_t> column(std::string_view name) const;
};

// Reads a header row and numeric data rows. Every data row must have as many
// fields as the header; malformed numbers raise a parse Error naming the row
// and column.
CsvTable read_csv(std::istream& in);

/// Which header set a CSV source carries.
enum class CsvSchema { observations, first_stage };

// Parses `x,y,var_x,var_y[,weight]` (columns located by header name, any
// order). LF or CRLF line endings; blank lines are skipped.
Dataset parse_dataset(std::istream& in);
Dataset parse_dataset_file(const std::string& path);

// Same contract for `z,w,var_z,var_w[,weight]`.
std::vector<FirstStageRecord> parse_first_stage(std::istream& in);

// Reads the header line of a file and reports which schema it follows.
CsvSchema detect_schema(const std::string& path);

// Writes the x,y,var_x,var_y,weight form with shortest round-trip decimals.
void write_dataset(std::ostream& out, const Dataset& dataset);

// Divides each variance by its weight and resets the weight to 1.
Dataset apply_weights(const Dataset& dataset);

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

}  // namespace deming
