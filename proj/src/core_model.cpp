#include "deming/core_model.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "deming/error.hpp"

namespace deming {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::usage: return "usage";
    case ErrorKind::io: return "io";
    case ErrorKind::parse: return "parse";
    case ErrorKind::validation: return "validation";
    case ErrorKind::insufficient_data: return "insufficient_data";
    case ErrorKind::degenerate_fit: return "degenerate_fit";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::singular_weight: return "singular_weight";
    case ErrorKind::domain: return "domain";
    case ErrorKind::singular_likelihood: return "singular_likelihood";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::usage: return 2;
    case ErrorKind::io: return 3;
    case ErrorKind::parse: return 4;
    case ErrorKind::validation: return 5;
    case ErrorKind::insufficient_data: return 6;
    case ErrorKind::degenerate_fit: return 7;
    case ErrorKind::convergence: return 8;
    case ErrorKind::singular_weight: return 9;
    case ErrorKind::domain: return 10;
    case ErrorKind::singular_likelihood: return 11;
  }
  return 1;
}

namespace {

bool all_finite(std::initializer_list<double> vals) {
  for (double v : vals) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::string row_label(std::size_t row) {
  return "row " + std::to_string(row + 1);
}

}  // namespace

void validate(const Observation& o, std::size_t row) {
  if (!all_finite({o.x, o.y, o.var_x, o.var_y, o.weight})) {
    throw Error(ErrorKind::validation, row_label(row) + ": non-finite value");
  }
  if (o.var_x < 0.0) {
    throw Error(ErrorKind::validation, row_label(row) + ": negative var_x");
  }
  if (o.var_y < 0.0) {
    throw Error(ErrorKind::validation, row_label(row) + ": negative var_y");
  }
  if (o.weight <= 0.0) {
    throw Error(ErrorKind::validation,
                row_label(row) + ": weight must be positive");
  }
}

void validate(const FirstStageRecord& r, std::size_t row) {
  if (!all_finite({r.z, r.w, r.var_z, r.var_w, r.weight})) {
    throw Error(ErrorKind::validation, row_label(row) + ": non-finite value");
  }
  if (r.var_z < 0.0) {
    throw Error(ErrorKind::validation, row_label(row) + ": negative var_z");
  }
  if (r.var_w < 0.0) {
    throw Error(ErrorKind::validation, row_label(row) + ": negative var_w");
  }
  if (r.weight <= 0.0) {
    throw Error(ErrorKind::validation,
                row_label(row) + ": weight must be positive");
  }
}

Dataset::Dataset(std::vector<Observation> observations)
    : obs_(std::move(observations)) {
  for (std::size_t i = 0; i < obs_.size(); ++i) validate(obs_[i], i);
}

std::uint64_t Dataset::fingerprint() const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](double v) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int k = 0; k < 8; ++k) {
      h ^= (bits >> (8 * k)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& o : obs_) {
    mix(o.x);
    mix(o.y);
    mix(o.var_x);
    mix(o.var_y);
    mix(o.weight);
  }
  return h;
}

void require_fit_size(const Dataset& dataset) {
  if (dataset.size() < 3) {
    throw Error(ErrorKind::insufficient_data,
                "at least 3 observations are required, got " +
                    std::to_string(dataset.size()));
  }
}

std::string_view to_string(Scenario s) noexcept {
  switch (s) {
    case Scenario::A: return "A";
    case Scenario::B: return "B";
    case Scenario::C: return "C";
    case Scenario::wls: return "WLS";
  }
  return "?";
}

Scenario parse_scenario(std::string_view s) {
  if (s == "A" || s == "a") return Scenario::A;
  if (s == "B" || s == "b") return Scenario::B;
  if (s == "C" || s == "c") return Scenario::C;
  if (s == "WLS" || s == "wls") return Scenario::wls;
  throw Error(ErrorKind::usage, "unknown scenario '" + std::string(s) + "'");
}

std::string_view to_string(CovMethod m) noexcept {
  switch (m) {
    case CovMethod::none: return "none";
    case CovMethod::jackknife: return "jackknife";
    case CovMethod::williamson: return "williamson";
    case CovMethod::wls: return "wls";
    case CovMethod::bootstrap: return "bootstrap";
  }
  return "?";
}

CovMethod parse_cov_method(std::string_view s) {
  for (auto m : {CovMethod::none, CovMethod::jackknife, CovMethod::williamson,
                 CovMethod::wls, CovMethod::bootstrap}) {
    if (to_string(m) == s) return m;
  }
  throw Error(ErrorKind::parse, "unknown cov_method '" + std::string(s) + "'");
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

double parse_number(std::string_view field, std::size_t row,
                    std::string_view column) {
  double v = 0.0;
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw Error(ErrorKind::parse, row_label(row) + ", column '" +
                                      std::string(column) +
                                      "': malformed number '" +
                                      std::string(field) + "'");
  }
  return v;
}

// Locates the four required columns and the optional weight column.
std::vector<std::array<double, 5>> read_table(
    std::istream& in, const std::array<std::string_view, 5>& names) {
  const auto table = read_csv(in);
  std::array<std::optional<std::size_t>, 5> index;
  for (std::size_t k = 0; k < names.size(); ++k) {
    index[k] = table.column(names[k]);
    if (k < 4 && !index[k]) {
      throw Error(ErrorKind::parse,
                  "missing required column '" + std::string(names[k]) + "'");
    }
  }
  std::vector<std::array<double, 5>> rows;
  rows.reserve(table.rows.size());
  for (const auto& fields : table.rows) {
    std::array<double, 5> r{0, 0, 0, 0, 1.0};
    for (std::size_t k = 0; k < 5; ++k) {
      if (index[k]) r[k] = fields[*index[k]];
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == name) return c;
  }
  return std::nullopt;
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) break;
    line.clear();
  }
  if (trim(line).empty()) throw Error(ErrorKind::parse, "missing header row");
  for (auto f : split_fields(line)) {
    if (std::find(table.header.begin(), table.header.end(), f) !=
        table.header.end()) {
      throw Error(ErrorKind::parse, "duplicate column '" + std::string(f) + "'");
    }
    table.header.emplace_back(f);
  }
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != table.header.size()) {
      throw Error(ErrorKind::parse,
                  row_label(row) + ": expected " +
                      std::to_string(table.header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    std::vector<double> values(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      values[c] = parse_number(fields[c], row, table.header[c]);
    }
    table.rows.push_back(std::move(values));
    ++row;
  }
  return table;
}

Dataset parse_dataset(std::istream& in) {
  auto rows = read_table(in, {"x", "y", "var_x", "var_y", "weight"});
  std::vector<Observation> obs;
  obs.reserve(rows.size());
  for (const auto& r : rows) obs.push_back({r[0], r[1], r[2], r[3], r[4]});
  Dataset ds(std::move(obs));
  require_fit_size(ds);
  return ds;
}

Dataset parse_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  return parse_dataset(in);
}

std::vector<FirstStageRecord> parse_first_stage(std::istream& in) {
  auto rows = read_table(in, {"z", "w", "var_z", "var_w", "weight"});
  std::vector<FirstStageRecord> recs;
  recs.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    FirstStageRecord rec{r[0], r[1], r[2], r[3], r[4]};
    validate(rec, i);
    recs.push_back(rec);
  }
  if (recs.size() < 3) {
    throw Error(ErrorKind::insufficient_data,
                "at least 3 observations are required, got " +
                    std::to_string(recs.size()));
  }
  return recs;
}

CsvSchema detect_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    for (auto f : split_fields(line)) {
      if (f == "x") return CsvSchema::observations;
      if (f == "z") return CsvSchema::first_stage;
    }
    break;
  }
  throw Error(ErrorKind::parse,
              "'" + path + "': header has neither an x nor a z column");
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
  out << "x,y,var_x,var_y,weight\n";
  for (const auto& o : dataset) {
    out << format_double(o.x) << ',' << format_double(o.y) << ','
        << format_double(o.var_x) << ',' << format_double(o.var_y) << ','
        << format_double(o.weight) << '\n';
  }
}

Dataset apply_weights(const Dataset& dataset) {
  std::vector<Observation> obs;
  obs.reserve(dataset.size());
  for (const auto& o : dataset) {
    obs.push_back({o.x, o.y, o.effective_var_x(), o.effective_var_y(), 1.0});
  }
  return Dataset(std::move(obs));
}

}  // namespace deming
