#include "deming/transforms.hpp"

#include <cmath>

#include "deming/error.hpp"

namespace deming {

std::string_view to_string(TransformKind k) noexcept {
  switch (k) {
    case TransformKind::identity: return "identity";
    case TransformKind::log: return "log";
    case TransformKind::logit: return "logit";
    case TransformKind::power: return "power";
  }
  return "?";
}

std::string TransformSpec::name() const { return std::string(to_string(kind)); }

bool TransformSpec::in_domain(double z) const noexcept {
  if (!std::isfinite(z)) return false;
  const double cz = scale * z;
  switch (kind) {
    case TransformKind::identity: return true;
    case TransformKind::log: return cz > 0.0;
    case TransformKind::logit: return cz > 0.0 && cz < 1.0;
    case TransformKind::power: return cz > 0.0;
  }
  return false;
}

double TransformSpec::apply(double z) const {
  const double cz = scale * z;
  switch (kind) {
    case TransformKind::identity: return cz;
    case TransformKind::log: return std::log(cz);
    case TransformKind::logit: return std::log(cz / (1.0 - cz));
    case TransformKind::power: return std::pow(cz, exponent);
  }
  return cz;
}

double TransformSpec::derivative(double z) const {
  switch (kind) {
    case TransformKind::identity: return scale;
    // d/dz log(c z) = 1/z; the scale cancels exactly.
    case TransformKind::log: return 1.0 / z;
    case TransformKind::logit: return 1.0 / (z * (1.0 - scale * z));
    case TransformKind::power:
      return exponent * scale * std::pow(scale * z, exponent - 1.0);
  }
  return 1.0;
}

double TransformSpec::inverse(double x) const {
  switch (kind) {
    case TransformKind::identity: return x / scale;
    case TransformKind::log: return std::exp(x) / scale;
    case TransformKind::logit: return 1.0 / (1.0 + std::exp(-x)) / scale;
    case TransformKind::power: return std::pow(x, 1.0 / exponent) / scale;
  }
  return x;
}

TransformSpec make_transform(std::string_view kind, double scale,
                             double exponent) {
  TransformSpec spec;
  if (kind == "identity") {
    spec.kind = TransformKind::identity;
  } else if (kind == "log") {
    spec.kind = TransformKind::log;
  } else if (kind == "logit") {
    spec.kind = TransformKind::logit;
  } else if (kind == "power") {
    spec.kind = TransformKind::power;
  } else {
    throw Error(ErrorKind::usage, "unknown transform '" + std::string(kind) +
                                      "' (expected identity|log|logit|power)");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorKind::usage, "transform scale must be positive");
  }
  if (spec.kind == TransformKind::power &&
      (!(exponent > 0.0) || !std::isfinite(exponent))) {
    throw Error(ErrorKind::usage, "power exponent must be positive");
  }
  spec.scale = scale;
  spec.exponent = exponent;
  return spec;
}

double propagate_variance(double value, double variance,
                          const TransformSpec& spec) {
  if (!spec.in_domain(value)) {
    throw Error(ErrorKind::domain, "value " + format_double(value) +
                                       " outside the domain of transform " +
                                       spec.name());
  }
  if (!(variance >= 0.0)) {
    throw Error(ErrorKind::validation, "variance must be nonnegative");
  }
  const double d = spec.derivative(value);
  return d * d * variance;
}

Dataset transform_dataset(std::span<const FirstStageRecord> records,
                          const TransformSpec& spec_x,
                          const TransformSpec& spec_y) {
  std::vector<Observation> obs;
  obs.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    validate(r, i);
    if (!spec_x.in_domain(r.z)) {
      throw Error(ErrorKind::domain, "row " + std::to_string(i + 1) + ": z = " +
                                         format_double(r.z) +
                                         " outside the domain of transform " +
                                         spec_x.name());
    }
    if (!spec_y.in_domain(r.w)) {
      throw Error(ErrorKind::domain, "row " + std::to_string(i + 1) + ": w = " +
                                         format_double(r.w) +
                                         " outside the domain of transform " +
                                         spec_y.name());
    }
    obs.push_back({spec_x.apply(r.z), spec_y.apply(r.w),
                   propagate_variance(r.z, r.var_z, spec_x),
                   propagate_variance(r.w, r.var_w, spec_y), r.weight});
  }
  return Dataset(std::move(obs));
}

}  // namespace deming
