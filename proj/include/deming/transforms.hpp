#pragma once

#include <span>
#include <string>
#include <string_view>

#include "deming/core_model.hpp"

namespace deming {

enum class TransformKind { identity, log, logit, power };

/// A monotone map f(c*z) with an analytic derivative. `scale` is the
/// pre-multiplier c; `exponent` is used by the power kind only.
struct TransformSpec {
  TransformKind kind = TransformKind::identity;
  double scale = 1.0;
  double exponent = 1.0;

  bool in_domain(double z) const noexcept;
  double apply(double z) const;
  // d/dz f(c z), including the chain-rule factor c.
  double derivative(double z) const;
  // Maps a transformed value back to the raw scale.
  double inverse(double x) const;

  std::string name() const;
};

std::string_view to_string(TransformKind k) noexcept;

// Builds a TransformSpec from CLI-style arguments; throws a usage Error on unknown names
// or invalid parameters.
TransformSpec make_transform(std::string_view kind, double scale = 1.0,
                             double exponent = 1.0);

// First-order delta method: f'(value)^2 * variance.
double propagate_variance(double value, double variance,
                          const TransformSpec& spec);

// Transforms every record; any domain violation aborts with a domain Error
// naming the row, and nothing is returned.
Dataset transform_dataset(std::span<const FirstStageRecord> records,
                          const TransformSpec& spec_x,
                          const TransformSpec& spec_y);

}  // namespace deming
