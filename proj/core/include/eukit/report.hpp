#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eukit/types.hpp"

namespace eukit {

enum class Property {
  smoothness,
  monotonicity,
  negative_definiteness,
  boundary_divergence,
  diff_strict_quasiconcavity,
  quasiconcavity_transfer,
};

enum class Target { vnm, expected };
enum class Verdict { pass, fail, indeterminate };

const char* to_string(Property p);
const char* to_string(Target t);
const char* to_string(Verdict v);

// A concrete failure (or near-failure) location: the sampled point, an
// optional direction, and the residual that violated the property.
struct Witness {
  Vector point;
  std::optional<Vector> direction;
  double residual = 0.0;
};

struct PropertyReport {
  Property property;
  Target target;
  Verdict verdict;
  std::vector<Witness> witnesses;
  long samples_used = 0;
  std::uint64_t seed = 0;
  std::string note;  // optional commentary (proxy caveats, hypothesis flags)
};

// Enforces the report invariants (fail => witnesses nonempty, pass =>
// witnesses empty); throws std::logic_error on violation since that is an
// internal bug, not a data error.
PropertyReport finalize_report(PropertyReport r);

}  // namespace eukit
