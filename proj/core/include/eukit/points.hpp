#pragma once

#include <vector>

#include "eukit/dimensions.hpp"
#include "eukit/errors.hpp"
#include "eukit/types.hpp"

namespace eukit {

// A point of the strictly positive orthant R_{++}^{2C}: today's bundle x0
// paired with one state's bundle xs.
struct Point2C {
  Vector x0;
  Vector xs;

  Point2C(Vector today, Vector state);
  explicit Point2C(const Vector& flat);  // first C coords = x0, last C = xs

  int commodities() const { return static_cast<int>(x0.size()); }
  Vector flat() const;
};

// A point of R_{++}^{G}: today's bundle followed by the S state bundles.
struct PointG {
  Vector x0;
  std::vector<Vector> states;

  PointG(Vector today, std::vector<Vector> state_bundles);
  PointG(const Vector& flat, const Dimensions& dims);

  int commodities() const { return static_cast<int>(x0.size()); }
  int state_count() const { return static_cast<int>(states.size()); }
  Vector flat() const;  // layout: x0 block, then states ascending
};

// Throws DomainError unless every coordinate is strictly positive.
void require_strictly_positive(const Vector& x, const char* what);

}  // namespace eukit
