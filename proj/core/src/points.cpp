#include "eukit/points.hpp"

#include <string>

namespace eukit {

void require_strictly_positive(const Vector& x, const char* what) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0))
      throw DomainError(std::string(what) + ": coordinate " + std::to_string(i) +
                        " is not strictly positive");
  }
}

Point2C::Point2C(Vector today, Vector state) : x0(std::move(today)), xs(std::move(state)) {
  if (x0.size() != xs.size()) throw DimensionError("Point2C: bundle sizes differ");
  if (x0.size() < 1) throw DimensionError("Point2C: empty bundle");
  require_strictly_positive(x0, "Point2C.x0");
  require_strictly_positive(xs, "Point2C.xs");
}

Point2C::Point2C(const Vector& flat) {
  if (flat.size() < 2 || flat.size() % 2 != 0)
    throw DimensionError("Point2C: flat vector must have even positive size");
  const Eigen::Index c = flat.size() / 2;
  x0 = flat.head(c);
  xs = flat.tail(c);
  require_strictly_positive(x0, "Point2C.x0");
  require_strictly_positive(xs, "Point2C.xs");
}

Vector Point2C::flat() const {
  Vector out(x0.size() + xs.size());
  out << x0, xs;
  return out;
}

PointG::PointG(Vector today, std::vector<Vector> state_bundles)
    : x0(std::move(today)), states(std::move(state_bundles)) {
  if (x0.size() < 1) throw DimensionError("PointG: empty today bundle");
  if (states.empty()) throw DimensionError("PointG: need at least one state bundle");
  require_strictly_positive(x0, "PointG.x0");
  for (size_t s = 0; s < states.size(); ++s) {
    if (states[s].size() != x0.size())
      throw DimensionError("PointG: state bundle " + std::to_string(s + 1) + " has wrong size");
    require_strictly_positive(states[s], "PointG.state");
  }
}

PointG::PointG(const Vector& flat, const Dimensions& dims) {
  if (flat.size() != dims.total())
    throw DimensionError("PointG: flat vector size does not match dimensions");
  const int c = dims.commodities();
  x0 = flat.head(c);
  require_strictly_positive(x0, "PointG.x0");
  states.reserve(dims.states());
  for (int s = 0; s < dims.states(); ++s) {
    states.push_back(flat.segment(c * (s + 1), c));
    require_strictly_positive(states.back(), "PointG.state");
  }
}

Vector PointG::flat() const {
  const Eigen::Index c = x0.size();
  Vector out(c * static_cast<Eigen::Index>(states.size() + 1));
  out.head(c) = x0;
  for (size_t s = 0; s < states.size(); ++s)
    out.segment(c * static_cast<Eigen::Index>(s + 1), c) = states[s];
  return out;
}

}  // namespace eukit
