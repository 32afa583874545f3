#pragma once

#include "eukit/errors.hpp"

namespace eukit {

// Problem dimensions: C commodities, S states of the world tomorrow.
// The ambient dimension G = C*(S+1) is always derived, never stored.
class Dimensions {
 public:
  Dimensions(int commodities, int states) : commodities_(commodities), states_(states) {
    if (commodities < 1) throw DimensionError("Dimensions: commodities must be >= 1");
    if (states < 1) throw DimensionError("Dimensions: states must be >= 1");
  }

  int commodities() const { return commodities_; }
  int states() const { return states_; }
  int total() const { return commodities_ * (states_ + 1); }
  // Dimension of the state-utility domain (today's bundle + one state's bundle).
  int pair_dim() const { return 2 * commodities_; }

  bool operator==(const Dimensions& o) const {
    return commodities_ == o.commodities_ && states_ == o.states_;
  }

 private:
  int commodities_;
  int states_;
};

}  // namespace eukit
