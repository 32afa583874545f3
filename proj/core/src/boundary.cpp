#include "eukit/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "eukit/errors.hpp"
#include "eukit/points.hpp"

namespace eukit {

const char* to_string(BoundaryMode m) {
  switch (m) {
    case BoundaryMode::single_coordinate_to_zero:
      return "single-coordinate-to-zero";
    case BoundaryMode::all_coordinates_to_zero:
      return "all-coordinates-to-zero";
    case BoundaryMode::coordinate_subset:
      return "coordinate-subset";
  }
  return "?";
}

Vector BoundarySequence::point_at(int n) const {
  if (n < 1 || n > length) throw DomainError("BoundarySequence: index out of schedule");
  Vector x = base;
  const double scale = 1.0 / static_cast<double>(n);
  for (int i : driven) x[i] = base[i] * scale;
  require_strictly_positive(x, "BoundarySequence point");
  return x;
}

std::string BoundarySequence::label() const {
  std::string s = to_string(mode);
  s += " [";
  for (size_t i = 0; i < driven.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(driven[i]);
  }
  s += "]";
  return s;
}

namespace {

struct LineFit {
  double slope = 0.0, intercept = 0.0, sse = 0.0;
};

LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  const size_t n = xs.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (f.intercept + f.slope * xs[i]);
    f.sse += r * r;
  }
  return f;
}

}  // namespace

SequenceTrend analyze_sequence(const std::function<double(const Vector&)>& value,
                               const BoundarySequence& seq, const BoundaryConfig& cfg) {
  const int n_len = seq.length;
  if (n_len < 20) throw ConfigError("boundary: schedule length must be >= 20");
  if (cfg.fit_tail < 3 || cfg.fit_tail > n_len)
    throw ConfigError("boundary: fit window must lie inside the schedule");

  SequenceTrend t;
  t.values.resize(n_len);
  double scale = 0.0;
  for (int n = 1; n <= n_len; ++n) {
    t.values[n - 1] = value(seq.point_at(n));
    scale = std::max(scale, std::abs(t.values[n - 1]));
  }
  const double slack = 1e-12 * (1.0 + scale);

  const int half = n_len / 2;
  t.tail_monotone_decreasing = true;
  for (int i = half; i + 1 < n_len; ++i)
    if (t.values[i + 1] > t.values[i] + slack) t.tail_monotone_decreasing = false;

  t.tail_min = *std::min_element(t.values.begin() + half, t.values.end());
  const double tail_max = *std::max_element(t.values.begin() + half, t.values.end());

  const double f_n = t.values[n_len - 1];
  const double f_half = t.values[n_len / 2 - 1];
  const double f_quarter = t.values[n_len / 4 - 1];
  const double d1 = f_n - f_half;
  const double d2 = f_half - f_quarter;
  t.decrement_ratio = std::abs(d2) > slack ? d1 / d2 : 0.0;

  // Least-squares fits over the tail window, value vs ln n and value vs n.
  std::vector<double> ln_n(cfg.fit_tail), lin_n(cfg.fit_tail), ys(cfg.fit_tail);
  for (int i = 0; i < cfg.fit_tail; ++i) {
    const int n = n_len - cfg.fit_tail + 1 + i;
    ln_n[i] = std::log(static_cast<double>(n));
    lin_n[i] = static_cast<double>(n);
    ys[i] = t.values[n - 1];
  }
  const LineFit fit_log = least_squares(ln_n, ys);
  const LineFit fit_lin = least_squares(lin_n, ys);
  t.slope_log = fit_log.slope;
  t.intercept_log = fit_log.intercept;
  t.sse_log = fit_log.sse;
  t.slope_lin = fit_lin.slope;
  t.intercept_lin = fit_lin.intercept;
  t.sse_lin = fit_lin.sse;
  t.better_model_is_linear = fit_lin.sse < fit_log.sse;

  const double k_max = *std::max_element(cfg.thresholds.begin(), cfg.thresholds.end());
  const bool raw_divergent = t.tail_monotone_decreasing && tail_max < -k_max;

  if (raw_divergent) {
    t.classification = SequenceClass::divergent;
  } else if (t.tail_monotone_decreasing) {
    const double better_slope = t.better_model_is_linear ? t.slope_lin : t.slope_log;
    if (t.decrement_ratio >= cfg.ratio_divergent && better_slope < 0.0)
      t.classification = SequenceClass::divergent;
    else if (t.decrement_ratio <= cfg.ratio_convergent)
      t.classification = SequenceClass::convergent;
    else
      t.classification = SequenceClass::undecided;
  } else {
    // No net decrease across the tail: bounded at sample scale.
    t.classification = f_n >= f_half - slack ? SequenceClass::convergent
                                             : SequenceClass::undecided;
  }

  // Threshold crossings: raw index where observed, otherwise extrapolated
  // from the better-fitting model when the trend is divergent. A decreasing
  // divergent trend crosses every level eventually; the index estimate is
  // capped so a crossing beyond double range still counts as a crossing.
  t.crossing_n.assign(cfg.thresholds.size(), std::numeric_limits<double>::infinity());
  t.crosses_all_thresholds = true;
  for (size_t k = 0; k < cfg.thresholds.size(); ++k) {
    const double level = -cfg.thresholds[k];
    for (int n = 1; n <= n_len; ++n) {
      if (t.values[n - 1] < level) {
        t.crossing_n[k] = n;
        break;
      }
    }
    if (std::isfinite(t.crossing_n[k])) continue;
    bool extrapolated = false;
    if (t.classification == SequenceClass::divergent) {
      if (t.better_model_is_linear && t.slope_lin < 0.0) {
        t.crossing_n[k] = (level - t.intercept_lin) / t.slope_lin;
        extrapolated = true;
      } else if (!t.better_model_is_linear && t.slope_log < 0.0) {
        const double arg = (level - t.intercept_log) / t.slope_log;
        t.crossing_n[k] = arg > 700.0 ? 1e300 : std::exp(arg);
        extrapolated = true;
      }
    }
    if (!extrapolated) t.crosses_all_thresholds = false;
  }

  return t;
}

std::vector<BoundarySequence> boundary_sequences_for_base(
    const Vector& base, const std::vector<std::vector<int>>& blocks, int length) {
  require_strictly_positive(base, "boundary base");
  const int dim = static_cast<int>(base.size());
  std::vector<BoundarySequence> out;
  for (int i = 0; i < dim; ++i)
    out.push_back({base, BoundaryMode::single_coordinate_to_zero, {i}, length});
  for (const auto& block : blocks) {
    if (block.empty() || static_cast<int>(block.size()) == dim) continue;
    out.push_back({base, BoundaryMode::coordinate_subset, block, length});
  }
  std::vector<int> all(dim);
  std::iota(all.begin(), all.end(), 0);
  out.push_back({base, BoundaryMode::all_coordinates_to_zero, all, length});
  return out;
}

std::vector<std::vector<int>> pair_blocks(int commodities) {
  std::vector<int> today(commodities), state(commodities);
  std::iota(today.begin(), today.end(), 0);
  std::iota(state.begin(), state.end(), commodities);
  return {today, state};
}

std::vector<std::vector<int>> state_blocks(const Dimensions& dims) {
  const int c = dims.commodities();
  std::vector<std::vector<int>> out;
  std::vector<int> today(c);
  std::iota(today.begin(), today.end(), 0);
  out.push_back(today);
  for (int s = 0; s < dims.states(); ++s) {
    std::vector<int> block(c);
    std::iota(block.begin(), block.end(), c * (s + 1));
    out.push_back(block);
  }
  return out;
}

}  // namespace eukit
