#include "eukit/theorem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "eukit/errors.hpp"
#include "eukit/fd.hpp"

namespace eukit {

Vector lift_witness_u_to_U(const Vector& w, const Dimensions& dims) {
  const int c = dims.commodities();
  if (w.size() != 2 * c) throw DimensionError("lift_witness_u_to_U: direction has wrong size");
  if (w.norm() == 0.0) throw DomainError("lift_witness_u_to_U: zero direction");
  Vector v(dims.total());
  v.head(c) = w.head(c);
  for (int s = 0; s < dims.states(); ++s) v.segment(c * (s + 1), c) = w.tail(c);
  return v;
}

Vector project_witness_U_to_u(const Vector& v, const Dimensions& dims, int state) {
  const int c = dims.commodities();
  if (v.size() != dims.total()) throw DimensionError("project_witness_U_to_u: wrong size");
  if (state < 0 || state >= dims.states())
    throw DimensionError("project_witness_U_to_u: state out of range");
  Vector w(2 * c);
  w.head(c) = v.head(c);
  w.tail(c) = v.segment(c * (state + 1), c);
  return w;
}

int select_nonzero_state(const Vector& v, const Dimensions& dims) {
  const int c = dims.commodities();
  if (v.size() != dims.total()) throw DimensionError("select_nonzero_state: wrong size");
  // If v0 != 0 every pair works; otherwise some state block is nonzero
  // because v itself is nonzero. Pick the largest pair for robustness.
  int best = -1;
  double best_norm = -1.0;
  const double head = v.head(c).squaredNorm();
  for (int s = 0; s < dims.states(); ++s) {
    const double n = head + v.segment(c * (s + 1), c).squaredNorm();
    if (n > best_norm) {
      best_norm = n;
      best = s;
    }
  }
  if (!(best_norm > 0.0)) throw DomainError("select_nonzero_state: zero direction");
  return best;
}

namespace {

VnmOracle corrupt_state_gradient(const VnmOracle& u) {
  const int c = u.commodities();
  const ScalarField& f = u.field();
  auto value = [f](const Vector& x) { return f.value(x); };
  auto gradient = [f, c](const Vector& x) {
    Vector g = f.gradient(x);
    g.tail(c) = -g.tail(c);
    return g;
  };
  auto hessian = [f](const Vector& x) { return f.hessian(x); };
  return VnmOracle(c, ScalarField(2 * c, value, gradient, hessian, f.provenance()));
}

std::optional<Verdict> verdict_for(const CheckAllResult& r, Property p) {
  for (const auto& rep : r.reports)
    if (rep.property == p) return rep.verdict;
  return std::nullopt;
}

bool determinate(Verdict v) { return v != Verdict::indeterminate; }

}  // namespace

EquivalenceVerdict verify_equivalence(const VnmOracle& vnm, const ProbabilityWeights& weights,
                                      const Dimensions& dims, const TheoremConfig& cfg) {
  EquivalenceVerdict out;

  const CheckAllResult on_u = check_all(vnm, cfg.check);

  const VnmOracle assembled_from = cfg.inject_sign_flip ? corrupt_state_gradient(vnm) : vnm;
  const ExpectedUtility eu(assembled_from, weights, dims);
  const CheckAllResult on_eu = check_all(eu, cfg.check);

  const RestrictedUtility restricted(eu.as_field(), dims);
  const CheckAllResult on_restricted = check_all(restricted.as_vnm_oracle(), cfg.check);

  if (on_u.aborted || on_eu.aborted || on_restricted.aborted) {
    out.aborted = true;
    out.error = on_u.aborted ? on_u.error : (on_eu.aborted ? on_eu.error : on_restricted.error);
    out.consistent = false;
    return out;
  }

  const Property props[] = {Property::smoothness, Property::monotonicity,
                            Property::negative_definiteness, Property::boundary_divergence};
  for (Property p : props) {
    const auto vu = verdict_for(on_u, p);
    const auto vU = verdict_for(on_eu, p);
    const auto vr = verdict_for(on_restricted, p);
    if (!vu || !vU || !vr) continue;
    out.pairs.push_back({p, *vu, *vU, *vr});
    if (determinate(*vu) && determinate(*vU) && *vu != *vU)
      out.discrepancies.push_back({p, "u->U",
                                   std::string("u is ") + to_string(*vu) + " but U is " +
                                       to_string(*vU)});
    if (determinate(*vr) && determinate(*vu) && *vr != *vu)
      out.discrepancies.push_back({p, "U->u",
                                   std::string("restrict(U) is ") + to_string(*vr) +
                                       " but u is " + to_string(*vu)});
  }
  out.consistent = out.discrepancies.empty();
  return out;
}

namespace {

// Grid helpers for the brute-force oracle.
std::vector<double> log_spaced(int count, const SampleBox& box) {
  std::vector<double> out(count);
  const double llo = std::log(box.lo);
  const double lhi = std::log(box.hi);
  for (int i = 0; i < count; ++i)
    out[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / (count - 1));
  return out;
}

// Iterate the full grid over `dim` axes, invoking fn(point).
template <typename Fn>
void for_each_grid_point(int dim, const std::vector<double>& axis, Fn&& fn) {
  std::vector<int> idx(dim, 0);
  Vector x(dim);
  const int n = static_cast<int>(axis.size());
  while (true) {
    for (int d = 0; d < dim; ++d) x[d] = axis[idx[d]];
    fn(x);
    int d = 0;
    while (d < dim && ++idx[d] == n) idx[d++] = 0;
    if (d == dim) break;
  }
}

struct GridOutcome {
  bool smooth = true;
  bool monotone = true;
  bool nd = true;
};

// Pointwise grid tests: fd derivatives only, so the route is independent of
// the analytic pipeline.
GridOutcome grid_pointwise(const ScalarField& f, const std::vector<double>& axis,
                           const FdSteps& steps) {
  GridOutcome out;
  for_each_grid_point(f.dim(), axis, [&](const Vector& x) {
    auto value = [&f](const Vector& p) { return f.value(p); };
    const Vector g_fd = fd_gradient(value, x, steps);
    const Matrix h_fd = fd_hessian(value, x, steps);

    const FdConsistency fc = fd_consistency(f, x, steps);
    if (!(fc.gradient_ok && fc.hessian_ok && fc.symmetric_ok)) out.smooth = false;
    for (Eigen::Index j = 0; j < g_fd.size(); ++j)
      if (!(g_fd[j] > 0.0)) out.monotone = false;
    if (nd_by_eigenvalues_equilibrated(h_fd) != Definiteness::negative_definite) out.nd = false;
  });
  return out;
}

// Boundary diagnosis on a geometric schedule x * 2^-k: decrements of a
// divergent sequence do not shrink (constant for logs, doubling for powers),
// decrements of a convergent one decay geometrically.
enum class BruteSeq { divergent, convergent, undecided };

BruteSeq brute_sequence_class(const ScalarField& f, const Vector& base,
                              const std::vector<int>& driven, int doublings) {
  std::vector<double> values(doublings + 1);
  for (int k = 0; k <= doublings; ++k) {
    Vector x = base;
    const double scale = std::pow(2.0, -k);
    for (int i : driven) x[i] = base[i] * scale;
    values[k] = f.value(x);
  }
  double scale_abs = 0.0;
  for (double v : values) scale_abs = std::max(scale_abs, std::abs(v));
  const double slack = 1e-12 * (1.0 + scale_abs);

  bool decreasing = true;
  for (int k = 0; k + 1 <= doublings; ++k)
    if (values[k + 1] > values[k] + slack) decreasing = false;
  if (!decreasing) return BruteSeq::convergent;

  const double d_last = values[doublings] - values[doublings - 1];
  const double d_prev = values[doublings - 1] - values[doublings - 2];
  if (std::abs(d_prev) <= slack) return BruteSeq::convergent;  // flat tail
  const double ratio = d_last / d_prev;
  if (ratio >= 0.9) return BruteSeq::divergent;
  if (ratio <= 0.8) return BruteSeq::convergent;
  return BruteSeq::undecided;
}

struct BruteBoundary {
  Verdict verdict;
  bool non_closure = false;
};

BruteBoundary brute_boundary(const ScalarField& f, const std::vector<std::vector<int>>& blocks,
                             const BruteForceConfig& cfg) {
  const int dim = f.dim();
  std::vector<Vector> bases = {Vector::Ones(dim), Vector::Constant(dim, cfg.box.hi)};

  std::vector<std::vector<int>> driven_sets;
  for (int i = 0; i < dim; ++i) driven_sets.push_back({i});
  for (const auto& b : blocks)
    if (!b.empty() && static_cast<int>(b.size()) != dim) driven_sets.push_back(b);
  std::vector<int> all(dim);
  for (int i = 0; i < dim; ++i) all[i] = i;
  driven_sets.push_back(all);

  long divergent = 0, convergent = 0, undecided = 0;
  // Level-set closure probe: a sequence staying inside {F >= F(xbar)} while
  // approaching the boundary witnesses a non-closed upper contour set.
  const double level = f.value(Vector::Ones(dim));
  bool non_closure = false;

  for (const auto& base : bases) {
    for (const auto& driven : driven_sets) {
      const BruteSeq cls = brute_sequence_class(f, base, driven, cfg.boundary_doublings);
      if (cls == BruteSeq::divergent) ++divergent;
      if (cls == BruteSeq::convergent) ++convergent;
      if (cls == BruteSeq::undecided) ++undecided;
      if (cls != BruteSeq::convergent) continue;
      // A sequence converging to a limit at or above the level stays inside
      // {F >= F(xbar)} while its limit point sits on the boundary.
      double seq_min = std::numeric_limits<double>::infinity();
      for (int k = 0; k <= cfg.boundary_doublings; ++k) {
        Vector x = base;
        const double scale = std::pow(2.0, -k);
        for (int i : driven) x[i] = base[i] * scale;
        seq_min = std::min(seq_min, f.value(x));
      }
      if (seq_min >= level) non_closure = true;
    }
  }

  BruteBoundary out;
  out.non_closure = non_closure;
  if (convergent > 0)
    out.verdict = Verdict::fail;
  else if (undecided > 0)
    out.verdict = Verdict::indeterminate;
  else
    out.verdict = Verdict::pass;
  return out;
}

BruteForceVerdicts brute_on_field(const ScalarField& f,
                                  const std::vector<std::vector<int>>& blocks,
                                  const BruteForceConfig& cfg) {
  const auto axis = log_spaced(cfg.grid_per_axis, cfg.box);
  const GridOutcome grid = grid_pointwise(f, axis, FdSteps::relative_steps());
  const BruteBoundary boundary = brute_boundary(f, blocks, cfg);

  BruteForceVerdicts v;
  v.smoothness = grid.smooth ? Verdict::pass : Verdict::fail;
  v.monotonicity = grid.monotone ? Verdict::pass : Verdict::fail;
  v.negative_definiteness = grid.nd ? Verdict::pass : Verdict::fail;
  v.boundary_divergence = boundary.verdict;
  v.non_closure_flagged = boundary.non_closure;
  return v;
}

}  // namespace

BruteForceResult brute_force_oracle(const VnmOracle& vnm, const ProbabilityWeights& weights,
                                    const Dimensions& dims, const BruteForceConfig& cfg) {
  if (dims.total() > 3)
    throw DomainError("brute_force_oracle: grid oracle is restricted to G <= 3");
  if (cfg.grid_per_axis < 2) throw ConfigError("brute_force_oracle: grid too small");

  const ExpectedUtility eu(vnm, weights, dims);

  BruteForceResult out;
  out.on_vnm = brute_on_field(vnm.field(), pair_blocks(dims.commodities()), cfg);
  out.on_expected = brute_on_field(eu.as_field(), state_blocks(dims), cfg);
  return out;
}

namespace {

void compare_one(std::vector<Discrepancy>& out, Property p, Verdict brute, Verdict pipeline,
                 const char* side) {
  if (!determinate(brute) || !determinate(pipeline)) return;
  if (brute != pipeline)
    out.push_back({p, side,
                   std::string("brute-force says ") + to_string(brute) + ", pipeline says " +
                       to_string(pipeline)});
}

}  // namespace

std::vector<Discrepancy> compare_brute_force(const BruteForceResult& brute,
                                             const CheckAllResult& on_u,
                                             const CheckAllResult& on_eu) {
  std::vector<Discrepancy> out;
  struct Row {
    Property p;
    Verdict bu, bU;
  };
  const Row rows[] = {
      {Property::smoothness, brute.on_vnm.smoothness, brute.on_expected.smoothness},
      {Property::monotonicity, brute.on_vnm.monotonicity, brute.on_expected.monotonicity},
      {Property::negative_definiteness, brute.on_vnm.negative_definiteness,
       brute.on_expected.negative_definiteness},
      {Property::boundary_divergence, brute.on_vnm.boundary_divergence,
       brute.on_expected.boundary_divergence},
  };
  for (const Row& row : rows) {
    for (const auto& rep : on_u.reports)
      if (rep.property == row.p) compare_one(out, row.p, row.bu, rep.verdict, "u");
    for (const auto& rep : on_eu.reports)
      if (rep.property == row.p) compare_one(out, row.p, row.bU, rep.verdict, "U");
  }
  return out;
}

}  // namespace eukit
