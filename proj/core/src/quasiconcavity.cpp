#include "eukit/quasiconcavity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "eukit/errors.hpp"
#include "eukit/families.hpp"
#include "eukit/fd.hpp"
#include "eukit/parallel.hpp"
#include "eukit/theorem.hpp"

namespace eukit {

Matrix tangent_basis(const Vector& gradient) {
  const Eigen::Index n = gradient.size();
  if (n < 2) throw DimensionError("tangent_basis: need ambient dimension >= 2");
  if (!(gradient.norm() > 0.0)) throw DomainError("tangent_basis: zero gradient");
  Eigen::HouseholderQR<Matrix> qr(gradient);
  const Matrix q = qr.householderQ();
  Matrix basis = q.rightCols(n - 1);
  // Contract checks: orthonormal and orthogonal to the gradient to 1e-12.
  const double ortho = (basis.transpose() * gradient).cwiseAbs().maxCoeff();
  if (ortho > 1e-12 * gradient.norm())
    throw DomainError("tangent_basis: basis not orthogonal to gradient");
  const Matrix gram = basis.transpose() * basis;
  if ((gram - Matrix::Identity(n - 1, n - 1)).cwiseAbs().maxCoeff() > 1e-12)
    throw DomainError("tangent_basis: basis not orthonormal");
  return basis;
}

TangentSpaceProbe TangentSpaceProbe::build(const Vector& point, const Vector& gradient,
                                           const Matrix& hessian) {
  TangentSpaceProbe p;
  p.point = point;
  p.gradient = gradient;
  p.basis = tangent_basis(gradient);
  Matrix projected = p.basis.transpose() * hessian * p.basis;
  p.projected_hessian = 0.5 * (projected + projected.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(p.projected_hessian);
  Eigen::Index arg_max = 0;
  es.eigenvalues().maxCoeff(&arg_max);
  p.max_eigenvalue = es.eigenvalues()[arg_max];
  p.max_direction = p.basis * es.eigenvectors().col(arg_max);
  p.max_direction.normalize();
  return p;
}

namespace {

std::uint64_t qc_seed(std::uint64_t seed, Property p) {
  return substream_seed(seed, 0x9c0 + static_cast<std::uint64_t>(p));
}

// Pointwise decision. Scaling precedes projection: with S the adaptive
// Jacobi scales of H, the matrix H is negative definite on the tangent
// space of g exactly when SHS is negative definite on the tangent space of
// Sg (substitute v = Sw). Deciding in the scaled frame keeps a -1e-9
// eigenvalue certifiable next to a -1e+9 one, which projection of the raw
// matrix cannot do in double precision.
struct QcPointDecision {
  Verdict verdict;
  Vector witness_direction;  // ambient, unit norm; meaningful for fail
  double witness_curvature = 0.0;
};

QcPointDecision qc_decide(const Vector& gradient, const Matrix& hessian, double tol_override) {
  QcPointDecision d{Verdict::pass, Vector(), 0.0};
  const Vector scales = adaptive_jacobi_scales(Vector(hessian.diagonal().cwiseAbs()));
  const auto sd = scales.asDiagonal();
  const Matrix h_scaled = sd * hessian * sd;
  const Vector g_scaled = scales.cwiseProduct(gradient);

  const Matrix basis = tangent_basis(g_scaled);
  Matrix projected = basis.transpose() * h_scaled * basis;
  projected = 0.5 * (projected + projected.transpose());
  const double tol =
      tol_override > 0 ? tol_override : 1e-9 * (1.0 + projected.cwiseAbs().maxCoeff());

  Eigen::SelfAdjointEigenSolver<Matrix> es(projected);
  Eigen::Index arg_max = 0;
  es.eigenvalues().maxCoeff(&arg_max);
  const double lambda_scaled = es.eigenvalues()[arg_max];

  if (lambda_scaled >= 0.0) {
    d.verdict = Verdict::fail;
    Vector ambient = scales.cwiseProduct(Vector(basis * es.eigenvectors().col(arg_max)));
    const double norm = ambient.norm();
    if (norm > 0.0) ambient /= norm;
    d.witness_direction = ambient;
    d.witness_curvature = ambient.dot(hessian * ambient);
  } else if (lambda_scaled < -tol) {
    d.verdict = Verdict::pass;
  } else {
    d.verdict = Verdict::indeterminate;
  }
  return d;
}

}  // namespace

PropertyReport check_diff_strict_quasiconcavity(const ScalarField& f, Target target,
                                                const CheckConfig& cfg) {
  if (cfg.samples < 1) throw ConfigError("check_diff_strict_quasiconcavity: samples must be >= 1");
  const std::uint64_t seed = qc_seed(cfg.seed, Property::diff_strict_quasiconcavity);

  struct Outcome {
    Verdict verdict = Verdict::pass;
    bool skipped = false;
    Vector point;
    Vector direction;
    double curvature = 0.0;
  };
  std::vector<Outcome> results(cfg.samples);
  parallel_for(cfg.samples, cfg.threads, [&](std::int64_t i) {
    Vector x = sample_point(f.dim(), cfg.box, seed, static_cast<std::uint64_t>(i));
    Outcome& o = results[i];
    o.point = x;
    const Vector g = f.gradient(x);
    if (g.norm() < 1e-12) {
      o.skipped = true;
      return;
    }
    const QcPointDecision d = qc_decide(g, f.hessian(x), cfg.qc_tolerance);
    o.verdict = d.verdict;
    if (d.verdict == Verdict::fail) {
      o.direction = d.witness_direction;
      o.curvature = d.witness_curvature;
    }
  });

  PropertyReport r;
  r.property = Property::diff_strict_quasiconcavity;
  r.target = target;
  r.samples_used = cfg.samples;
  r.seed = cfg.seed;
  long fails = 0, indet = 0, skipped = 0;
  for (const auto& o : results) {
    if (o.skipped) {
      ++skipped;
      continue;
    }
    if (o.verdict == Verdict::fail) {
      ++fails;
      if (static_cast<int>(r.witnesses.size()) < 8)
        r.witnesses.push_back({o.point, o.direction, o.curvature});
    } else if (o.verdict == Verdict::indeterminate) {
      ++indet;
    }
  }
  r.verdict = fails > 0 ? Verdict::fail : (indet > 0 ? Verdict::indeterminate : Verdict::pass);
  if (skipped > 0) r.note = std::to_string(skipped) + " points skipped (gradient below 1e-12)";
  return finalize_report(std::move(r));
}

PropertyReport verify_transfer_U_to_u(const ScalarField& source_u_big, const Dimensions& dims,
                                      const CheckConfig& cfg) {
  if (source_u_big.dim() != dims.total())
    throw DimensionError("verify_transfer_U_to_u: source dimension mismatch");

  PropertyReport r;
  r.property = Property::quasiconcavity_transfer;
  r.target = Target::vnm;  // the claim is about the restricted function
  r.samples_used = cfg.samples;
  r.seed = cfg.seed;

  // Precondition: U itself satisfies the tangent-space condition.
  const PropertyReport on_u_big =
      check_diff_strict_quasiconcavity(source_u_big, Target::expected, cfg);
  if (on_u_big.verdict != Verdict::pass) {
    r.verdict = Verdict::indeterminate;
    r.note = std::string("precondition-failed: U is ") + to_string(on_u_big.verdict) +
             " for the tangent-space condition";
    return finalize_report(std::move(r));
  }

  const RestrictedUtility restricted(source_u_big, dims);
  const VnmOracle r_oracle = restricted.as_vnm_oracle();

  // The restriction must pass; a determinate fail contradicts the proven
  // implication.
  const PropertyReport on_restricted =
      check_diff_strict_quasiconcavity(r_oracle.field(), Target::vnm, cfg);

  // Lift identity on sampled tangent frames: w tangent to the restricted
  // gradient lifts to v = (z, t, ..., t) tangent to DU at the diagonal point.
  const std::uint64_t seed = qc_seed(cfg.seed, Property::quasiconcavity_transfer);
  double max_residual = 0.0;
  Vector bad_point;
  const long lift_samples = std::min<long>(cfg.samples, 32);
  for (long i = 0; i < lift_samples; ++i) {
    const Vector pair = sample_point(2 * dims.commodities(), cfg.box, seed,
                                     static_cast<std::uint64_t>(i));
    const Vector g_restricted = restricted.gradient(pair);
    if (g_restricted.norm() < 1e-12) continue;
    const Vector g_big = source_u_big.gradient(embed_diagonal(pair, dims));
    const Matrix basis = tangent_basis(g_restricted);
    for (Eigen::Index col = 0; col < basis.cols(); ++col) {
      const Vector v = lift_witness_u_to_U(Vector(basis.col(col)), dims);
      const double residual = std::abs(g_big.dot(v));
      const double scale = g_big.norm() * v.norm();
      if (residual > 1e-10 * (1.0 + scale) && residual > max_residual) {
        max_residual = residual;
        bad_point = pair;
      }
    }
  }

  if (on_restricted.verdict == Verdict::fail || max_residual > 0.0) {
    r.verdict = Verdict::fail;
    r.witnesses = on_restricted.witnesses;
    if (r.witnesses.empty()) r.witnesses.push_back({bad_point, std::nullopt, max_residual});
    r.note = max_residual > 0.0
                 ? "lift tangency identity violated (residual " + std::to_string(max_residual) + ")"
                 : "restriction fails the tangent-space condition though U passes";
  } else if (on_restricted.verdict == Verdict::indeterminate) {
    r.verdict = Verdict::indeterminate;
    r.note = "restriction verdict indeterminate";
  } else {
    r.verdict = Verdict::pass;
  }
  return finalize_report(std::move(r));
}

TangencyDecomposition decompose_tangency(const Vector& v, const Vector& point_g,
                                         const VnmOracle& u, const ProbabilityWeights& weights,
                                         const Dimensions& dims) {
  const int c = dims.commodities();
  if (v.size() != dims.total()) throw DimensionError("decompose_tangency: wrong direction size");
  if (point_g.size() != dims.total()) throw DimensionError("decompose_tangency: wrong point size");
  if (!(v.norm() > 0.0)) throw DomainError("decompose_tangency: zero direction");

  TangencyDecomposition out;
  out.per_state = Vector::Zero(dims.states());
  const auto v0 = v.head(c);
  double term_scale = 0.0;
  bool all_tangent = true;
  for (int s = 0; s < dims.states(); ++s) {
    Vector pair(2 * c);
    pair.head(c) = point_g.head(c);
    pair.tail(c) = point_g.segment(c * (s + 1), c);
    const Vector g = u.gradient(pair);
    const double r0 = g.head(c).dot(v0);
    const double rs = g.tail(c).dot(v.segment(c * (s + 1), c));
    out.per_state[s] = r0 + rs;
    const double scale_s = std::abs(r0) + std::abs(rs);
    term_scale = std::max(term_scale, scale_s);
    if (std::abs(out.per_state[s]) > 1e-12 * (1.0 + scale_s)) all_tangent = false;
    out.aggregate += weights[s] * out.per_state[s];
  }

  // Identity check against the assembled gradient.
  const ExpectedUtility eu(u, weights, dims);
  const double du_v = eu.gradient(point_g).dot(v);
  if (std::abs(out.aggregate - du_v) > 1e-12 * (1.0 + std::abs(du_v) + term_scale))
    throw std::logic_error("decompose_tangency: weighted residuals do not reproduce DU.v");

  out.per_state_tangent = all_tangent;
  out.unresolved_regime =
      !all_tangent && std::abs(out.aggregate) <= 1e-10 * (1.0 + term_scale);
  return out;
}

Vector per_state_tangent_direction(const VnmOracle& u, const ProbabilityWeights& weights,
                                   const Dimensions& dims, const Vector& point_g,
                                   SplitMix64& rng) {
  (void)weights;
  const int c = dims.commodities();
  Vector v = Vector::Zero(dims.total());
  for (int i = 0; i < c; ++i) v[i] = rng.uniform(-1.0, 1.0);
  const auto v0 = v.head(c);
  for (int s = 0; s < dims.states(); ++s) {
    Vector pair(2 * c);
    pair.head(c) = point_g.head(c);
    pair.tail(c) = point_g.segment(c * (s + 1), c);
    const Vector g = u.gradient(pair);
    const auto gs = g.tail(c);
    const double r0 = g.head(c).dot(v0);
    // Minimum-norm solution of gs . vs = -r0 (gs is strictly positive for
    // monotone utilities, so the denominator cannot vanish there).
    const double denom = gs.squaredNorm();
    if (!(denom > 0.0)) throw DomainError("per_state_tangent_direction: zero state gradient");
    v.segment(c * (s + 1), c) = -(r0 / denom) * gs;
  }
  if (v.norm() == 0.0) v[0] = 1.0;
  v.normalize();
  return v;
}

SearchConfig SearchConfig::with_default_families() {
  SearchConfig cfg;
  cfg.families = {
      {"log-additive", {}}, {"crra", {2.0}},       {"sqrt-additive", {}},
      {"log-of-sum", {}},   {"linear", {}},        {"linear-plus-log", {}},
  };
  return cfg;
}

namespace {

struct SearchCell {
  std::string family;
  std::vector<double> params;
  VnmOracle oracle;
  ProbabilityWeights weights;
  Dimensions dims;
};

std::vector<ProbabilityWeights> search_weight_vectors(int states, int count) {
  std::vector<ProbabilityWeights> out;
  out.push_back(ProbabilityWeights::uniform(states));
  if (count > 1 && states > 1) {
    // Geometric skew a_s ~ 2^-s.
    Vector w(states);
    for (int s = 0; s < states; ++s) w[s] = std::pow(2.0, -(s + 1));
    w /= w.sum();
    out.push_back(ProbabilityWeights::make(w));
  }
  return out;
}

}  // namespace

SearchResult search_counterexample(const SearchConfig& cfg) {
  if (cfg.points_per_cell < 1) throw ConfigError("search: points_per_cell must be >= 1");
  if (cfg.budget < 1) throw ConfigError("search: budget must be >= 1");

  // Materialize the cell list in deterministic order.
  std::vector<SearchCell> cells;
  for (const auto& [dc, ds] : cfg.dims_grid) {
    const Dimensions dims(dc, ds);
    const auto weight_list = search_weight_vectors(ds, cfg.weight_vectors);
    for (const auto& weights : weight_list) {
      for (const auto& [name, params] : cfg.families)
        cells.push_back({name, params, builtin_family(name, params, dc), weights, dims});
      for (int a = 1; a <= cfg.tilt_grid; ++a)
        for (int b = 1; b <= cfg.tilt_grid; ++b) {
          const double alpha = 0.25 * a;
          const double beta = 0.25 * b;
          cells.push_back({"tilted", {alpha, beta}, tilted_family(alpha, beta, dc), weights,
                           dims});
        }
    }
  }

  SearchResult result;
  result.cells_total = static_cast<long>(cells.size());
  long evaluations = 0;

  for (size_t cell_idx = 0; cell_idx < cells.size(); ++cell_idx) {
    if (evaluations >= cfg.budget) {
      result.budget_exhausted = true;
      break;
    }
    const SearchCell& cell = cells[cell_idx];
    const std::uint64_t cell_seed = substream_seed(cfg.seed, 0xce11 + cell_idx);

    // u certificate: the tangent-space condition must hold cleanly on the
    // cell's own probe set, otherwise the cell is ineligible.
    double u_certificate = -std::numeric_limits<double>::infinity();
    bool eligible = true;
    for (long i = 0; i < cfg.points_per_cell && eligible; ++i) {
      if (evaluations >= cfg.budget) break;
      ++evaluations;
      const Vector pair = sample_point(2 * cell.dims.commodities(), cfg.box,
                                       substream_seed(cell_seed, 1), i);
      const Vector g = cell.oracle.gradient(pair);
      if (g.norm() < 1e-12) {
        eligible = false;
        break;
      }
      const TangentSpaceProbe probe =
          TangentSpaceProbe::build(pair, g, cell.oracle.hessian(pair));
      u_certificate = std::max(u_certificate, probe.max_eigenvalue);
      if (!(probe.max_eigenvalue < -cfg.emission_tolerance)) eligible = false;
    }
    if (!eligible) {
      ++result.cells_skipped;
      continue;
    }

    const ExpectedUtility eu(cell.oracle, cell.weights, cell.dims);
    for (long i = 0; i < cfg.points_per_cell; ++i) {
      if (evaluations >= cfg.budget) {
        result.budget_exhausted = true;
        break;
      }
      ++evaluations;
      const Vector x = sample_point(cell.dims.total(), cfg.box, substream_seed(cell_seed, 2), i);
      const Vector g = eu.gradient(x);
      if (g.norm() < 1e-12) continue;
      const BlockArrowHessian h = eu.hessian(x);
      const TangentSpaceProbe probe = TangentSpaceProbe::build(x, g, h.densify());
      if (!(probe.max_eigenvalue >= -cfg.emission_tolerance)) continue;

      // Candidate found; re-verify on both dense routes before emission.
      const Vector v = probe.max_direction;
      const double q_structured = h.quadratic_form(v);
      const double q_dense = v.dot(h.densify() * v);
      if (std::abs(q_structured - q_dense) > 1e-8 * (1.0 + std::abs(q_dense))) continue;
      auto value = [&eu](const Vector& p) { return eu.eval(p); };
      const Matrix h_fd = fd_hessian(value, x, FdSteps::relative_steps());
      const double q_fd = v.dot(h_fd * v);
      if (std::abs(q_fd - q_dense) > 1e-4 * (1.0 + std::abs(q_dense))) continue;

      SearchCandidate cand;
      cand.family = cell.family;
      cand.params = cell.params;
      cand.weights = cell.weights.values();
      cand.commodities = cell.dims.commodities();
      cand.states = cell.dims.states();
      cand.point = x;
      cand.direction = v;
      cand.gradient_residual = std::abs(g.dot(v));
      cand.curvature_value = q_structured;
      cand.u_certificate = u_certificate;
      result.candidates.push_back(std::move(cand));
    }
  }

  result.evaluations_used = evaluations;
  return result;
}

}  // namespace eukit
