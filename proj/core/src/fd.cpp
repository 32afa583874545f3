#include "eukit/fd.hpp"

#include <cmath>
#include <string>

#include "eukit/errors.hpp"

namespace eukit {

namespace {

double step_at(double step, double coord, bool relative) {
  return relative ? step * coord : step;
}

// Positive-orthant guard covering the compound gradient-inside-Hessian
// stencil: each coordinate must survive the outer and inner step together.
void check_orthant(const Vector& x, const FdSteps& steps, bool for_hessian) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double budget = step_at(steps.gradient_step, x[i], steps.relative);
    if (for_hessian) budget += step_at(steps.hessian_step, x[i], steps.relative);
    if (!(x[i] - budget > 0.0))
      throw DomainError("fd: perturbation at coordinate " + std::to_string(i) +
                        " leaves the positive orthant");
  }
}

Vector fd_gradient_unchecked(const ValueFn& f, const Vector& x, const FdSteps& steps) {
  Vector g(x.size());
  Vector xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = step_at(steps.gradient_step, x[i], steps.relative);
    xp[i] = x[i] + h;
    const double fp = f(xp);
    xp[i] = x[i] - h;
    const double fm = f(xp);
    xp[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace

Vector fd_gradient(const ValueFn& f, const Vector& x, const FdSteps& steps) {
  check_orthant(x, steps, /*for_hessian=*/false);
  return fd_gradient_unchecked(f, x, steps);
}

Matrix fd_hessian_raw(const ValueFn& f, const Vector& x, const FdSteps& steps) {
  check_orthant(x, steps, /*for_hessian=*/true);
  const Eigen::Index n = x.size();
  Matrix h(n, n);
  Vector xp = x;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double hj = step_at(steps.hessian_step, x[j], steps.relative);
    xp[j] = x[j] + hj;
    const Vector gp = fd_gradient_unchecked(f, xp, steps);
    xp[j] = x[j] - hj;
    const Vector gm = fd_gradient_unchecked(f, xp, steps);
    xp[j] = x[j];
    h.col(j) = (gp - gm) / (2.0 * hj);
  }
  return h;
}

Matrix fd_hessian(const ValueFn& f, const Vector& x, const FdSteps& steps) {
  const Matrix raw = fd_hessian_raw(f, x, steps);
  // Plain symmetrization; the 1e-8 contract check is for analytic oracles.
  return Matrix(0.5 * (raw + raw.transpose()));
}

double fd_gradient_step_at(const FdSteps& steps, double coord) {
  return step_at(steps.gradient_step, coord, steps.relative);
}

double fd_hessian_step_at(const FdSteps& steps, double coord) {
  return step_at(steps.hessian_step, coord, steps.relative);
}

FdConsistency fd_consistency(const ScalarField& f, const Vector& x, const FdSteps& steps) {
  constexpr double kEps = 2.220446049250313e-16;
  constexpr double kSafety = 16.0;
  const Eigen::Index n = x.size();

  auto value = [&f](const Vector& p) { return f.value(p); };
  const Vector g_fd = fd_gradient(value, x, steps);
  const Matrix h_raw = fd_hessian_raw(value, x, steps);

  FdConsistency out;
  const bool analytic = f.provenance() == DerivativeProvenance::analytic;
  const Vector g = analytic ? f.gradient(x) : g_fd;

  // Magnitude actually flowing through the stencils: the value plus the
  // per-coordinate first-order terms (a separable sum can have |f| near 0
  // while its terms are large).
  const double noise_scale =
      1.0 + std::abs(f.value(x)) + x.cwiseProduct(g).cwiseAbs().sum();

  Vector hg(n), hh(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    hg[i] = fd_gradient_step_at(steps, x[i]);
    hh[i] = fd_hessian_step_at(steps, x[i]);
  }

  if (analytic) {
    out.compared_analytic = true;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double tol =
          1e-6 * (1.0 + std::abs(g[j])) + kSafety * kEps * noise_scale / hg[j];
      const double err = std::abs(g_fd[j] - g[j]);
      if (err > tol) {
        out.gradient_ok = false;
        out.worst_defect = std::max(out.worst_defect, err - tol);
      }
    }
    const Matrix h = f.hessian(x);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) {
        const double tol = 1e-4 * (1.0 + std::abs(h(a, b))) +
                           kSafety * kEps * noise_scale / (hg[a] * hh[b]);
        const double err = std::abs(0.5 * (h_raw(a, b) + h_raw(b, a)) - h(a, b));
        if (err > tol) {
          out.hessian_ok = false;
          out.worst_defect = std::max(out.worst_defect, err - tol);
        }
      }
  }

  const double h_scale = 1.0 + h_raw.cwiseAbs().maxCoeff();
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const double tol = 1e-4 * h_scale + kSafety * kEps * noise_scale *
                                              (1.0 / (hg[a] * hh[b]) + 1.0 / (hg[b] * hh[a]));
      const double err = std::abs(h_raw(a, b) - h_raw(b, a));
      if (err > tol) {
        out.symmetric_ok = false;
        out.worst_defect = std::max(out.worst_defect, err - tol);
      }
    }
  return out;
}

ScalarField fd_field(ValueFn value, int dim, const FdSteps& steps) {
  auto grad = [value, steps](const Vector& x) { return fd_gradient(value, x, steps); };
  auto hess = [value, steps](const Vector& x) { return fd_hessian(value, x, steps); };
  return ScalarField(dim, std::move(value), std::move(grad), std::move(hess),
                     DerivativeProvenance::finite_difference);
}

VnmOracle fd_oracle(ValueFn value, int commodities, const FdSteps& steps) {
  return VnmOracle(commodities, fd_field(std::move(value), 2 * commodities, steps));
}

VnmOracle fd_oracle(ValueFn value, int commodities, double step) {
  if (!(step > 0.0)) throw DomainError("fd_oracle: step must be > 0");
  return fd_oracle(std::move(value), commodities, FdSteps::absolute(step, 10.0 * step));
}

}  // namespace eukit
