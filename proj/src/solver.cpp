#include "polmin/solver.hpp"

#include <algorithm>
#include <cmath>

#include "polmin/errors.hpp"
#include "polmin/vec_ops.hpp"

namespace polmin {

SpdOperator::SpdOperator(const Graph& g, std::vector<double> shift)
    : g_(&g), shift_(std::move(shift)) {
  if (shift_.size() != g.num_vertices())
    throw ValidationError("SpdOperator: shift length mismatch");
  for (double d : shift_)
    if (!(d >= 1.0 - 1e-12))
      throw ValidationError("SpdOperator: diagonal shift must be >= 1");
}

SpdOperator SpdOperator::identity_plus_laplacian(const Graph& g) {
  return SpdOperator(g, std::vector<double>(g.num_vertices(), 1.0));
}

void SpdOperator::matvec(std::span<const double> v,
                         std::span<double> out) const {
  g_->laplacian_matvec(v, out);
  for (std::size_t i = 0; i < shift_.size(); ++i) out[i] += shift_[i] * v[i];
}

std::vector<double> SpdOperator::matvec(std::span<const double> v) const {
  std::vector<double> out(size());
  matvec(v, out);
  return out;
}

std::vector<double> solve(const SpdOperator& op, std::span<const double> b,
                          double eps, const SolveOptions& opts) {
  const std::size_t n = op.size();
  if (b.size() != n) throw ValidationError("solve: rhs length mismatch");
  if (!(eps > 0.0)) throw ValidationError("solve: eps must be positive");
  const double bnorm = vec::nrm2(b);
  if (!std::isfinite(bnorm)) throw ValidationError("solve: rhs not finite");

  std::vector<double> x(n, 0.0);
  if (bnorm == 0.0) return x;

  // An absolute residual below ~||b|| * machine-eps * ||M|| is not
  // representable in double, hence the scale-aware floor.
  const double target = std::max(eps, 1e-14 * (1.0 + bnorm));
  const std::size_t cap = opts.max_iters ? opts.max_iters : 10 * n + 1000;

  // Jacobi symmetric scaling: run the recurrence on D^-1/2 M D^-1/2 with
  // D = diag(M). Degree-skewed graphs otherwise dominate the condition
  // number; the stopping rule stays on the *unscaled* residual ||b - M x||.
  const Graph& g = op.graph();
  std::vector<double> dsq(n), dinv(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = op.shift()[i] + g.weighted_degree(i);
    dsq[i] = std::sqrt(d);
    dinv[i] = 1.0 / dsq[i];
  }
  std::vector<double> tmp(n), tmp2(n);
  // out = D^-1/2 M D^-1/2 v
  auto scaled_matvec = [&](std::span<const double> v, std::span<double> out) {
    for (std::size_t i = 0; i < n; ++i) tmp2[i] = dinv[i] * v[i];
    op.matvec(tmp2, out);
    for (std::size_t i = 0; i < n; ++i) out[i] *= dinv[i];
  };
  // ||b - M x|| for the scaled residual rt = D^-1/2 (b - M x)
  auto unscaled_norm = [&](std::span<const double> rt) {
    for (std::size_t i = 0; i < n; ++i) tmp2[i] = dsq[i] * rt[i];
    return vec::nrm2(tmp2);
  };

  std::vector<double> y(n, 0.0);  // scaled iterate, x = D^-1/2 y
  std::vector<double> r(n), p, mr(n), mp(n);
  std::size_t iters = 0;

  // outer refinement loop: restart the Krylov recurrence from the true
  // residual whenever it stagnates or claims convergence
  while (true) {
    for (std::size_t i = 0; i < n; ++i) x[i] = dinv[i] * y[i];
    op.matvec(x, tmp);
    for (std::size_t i = 0; i < n; ++i) r[i] = dinv[i] * (b[i] - tmp[i]);
    double rnorm = unscaled_norm(r);
    if (rnorm <= target) return x;
    if (iters >= cap)
      throw ConvergenceError(
          "solve: residual " + std::to_string(rnorm) + " above target " +
              std::to_string(target) + " after iteration cap",
          rnorm);

    p = r;
    scaled_matvec(r, mr);
    mp = mr;
    double rmr = vec::dot(r, mr);
    double stagnation_ref = rnorm;
    std::size_t stagnation_age = 0;
    bool restart = false;
    while (!restart) {
      const double mp2 = vec::dot(mp, mp);
      if (!(mp2 > 0.0) || !(rmr > 0.0)) {  // breakdown; refine
        ++iters;
        break;
      }
      const double alpha = rmr / mp2;
      vec::axpy(alpha, p, y);
      vec::axpy(-alpha, mp, r);
      rnorm = unscaled_norm(r);
      ++iters;
      if (opts.residual_history) opts.residual_history->push_back(rnorm);
      if (rnorm <= target) restart = true;  // verify against true residual
      if (iters >= cap) restart = true;
      // stagnation: no meaningful progress over a window
      if (rnorm < 0.99 * stagnation_ref) {
        stagnation_ref = rnorm;
        stagnation_age = 0;
      } else if (++stagnation_age >= 50) {
        restart = true;
      }
      if (restart) break;
      scaled_matvec(r, mr);
      const double rmr_next = vec::dot(r, mr);
      const double beta = rmr_next / rmr;
      rmr = rmr_next;
      for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
      for (std::size_t i = 0; i < n; ++i) mp[i] = mr[i] + beta * mp[i];
    }
  }
}

}  // namespace polmin
