#pragma once

#include <span>
#include <vector>

#include "polmin/graph.hpp"

namespace polmin {

/// The operator M = diag(shift) + L with shift >= 1 entry-wise.
/// Symmetric positive definite with lambda_min >= 1, so ||M^-1||_2 <= 1 and
/// a residual norm ||b - M x|| <= eps certifies ||x - M^-1 b||_2 <= eps.
class SpdOperator {
 public:
  // shift holds the full diagonal offsets (including the identity part)
  SpdOperator(const Graph& g, std::vector<double> shift);

  // shift = 1 everywhere, i.e. M = I + L
  static SpdOperator identity_plus_laplacian(const Graph& g);

  std::size_t size() const { return shift_.size(); }
  const Graph& graph() const { return *g_; }
  std::span<const double> shift() const { return shift_; }

  void matvec(std::span<const double> v, std::span<double> out) const;
  std::vector<double> matvec(std::span<const double> v) const;

 private:
  const Graph* g_;
  std::vector<double> shift_;
};

struct SolveOptions {
  // 0 means the default cap 10 n + 1000
  std::size_t max_iters = 0;
  // when set, receives the recurrence residual norm after every iteration
  std::vector<double>* residual_history = nullptr;
};

/// Solve M x = b with absolute error ||x - M^-1 b||_2 <= eps.
/// Conjugate-residual iteration on the Jacobi-scaled system
/// D^-1/2 M D^-1/2 (D = diag(M)), with the stopping rule evaluated on the
/// unscaled residual ||b - M x||_2 and restarted refinement against the true
/// residual when the recurrence stagnates. Throws ConvergenceError if the
/// iteration cap is hit first.
std::vector<double> solve(const SpdOperator& op, std::span<const double> b,
                          double eps, const SolveOptions& opts = {});

}  // namespace polmin
