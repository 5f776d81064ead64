#include "polmin/gradient.hpp"

#include <algorithm>
#include <cmath>

#include "polmin/errors.hpp"
#include "polmin/vec_ops.hpp"

namespace polmin {

Matrix gradient_from_opinions(const LowRankModel& model,
                              std::span<const double> z) {
  const std::size_t n = model.n();
  const std::size_t k = model.k();
  if (z.size() != n)
    throw ValidationError("gradient_from_opinions: length mismatch");
  Matrix grad(n, k);
  const double scale = model.scale();
  if (scale == 0.0) return grad;

  // k-dimensional contractions keep the assembly O(nk):
  // a = Y z, h = z (.) z, b = Y h
  std::vector<double> a(k), h(n), b(k);
  vec::square(z, h);
  for (std::size_t j = 0; j < k; ++j) {
    a[j] = vec::dot(model.Y().row(j), z);
    b[j] = vec::dot(model.Y().row(j), h);
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto row = grad.row(i);
    const double zi2 = 2.0 * z[i];
    for (std::size_t j = 0; j < k; ++j)
      row[j] = scale * (zi2 * a[j] - h[i] - b[j]);
  }
  return grad;
}

Matrix gradient_exact(const LowRankModel& model, std::span<const double> s,
                      std::size_t dense_cap) {
  auto z = exact_opinions_dense(model, s, dense_cap);
  return gradient_from_opinions(model, z);
}

Matrix gradient_approx(const LowRankModel& model, std::span<const double> s,
                       double eps) {
  if (!(eps > 0.0)) throw ValidationError("gradient_approx: eps must be > 0");
  const double cw = model.C() * model.W();
  const double yf = model.Y().matrix().frobenius_norm();
  const double z_eps = 0.125 * std::min(eps, std::sqrt(eps)) *
                       std::sqrt(double(model.n())) /
                       ((1.0 + cw) * (1.0 + yf));
  auto z = approx_opinions(model, s, z_eps);
  return gradient_from_opinions(model, z);
}

double spectral_norm_estimate(const Matrix& m, int max_iters, double rel_tol) {
  const std::size_t rows = m.rows(), cols = m.cols();
  if (rows == 0 || cols == 0) return 0.0;
  std::vector<double> w(cols, 1.0 / std::sqrt(double(cols)));
  std::vector<double> mw(rows), mtmw(cols);
  double sigma = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    for (std::size_t i = 0; i < rows; ++i) mw[i] = vec::dot(m.row(i), w);
    std::fill(mtmw.begin(), mtmw.end(), 0.0);
    for (std::size_t i = 0; i < rows; ++i) vec::axpy(mw[i], m.row(i), mtmw);
    double lambda = vec::nrm2(mtmw);
    if (lambda == 0.0) return 0.0;
    double next = std::sqrt(lambda);
    vec::scale(1.0 / lambda, mtmw);
    w = mtmw;
    if (it > 0 && std::abs(next - sigma) < rel_tol * std::max(1.0, next)) {
      return next;
    }
    sigma = next;
  }
  return sigma;
}

double lipschitz_bound(const LowRankModel& model, std::span<const double> s) {
  const double cw = model.C() * model.W();
  if (cw == 0.0) return 0.0;
  const double snorm = vec::nrm2(s);
  if (snorm == 0.0) return 0.0;
  double y2 = spectral_norm_estimate(model.Y().matrix(), 100, 1e-9);
  const double yf = model.Y().matrix().frobenius_norm();
  if (!(y2 > 0.0) || y2 > yf) y2 = yf;
  return 8.0 * cw / std::sqrt(double(model.n())) * snorm * y2 * y2;
}

}  // namespace polmin
