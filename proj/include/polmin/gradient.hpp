#pragma once

#include <span>

#include "polmin/lowrank.hpp"
#include "polmin/matrix.hpp"

namespace polmin {

/// Gradient of f(X) = s^T (I + L + L_X)^-1 s assembled from an opinion
/// vector z in O(nk):
///   (CW/2n) (2 z (Y z)^T - (z.z) 1_k^T - 1_n ((z.z)^T Y^T))
/// where z.z is the elementwise square.
Matrix gradient_from_opinions(const LowRankModel& model,
                              std::span<const double> z);

/// Gradient at the exact (dense-path) opinions; oracle role.
Matrix gradient_exact(const LowRankModel& model, std::span<const double> s,
                      std::size_t dense_cap = 3000);

/// Approximate gradient with ||grad~ - grad||_F <= eps under the spectral
/// condition. The opinion accuracy is derived from eps as
///   eps' = (1/8) min{eps, sqrt(eps)} sqrt(n) / ((1+CW)(1+||Y||_F)).
Matrix gradient_approx(const LowRankModel& model, std::span<const double> s,
                       double eps);

/// Smoothness constant bound (8 C W / sqrt(n)) ||s||_2 ||Y||_2^2 with ||Y||_2
/// estimated by power iteration (Frobenius fallback).
double lipschitz_bound(const LowRankModel& model, std::span<const double> s);

/// Power-iteration estimate of the spectral norm of a dense matrix.
double spectral_norm_estimate(const Matrix& m, int max_iters = 100,
                              double rel_tol = 1e-12);

}  // namespace polmin
