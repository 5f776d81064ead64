#include "polmin/projection.hpp"

#include <algorithm>
#include <cmath>

#include "polmin/errors.hpp"

namespace polmin {

namespace {

// sum_i clamp(v_i - mu, l_i, u_i); non-increasing piecewise-linear in mu
double clamped_sum(std::span<const double> v, std::span<const double> l,
                   std::span<const double> u, double mu) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += std::clamp(v[i] - mu, l[i], u[i]);
  return s;
}

}  // namespace

std::vector<double> project_row(std::span<const double> v,
                                std::span<const double> lower,
                                std::span<const double> upper) {
  const std::size_t k = v.size();
  if (lower.size() != k || upper.size() != k)
    throw ValidationError("project_row: length mismatch");
  double lsum = 0.0, usum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (lower[i] > upper[i])
      throw ValidationError("project_row: lower exceeds upper");
    lsum += lower[i];
    usum += upper[i];
  }
  if (lsum > 1.0 + 1e-12 || usum < 1.0 - 1e-12)
    throw ValidationError("project_row: infeasible bounds");

  // breakpoints of mu -> sum of clamped entries
  std::vector<double> bps;
  bps.reserve(2 * k);
  for (std::size_t i = 0; i < k; ++i) {
    bps.push_back(v[i] - upper[i]);
    bps.push_back(v[i] - lower[i]);
  }
  std::sort(bps.begin(), bps.end());

  double mu;
  if (clamped_sum(v, lower, upper, bps.front()) <= 1.0) {
    mu = bps.front();  // sum == usum == 1 up to rounding
  } else if (clamped_sum(v, lower, upper, bps.back()) >= 1.0) {
    mu = bps.back();
  } else {
    // binary search for the segment [bps[lo], bps[lo+1]] bracketing the root,
    // then linear interpolation (left-closed segment convention on ties)
    std::size_t lo = 0, hi = bps.size() - 1;
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      if (clamped_sum(v, lower, upper, bps[mid]) >= 1.0)
        lo = mid;
      else
        hi = mid;
    }
    const double g_lo = clamped_sum(v, lower, upper, bps[lo]);
    const double g_hi = clamped_sum(v, lower, upper, bps[hi]);
    mu = (g_lo > g_hi)
             ? bps[lo] + (g_lo - 1.0) * (bps[hi] - bps[lo]) / (g_lo - g_hi)
             : bps[lo];
  }

  // Newton polish on the unclamped coordinates tightens |sum - 1| to ~1e-16
  for (int pass = 0; pass < 2; ++pass) {
    double sum = 0.0;
    std::size_t active = 0;
    for (std::size_t i = 0; i < k; ++i) {
      double xi = v[i] - mu;
      if (xi > lower[i] && xi < upper[i]) ++active;
      sum += std::clamp(xi, lower[i], upper[i]);
    }
    if (active == 0 || std::abs(sum - 1.0) <= 1e-15) break;
    mu += (sum - 1.0) / double(active);
  }

  std::vector<double> x(k);
  for (std::size_t i = 0; i < k; ++i)
    x[i] = std::clamp(v[i] - mu, lower[i], upper[i]);
  return x;
}

Matrix project_matrix(const Matrix& v, const Bounds& bounds) {
  if (v.rows() != bounds.lower().rows() || v.cols() != bounds.lower().cols())
    throw ValidationError("project_matrix: shape mismatch");
  Matrix out(v.rows(), v.cols());
  for (std::size_t i = 0; i < v.rows(); ++i) {
    std::vector<double> row;
    try {
      row = project_row(v.row(i), bounds.lower().row(i), bounds.upper().row(i));
    } catch (const ValidationError& e) {
      throw ValidationError(std::string(e.what()) + " (row " +
                            std::to_string(i) + ")");
    }
    std::copy(row.begin(), row.end(), out.row(i).begin());
  }
  return out;
}

}  // namespace polmin
