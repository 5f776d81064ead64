#pragma once

#include <span>
#include <vector>

#include "polmin/graph.hpp"

namespace polmin {

/// Innate or expressed opinions, entries in [-1, 1]. `centered` marks vectors
/// whose mean is (numerically) zero.
class OpinionVector {
 public:
  OpinionVector() = default;
  // validates the range invariant, and the mean when centered is claimed
  explicit OpinionVector(std::vector<double> values, bool centered = false);

  std::size_t size() const { return values_.size(); }
  bool centered() const { return centered_; }
  const std::vector<double>& values() const { return values_; }
  operator std::span<const double>() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
  bool centered_ = false;
};

/// Subtract the mean, then divide by the max absolute value. Errors on a
/// constant input (zero vector after centering).
OpinionVector mean_center_rescale(std::span<const double> raw);

/// One synchronous opinion update:
/// z'_i = (s_i + sum_j w_ij z_j) / (1 + sum_j w_ij)
std::vector<double> fj_step(const Graph& g, std::span<const double> s,
                            std::span<const double> z);

/// Equilibrium z = (I + L)^-1 s. Default path is the iterative solver with
/// eps = 1e-12 * max(1, ||s||); dense_oracle switches to a direct dense solve
/// (test oracle, n <= 2000).
std::vector<double> equilibrium_exact(const Graph& g, std::span<const double> s,
                                      bool dense_oracle = false);

struct Indices {
  double polarization;   // sum z_i^2
  double disagreement;   // sum_(i,j) w_ij (z_i - z_j)^2
  double index;          // polarization + disagreement
};

/// Polarization/disagreement indices of an equilibrium z. Cross-checks
/// P + D against s^T z and throws if z is not the equilibrium for (g, s).
Indices indices(const Graph& g, std::span<const double> s,
                std::span<const double> z);

}  // namespace polmin
