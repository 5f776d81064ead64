#pragma once

#include <optional>
#include <span>
#include <vector>

#include "polmin/graph.hpp"
#include "polmin/matrix.hpp"
#include "polmin/solver.hpp"

namespace polmin {

/// The timeline-augmented model. X (n x k) describes how user timelines mix
/// topics, Y (k x n) which users a topic's recommendations come from, and C
/// the fraction of extra total edge weight. The induced adjacency
///   A_X = (C W / 2n) (X Y + Y^T X^T)
/// is never materialized; all products go through its rank-2k structure.
class LowRankModel {
 public:
  LowRankModel(Graph g, TopicMatrix x, TopicMatrix y, double c);

  const Graph& graph() const { return g_; }
  const TopicMatrix& X() const { return x_; }
  const TopicMatrix& Y() const { return y_; }
  double C() const { return c_; }
  double W() const { return g_.total_weight(); }
  double scale() const { return scale_; }  // C W / 2n
  std::size_t n() const { return g_.num_vertices(); }
  std::size_t k() const { return x_.cols(); }

  // cached A_X * 1
  std::span<const double> ax_degree() const { return ax_degree_; }

  // M = I + L + diag(A_X 1)
  SpdOperator op() const;

  // a new model sharing graph/Y/C with X replaced (ax_degree recomputed)
  LowRankModel with_x(TopicMatrix x) const;

 private:
  Graph g_;
  TopicMatrix x_, y_;
  double c_;
  double scale_;
  std::vector<double> ax_degree_;
};

/// ||X Y + Y^T X^T||_{1,1} computed through the factors; equals 2n for
/// row-stochastic X and Y.
double weight_identity(const TopicMatrix& x, const TopicMatrix& y);

/// A_X v = scale * (X (Y v) + Y^T (X^T v)), O(nk)
std::vector<double> ax_matvec(const LowRankModel& model,
                              std::span<const double> v);

// rank-structure products used by the estimation path:
// U = [X  Y^T] (n x 2k), V = [Y ; X^T] (2k x n)
std::vector<double> apply_u(const LowRankModel& model,
                            std::span<const double> y);  // length 2k -> n
std::vector<double> apply_v(const LowRankModel& model,
                            std::span<const double> v);  // length n -> 2k

struct SpectralCondition {
  double norm_estimate;  // power-iteration estimate of ||V M^-1 U||_2
  double threshold;      // 0.99 * 2n / (C W)
  bool satisfied;
};

/// Premise of the low-rank estimation guarantee. Never throws; returns an
/// unsatisfied flag instead.
SpectralCondition spectral_condition(const LowRankModel& model);

struct ApproxInfo {
  double eps_z1 = 0.0, eps_r = 0.0, eps_z2 = 0.0;
  // set from `cond` when the caller supplies one; nullopt = unverified
  std::optional<bool> verified;
};

/// Woodbury-path estimate of z_X = (I + L + L_X)^-1 s with
/// ||result - z_X||_2 <= eps whenever the spectral condition holds.
std::vector<double> approx_opinions(const LowRankModel& model,
                                    std::span<const double> s, double eps,
                                    ApproxInfo* info = nullptr,
                                    const SpectralCondition* cond = nullptr);

/// Dense factorization oracle for z_X; capped (default 3000 vertices).
std::vector<double> exact_opinions_dense(const LowRankModel& model,
                                         std::span<const double> s,
                                         std::size_t dense_cap = 3000);

/// f~ with |f~ - s^T z_X| <= eps under the spectral condition.
double approx_objective(const LowRankModel& model, std::span<const double> s,
                        double eps);

/// Entry-wise feasibility box: lower <= X' <= upper with per-row
/// sum lower <= 1 <= sum upper.
class Bounds {
 public:
  Bounds(Matrix lower, Matrix upper);
  const Matrix& lower() const { return lower_; }
  const Matrix& upper() const { return upper_; }

 private:
  Matrix lower_, upper_;
};

/// upper = min{1, X + theta}, lower = max{0, X - theta}; frozen topic columns
/// get lower = upper = X.
Bounds bounds_from_theta(const TopicMatrix& x, double theta,
                         std::span<const std::size_t> frozen_topics = {});

}  // namespace polmin
