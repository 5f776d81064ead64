#include "polmin/fj.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "polmin/errors.hpp"
#include "polmin/solver.hpp"
#include "polmin/vec_ops.hpp"

namespace polmin {

OpinionVector::OpinionVector(std::vector<double> values, bool centered)
    : values_(std::move(values)), centered_(centered) {
  double sum = 0.0;
  for (double v : values_) {
    if (!(std::abs(v) <= 1.0 + 1e-12))
      throw ValidationError("opinion entry outside [-1, 1]");
    sum += v;
  }
  if (centered_ && std::abs(sum) > 1e-9 * double(values_.size()))
    throw ValidationError("opinion vector marked centered but has mean " +
                          std::to_string(sum / double(values_.size())));
}

OpinionVector mean_center_rescale(std::span<const double> raw) {
  if (raw.empty()) throw ValidationError("empty opinion vector");
  double mean = 0.0;
  for (double v : raw) mean += v;
  mean /= double(raw.size());
  std::vector<double> out(raw.begin(), raw.end());
  double maxabs = 0.0;
  for (double& v : out) {
    v -= mean;
    maxabs = std::max(maxabs, std::abs(v));
  }
  if (maxabs == 0.0)
    throw ValidationError("constant opinion vector cannot be normalized");
  for (double& v : out) v /= maxabs;
  return OpinionVector(std::move(out), /*centered=*/true);
}

std::vector<double> fj_step(const Graph& g, std::span<const double> s,
                            std::span<const double> z) {
  const std::size_t n = g.num_vertices();
  if (s.size() != n || z.size() != n)
    throw ValidationError("fj_step: length mismatch");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = s[i];
    auto nbr = g.neighbors(i);
    auto wts = g.weights(i);
    for (std::size_t j = 0; j < nbr.size(); ++j) acc += wts[j] * z[nbr[j]];
    out[i] = acc / (1.0 + g.weighted_degree(i));
  }
  return out;
}

std::vector<double> equilibrium_exact(const Graph& g, std::span<const double> s,
                                      bool dense_oracle) {
  const std::size_t n = g.num_vertices();
  if (s.size() != n) throw ValidationError("equilibrium: length mismatch");
  if (!g.connected()) throw ValidationError("equilibrium: graph disconnected");
  if (dense_oracle) {
    if (n > 2000) throw ValidationError("dense equilibrium capped at n=2000");
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      m(i, i) += g.weighted_degree(i);
      auto nbr = g.neighbors(i);
      auto wts = g.weights(i);
      for (std::size_t j = 0; j < nbr.size(); ++j) m(i, nbr[j]) -= wts[j];
    }
    Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(s.data(), n);
    Eigen::VectorXd sol = m.ldlt().solve(rhs);
    return std::vector<double>(sol.data(), sol.data() + n);
  }
  auto op = SpdOperator::identity_plus_laplacian(g);
  const double eps = 1e-12 * std::max(1.0, vec::nrm2(s));
  return solve(op, s, eps);
}

Indices indices(const Graph& g, std::span<const double> s,
                std::span<const double> z) {
  const std::size_t n = g.num_vertices();
  if (s.size() != n || z.size() != n)
    throw ValidationError("indices: length mismatch");
  double pol = vec::dot(z, z);
  double dis = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    auto nbr = g.neighbors(i);
    auto wts = g.weights(i);
    for (std::size_t j = 0; j < nbr.size(); ++j)
      if (i < nbr[j]) {
        double d = z[i] - z[nbr[j]];
        dis += wts[j] * d * d;
      }
  }
  Indices result{pol, dis, pol + dis};
  // at equilibrium, P + D = s^T z
  double stz = vec::dot(s, z);
  if (std::abs(result.index - stz) > 1e-8 * (1.0 + std::abs(result.index)))
    throw ValidationError(
        "indices: P + D != s^T z; z is not the equilibrium for (g, s)");
  return result;
}

}  // namespace polmin
