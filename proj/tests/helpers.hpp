#pragma once

// Shared fixtures for the unit and acceptance suites: small named graphs,
// seeded random instances, and dense Eigen oracles for every iterative path.

#include <Eigen/Dense>
#include <random>
#include <sstream>
#include <tuple>
#include <vector>

#include "polmin/fj.hpp"
#include "polmin/graph.hpp"
#include "polmin/lowrank.hpp"
#include "polmin/matrix.hpp"

namespace testutil {

using Edge = std::tuple<std::uint32_t, std::uint32_t, double>;

inline polmin::Graph path_graph(std::size_t n, double w = 1.0) {
  std::vector<Edge> edges;
  for (std::uint32_t v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1, w);
  return polmin::Graph::from_edges(n, edges);
}

// spanning tree plus `extra` random edges, weights in scale * [0.5, 1.5]
inline polmin::Graph random_connected_graph(std::size_t n, std::size_t extra,
                                            std::uint64_t seed,
                                            double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(0.5 * scale, 1.5 * scale);
  std::vector<Edge> edges;
  for (std::uint32_t v = 1; v < n; ++v)
    edges.emplace_back(v, std::uint32_t(rng() % v), weight(rng));
  for (std::size_t e = 0; e < extra; ++e) {
    auto u = std::uint32_t(rng() % n), v = std::uint32_t(rng() % n);
    if (u != v) edges.emplace_back(u, v, weight(rng));
  }
  return polmin::Graph::from_edges(n, edges);
}

inline std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng,
                                         double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

inline polmin::Matrix random_stochastic(std::size_t rows, std::size_t cols,
                                        std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(0.01, 1.0);
  polmin::Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < cols; ++j) sum += (m(i, j) = dist(rng));
    for (std::size_t j = 0; j < cols; ++j) m(i, j) /= sum;
  }
  return m;
}

inline Eigen::MatrixXd dense_laplacian(const polmin::Graph& g) {
  const auto n = Eigen::Index(g.num_vertices());
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t u = 0; u < g.num_vertices(); ++u) {
    auto nbrs = g.neighbors(u);
    auto ws = g.weights(u);
    for (std::size_t e = 0; e < nbrs.size(); ++e) {
      l(Eigen::Index(u), Eigen::Index(nbrs[e])) -= ws[e];
      l(Eigen::Index(u), Eigen::Index(u)) += ws[e];
    }
  }
  return l;
}

inline Eigen::MatrixXd to_eigen(const polmin::Matrix& m) {
  Eigen::MatrixXd out(Eigen::Index(m.rows()), Eigen::Index(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(Eigen::Index(i), Eigen::Index(j)) = m(i, j);
  return out;
}

// A_X = scale (X Y + Y^T X^T), materialized (test oracle only)
inline Eigen::MatrixXd dense_ax(const polmin::LowRankModel& model) {
  Eigen::MatrixXd xy =
      to_eigen(model.X().matrix()) * to_eigen(model.Y().matrix());
  return model.scale() * (xy + xy.transpose());
}

// M_full = I + L + L_X (the full operator including the -A_X part)
inline Eigen::MatrixXd dense_full_operator(const polmin::LowRankModel& model) {
  Eigen::MatrixXd ax = dense_ax(model);
  Eigen::MatrixXd m = dense_laplacian(model.graph());
  const auto n = Eigen::Index(model.n());
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) += 1.0 + ax.row(i).sum();
  }
  return m - ax;
}

inline std::vector<double> dense_opinions(const polmin::LowRankModel& model,
                                          std::span<const double> s) {
  Eigen::VectorXd b(Eigen::Index(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) b(Eigen::Index(i)) = s[i];
  Eigen::VectorXd z = dense_full_operator(model).ldlt().solve(b);
  return {z.data(), z.data() + z.size()};
}

// raw dense objective f(X) = s^T (I + L + L_X)^-1 s for an arbitrary
// nonnegative X (rows need not sum to 1) -- finite-difference oracle
inline double dense_objective_raw(const polmin::Graph& g,
                                  const polmin::Matrix& x,
                                  const polmin::Matrix& y, double c,
                                  std::span<const double> s) {
  const auto n = Eigen::Index(g.num_vertices());
  const double scale = c * g.total_weight() / (2.0 * double(g.num_vertices()));
  Eigen::MatrixXd xy = to_eigen(x) * to_eigen(y);
  Eigen::MatrixXd ax = scale * (xy + xy.transpose());
  Eigen::MatrixXd m = dense_laplacian(g);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) += 1.0 + ax.row(i).sum();
  m -= ax;
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) b(i) = s[std::size_t(i)];
  return b.dot(m.ldlt().solve(b));
}

inline double nrm2_diff(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

inline polmin::Graph graph_from_text(const std::string& text,
                                     polmin::Graph::LoadStats* stats = nullptr) {
  std::istringstream in(text);
  return polmin::Graph::from_edge_list(in, stats);
}

}  // namespace testutil
