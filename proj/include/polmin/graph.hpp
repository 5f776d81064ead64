#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace polmin {

/// Undirected weighted graph in compressed adjacency (CSR) form.
/// Immutable after construction; neighbor lists are sorted by vertex id.
/// Carries Laplacian semantics: L = D - A with D the weighted degree matrix.
class Graph {
 public:
  struct LoadStats {
    std::size_t self_loops_dropped = 0;
    std::size_t duplicates_merged = 0;
  };

  // Edge list: `u v [w]`, 0-based ids, `#` comments. Duplicate undirected
  // edges merge by summing weights; self-loops are dropped and counted.
  static Graph from_edge_list(std::istream& in, LoadStats* stats = nullptr);
  static Graph from_edges(
      std::size_t n,
      const std::vector<std::tuple<std::uint32_t, std::uint32_t, double>>&
          edges,
      LoadStats* stats = nullptr);

  void save_edge_list(std::ostream& out) const;

  std::size_t num_vertices() const { return n_; }
  std::size_t num_edges() const { return m_; }
  double total_weight() const { return total_weight_; }
  bool connected() const { return connected_; }

  double weighted_degree(std::size_t v) const { return degree_[v]; }
  double max_weighted_degree() const { return max_degree_; }

  std::span<const std::uint32_t> neighbors(std::size_t v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  std::span<const double> weights(std::size_t v) const {
    return {w_.data() + offsets_[v], w_.data() + offsets_[v + 1]};
  }

  // out = (D - A) v
  std::vector<double> laplacian_matvec(std::span<const double> v) const;
  void laplacian_matvec(std::span<const double> v, std::span<double> out) const;

 private:
  Graph() = default;
  Graph(std::size_t n, std::vector<std::size_t> offsets,
        std::vector<std::uint32_t> adj, std::vector<double> w, std::size_t m);

  std::size_t n_ = 0;
  std::size_t m_ = 0;
  double total_weight_ = 0.0;
  double max_degree_ = 0.0;
  bool connected_ = false;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> adj_;
  std::vector<double> w_;
  std::vector<double> degree_;
};

/// Induced subgraph on the largest connected component, vertices densely
/// reindexed. `mapping[old] = new index`, or `kUnmapped` if dropped.
/// Ties between equal-size components go to the one containing the smallest
/// original vertex id.
struct ComponentResult {
  static constexpr std::uint32_t kUnmapped = UINT32_MAX;
  Graph graph;
  std::vector<std::uint32_t> mapping;
};
ComponentResult largest_connected_component(const Graph& g);

}  // namespace polmin
