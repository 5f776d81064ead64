#include "polmin/graph.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>

#include "polmin/errors.hpp"

namespace polmin {

namespace {
using EdgeKey = std::pair<std::uint32_t, std::uint32_t>;
}

Graph::Graph(std::size_t n, std::vector<std::size_t> offsets,
             std::vector<std::uint32_t> adj, std::vector<double> w,
             std::size_t m)
    : n_(n),
      m_(m),
      offsets_(std::move(offsets)),
      adj_(std::move(adj)),
      w_(std::move(w)) {
  degree_.assign(n_, 0.0);
  for (std::size_t v = 0; v < n_; ++v) {
    double d = 0.0;
    for (std::size_t i = offsets_[v]; i < offsets_[v + 1]; ++i) d += w_[i];
    degree_[v] = d;
    max_degree_ = std::max(max_degree_, d);
  }
  total_weight_ = 0.0;
  for (std::size_t v = 0; v < n_; ++v) total_weight_ += degree_[v];
  total_weight_ /= 2.0;

  // BFS connectivity check
  if (n_ == 0) {
    connected_ = false;
  } else {
    std::vector<char> seen(n_, 0);
    std::vector<std::uint32_t> stack{0};
    seen[0] = 1;
    std::size_t visited = 1;
    while (!stack.empty()) {
      std::uint32_t v = stack.back();
      stack.pop_back();
      for (auto u : neighbors(v))
        if (!seen[u]) {
          seen[u] = 1;
          ++visited;
          stack.push_back(u);
        }
    }
    connected_ = (visited == n_);
  }
}

Graph Graph::from_edges(
    std::size_t n,
    const std::vector<std::tuple<std::uint32_t, std::uint32_t, double>>& edges,
    LoadStats* stats) {
  LoadStats local;
  std::map<EdgeKey, double> merged;
  for (auto [u, v, w] : edges) {
    if (w <= 0.0) throw ValidationError("edge weight must be positive");
    if (u == v) {
      ++local.self_loops_dropped;
      continue;
    }
    if (u >= n || v >= n) throw ValidationError("vertex id out of range");
    EdgeKey key{std::min(u, v), std::max(u, v)};
    auto [it, inserted] = merged.try_emplace(key, w);
    if (!inserted) {
      it->second += w;
      ++local.duplicates_merged;
    }
  }
  if (stats) *stats = local;

  std::vector<std::size_t> counts(n, 0);
  for (const auto& [key, w] : merged) {
    ++counts[key.first];
    ++counts[key.second];
  }
  std::vector<std::size_t> offsets(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] = offsets[i] + counts[i];
  std::vector<std::uint32_t> adj(offsets[n]);
  std::vector<double> w(offsets[n]);
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  // merged iterates keys in ascending (min,max) order, so each vertex's
  // entries with larger partners arrive sorted; entries where the vertex is
  // the max side also arrive sorted, but the two interleave. Sort per row.
  for (const auto& [key, weight] : merged) {
    adj[cursor[key.first]] = key.second;
    w[cursor[key.first]++] = weight;
    adj[cursor[key.second]] = key.first;
    w[cursor[key.second]++] = weight;
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<std::pair<std::uint32_t, double>> row;
    row.reserve(offsets[v + 1] - offsets[v]);
    for (std::size_t i = offsets[v]; i < offsets[v + 1]; ++i)
      row.emplace_back(adj[i], w[i]);
    std::sort(row.begin(), row.end());
    for (std::size_t i = 0; i < row.size(); ++i) {
      adj[offsets[v] + i] = row[i].first;
      w[offsets[v] + i] = row[i].second;
    }
  }
  return Graph(n, std::move(offsets), std::move(adj), std::move(w),
               merged.size());
}

Graph Graph::from_edge_list(std::istream& in, LoadStats* stats) {
  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> edges;
  std::size_t n = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    long long u, v;
    if (!(ls >> u)) {
      if (line.find_first_not_of(" \t\r\n") == std::string::npos)
        continue;  // blank / comment-only line
      throw ParseError("expected `u v [w]`", lineno);
    }
    if (!(ls >> v)) throw ParseError("expected `u v [w]`", lineno);
    double w = 1.0;
    if (ls >> w) {
      std::string rest;
      if (ls >> rest) throw ParseError("trailing tokens after weight", lineno);
    } else if (!ls.eof()) {
      throw ParseError("malformed weight", lineno);
    }
    if (u < 0 || v < 0) throw ParseError("vertex ids must be >= 0", lineno);
    if (w <= 0.0)
      throw ValidationError("non-positive weight at line " +
                            std::to_string(lineno));
    n = std::max(n, std::size_t(std::max(u, v)) + 1);
    edges.emplace_back(std::uint32_t(u), std::uint32_t(v), w);
  }
  return from_edges(n, edges, stats);
}

void Graph::save_edge_list(std::ostream& out) const {
  out.precision(17);
  for (std::size_t u = 0; u < n_; ++u) {
    auto nbr = neighbors(u);
    auto wts = weights(u);
    for (std::size_t i = 0; i < nbr.size(); ++i)
      if (u < nbr[i]) out << u << ' ' << nbr[i] << ' ' << wts[i] << '\n';
  }
}

void Graph::laplacian_matvec(std::span<const double> v,
                             std::span<double> out) const {
  if (v.size() != n_ || out.size() != n_)
    throw ValidationError("laplacian_matvec: length mismatch");
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = degree_[i] * v[i];
    auto nbr = neighbors(i);
    auto wts = weights(i);
    for (std::size_t j = 0; j < nbr.size(); ++j) acc -= wts[j] * v[nbr[j]];
    out[i] = acc;
  }
}

std::vector<double> Graph::laplacian_matvec(std::span<const double> v) const {
  std::vector<double> out(n_);
  laplacian_matvec(v, out);
  return out;
}

ComponentResult largest_connected_component(const Graph& g) {
  const std::size_t n = g.num_vertices();
  if (n == 0) throw ValidationError("empty graph has no components");
  std::vector<std::uint32_t> comp(n, ComponentResult::kUnmapped);
  std::vector<std::size_t> comp_size;
  for (std::size_t start = 0; start < n; ++start) {
    if (comp[start] != ComponentResult::kUnmapped) continue;
    std::uint32_t id = std::uint32_t(comp_size.size());
    std::size_t size = 0;
    std::vector<std::uint32_t> stack{std::uint32_t(start)};
    comp[start] = id;
    while (!stack.empty()) {
      std::uint32_t v = stack.back();
      stack.pop_back();
      ++size;
      for (auto u : g.neighbors(v))
        if (comp[u] == ComponentResult::kUnmapped) {
          comp[u] = id;
          stack.push_back(u);
        }
    }
    comp_size.push_back(size);
  }
  // components are discovered in order of their smallest vertex, so on a size
  // tie the earlier id wins
  std::uint32_t best = 0;
  for (std::uint32_t c = 1; c < comp_size.size(); ++c)
    if (comp_size[c] > comp_size[best]) best = c;

  std::vector<std::uint32_t> mapping(n, ComponentResult::kUnmapped);
  std::uint32_t next = 0;
  for (std::size_t v = 0; v < n; ++v)
    if (comp[v] == best) mapping[v] = next++;

  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> edges;
  for (std::size_t u = 0; u < n; ++u) {
    if (comp[u] != best) continue;
    auto nbr = g.neighbors(u);
    auto wts = g.weights(u);
    for (std::size_t i = 0; i < nbr.size(); ++i)
      if (u < nbr[i])
        edges.emplace_back(mapping[u], mapping[nbr[i]], wts[i]);
  }
  return ComponentResult{Graph::from_edges(next, edges), std::move(mapping)};
}

}  // namespace polmin
