#include "polmin/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "polmin/errors.hpp"

namespace polmin::synth {

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// stream domains, so rows of X, topics of Y, etc. never share draws
constexpr std::uint64_t kOpinions = 0x01ULL << 56;
constexpr std::uint64_t kRowsX = 0x02ULL << 56;
constexpr std::uint64_t kTopicsY = 0x03ULL << 56;
constexpr std::uint64_t kGraph = 0x04ULL << 56;

void validate(const SynthConfig& config) {
  if (config.k < 1) throw ValidationError("synth: k must be >= 1");
  if (!(config.powerlaw_alpha > 1.0))
    throw ValidationError("synth: powerlaw_alpha must exceed 1");
  if (!(config.per_topic_user_fraction > 0.0) ||
      config.per_topic_user_fraction > 1.0)
    throw ValidationError("synth: per_topic_user_fraction must be in (0, 1]");
  if (config.chunk_count == 0 ||
      config.chunk_weights.size() != config.chunk_count)
    throw ValidationError("synth: chunk_weights size must equal chunk_count");
  double wsum = 0.0;
  for (double w : config.chunk_weights) {
    if (w < 0.0) throw ValidationError("synth: negative chunk weight");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-12)
    throw ValidationError("synth: chunk weights must sum to 1");
}

// Pareto with x_min = 1: inverse CDF of p(x) ~ x^-alpha on [1, inf)
double pareto(StreamRng& rng, double alpha) {
  return std::pow(1.0 - rng.next_unit(), -1.0 / (alpha - 1.0));
}

// exponential truncated to [0, 1] via the inverse CDF of the truncation
double truncated_exponential(StreamRng& rng, double rate) {
  const double mass = 1.0 - std::exp(-rate);
  return -std::log(1.0 - rng.next_unit() * mass) / rate;
}

}  // namespace

StreamRng::StreamRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(seed) ^ mix64(stream * 0xda942042e4dd58b5ULL + 1)) {}

std::uint64_t StreamRng::next_u64() {
  return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_);
}

double StreamRng::next_unit() {
  return double(next_u64() >> 11) * 0x1.0p-53;
}

OpinionVector gen_opinions(std::size_t n, const SynthConfig& config) {
  if (n < 2) throw ValidationError("gen_opinions: n must be >= 2");
  validate(config);
  StreamRng rng(config.seed, kOpinions);
  std::vector<double> raw(n);
  switch (config.opinion_dist) {
    case OpinionDist::uniform:
      for (double& v : raw) v = rng.next_unit();
      break;
    case OpinionDist::powerlaw: {
      for (double& v : raw) v = pareto(rng, config.powerlaw_alpha);
      // rank-preserving min-max rescale onto [0, 1]
      auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
      const double span = *hi - *lo;
      const double base = *lo;
      for (double& v : raw) v = span > 0.0 ? (v - base) / span : 0.5;
      break;
    }
    case OpinionDist::exponential:
      for (double& v : raw)
        v = truncated_exponential(rng, config.exponential_rate);
      break;
    case OpinionDist::polarized: {
      const std::size_t half = (n + 1) / 2;
      for (std::size_t i = 0; i < n; ++i) {
        const double x = truncated_exponential(rng, config.exponential_rate);
        raw[i] = i < half ? x : 1.0 - x;
      }
      break;
    }
  }
  return mean_center_rescale(raw);
}

TopicMatrix gen_x(std::size_t n, const SynthConfig& config) {
  validate(config);
  if (config.k < 2) throw ValidationError("gen_x: k must be >= 2");
  Matrix m(n, config.k);
  for (std::size_t i = 0; i < n; ++i) {
    StreamRng rng(config.seed, kRowsX | i);
    auto row = m.row(i);
    double max = 0.0;
    for (double& v : row) {
      v = pareto(rng, config.powerlaw_alpha);
      max = std::max(max, v);
    }
    double sum = 0.0;
    std::size_t argmax = 0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] == max) argmax = std::min(argmax, j);
      row[j] = row[j] / max >= config.x_sparsity_threshold ? row[j] : 0.0;
      sum += row[j];
    }
    if (sum == 0.0) {  // unreachable while threshold <= 1, kept as a guard
      row[argmax] = 1.0;
      continue;
    }
    for (double& v : row) v /= sum;
  }
  return TopicMatrix::renormalized(std::move(m));
}

TopicMatrix gen_y(std::size_t n, const SynthConfig& config,
                  std::span<const double> s) {
  validate(config);
  if (s.size() != n) throw ValidationError("gen_y: opinion length mismatch");
  const std::size_t d = config.chunk_count;

  // equally divide the opinion spectrum [-1, 1] into d chunks
  std::vector<std::vector<std::uint32_t>> chunks(d);
  for (std::size_t u = 0; u < n; ++u) {
    auto c = std::size_t(std::clamp((s[u] + 1.0) / 2.0 * double(d), 0.0,
                                    double(d) - 1.0));
    chunks[c].push_back(std::uint32_t(u));
  }
  if (std::all_of(chunks.begin(), chunks.end(),
                  [](const auto& c) { return c.empty(); }))
    throw ValidationError("gen_y: all opinion chunks are empty");

  const auto picks_target =
      std::size_t(std::ceil(config.per_topic_user_fraction * double(n)));
  Matrix m(config.k, n);
  std::vector<std::uint32_t> pool;
  for (std::size_t j = 0; j < config.k; ++j) {
    StreamRng rng(config.seed, kTopicsY | j);
    std::size_t chunk = 0;
    for (int attempt = 0;; ++attempt) {
      const double u = rng.next_unit();
      double acc = 0.0;
      chunk = d - 1;
      for (std::size_t c = 0; c < d; ++c) {
        acc += config.chunk_weights[c];
        if (u < acc) {
          chunk = c;
          break;
        }
      }
      if (!chunks[chunk].empty()) break;
      if (attempt >= 1000) {  // all positive-weight chunks empty
        while (chunks[chunk].empty()) chunk = (chunk + 1) % d;
        break;
      }
    }

    // partial Fisher-Yates for a uniform sample without replacement
    pool = chunks[chunk];
    const std::size_t picks = std::min(picks_target, pool.size());
    auto row = m.row(j);
    double sum = 0.0;
    for (std::size_t t = 0; t < picks; ++t) {
      const std::size_t r = t + std::size_t(rng.next_u64() % (pool.size() - t));
      std::swap(pool[t], pool[r]);
      const double w = pareto(rng, config.powerlaw_alpha);
      row[pool[t]] = w;
      sum += w;
    }
    for (std::size_t t = 0; t < picks; ++t) row[pool[t]] /= sum;
  }
  return TopicMatrix::renormalized(std::move(m));
}

Graph gen_graph(std::size_t n, std::size_t edges_per_node,
                std::uint64_t seed) {
  if (n < 2) throw ValidationError("gen_graph: n must be >= 2");
  if (edges_per_node == 0)
    throw ValidationError("gen_graph: edges_per_node must be >= 1");
  StreamRng rng(seed, kGraph);
  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> edges;
  edges.reserve(n * edges_per_node);
  // endpoint multiset makes target choice degree-proportional
  std::vector<std::uint32_t> endpoints;
  endpoints.reserve(2 * n * edges_per_node);
  edges.emplace_back(0, 1, 1.0);
  endpoints.push_back(0);
  endpoints.push_back(1);
  std::vector<std::uint32_t> picked;
  for (std::uint32_t v = 2; v < n; ++v) {
    const std::size_t attach = std::min<std::size_t>(edges_per_node, v);
    picked.clear();
    for (std::size_t e = 0; e < attach; ++e) {
      std::uint32_t target = 0;
      for (int attempt = 0; attempt < 64; ++attempt) {
        target = endpoints[rng.next_u64() % endpoints.size()];
        if (std::find(picked.begin(), picked.end(), target) == picked.end())
          break;
        target = std::uint32_t(rng.next_u64() % v);  // uniform fallback
      }
      if (std::find(picked.begin(), picked.end(), target) != picked.end())
        continue;
      picked.push_back(target);
      edges.emplace_back(v, target, 1.0);
      endpoints.push_back(v);
      endpoints.push_back(target);
    }
    if (picked.empty()) {  // keep the graph connected no matter what
      edges.emplace_back(v, v - 1, 1.0);
      endpoints.push_back(v);
      endpoints.push_back(v - 1);
    }
  }
  return Graph::from_edges(n, edges);
}

}  // namespace polmin::synth
