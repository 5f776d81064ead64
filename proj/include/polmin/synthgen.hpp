#pragma once

#include <cstdint>
#include <vector>

#include "polmin/fj.hpp"
#include "polmin/graph.hpp"
#include "polmin/matrix.hpp"

namespace polmin::synth {

/// Counter-based generator: each draw is splitmix64-style mixing of
/// (seed, stream, counter), so independent streams (one per row / topic)
/// produce bit-stable output regardless of generation order.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  double next_unit();  // uniform on [0, 1)

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

enum class OpinionDist { uniform, powerlaw, exponential, polarized };

struct SynthConfig {
  std::uint64_t seed = 0;
  OpinionDist opinion_dist = OpinionDist::uniform;
  std::size_t k = 2;                       // topic count
  double powerlaw_alpha = 2.5;             // Pareto tail exponent
  double exponential_rate = 1.0;
  double x_sparsity_threshold = 0.25;      // applied after per-row max-scaling
  std::size_t chunk_count = 3;             // opinion-spectrum chunks for Y
  std::vector<double> chunk_weights = {0.3, 0.4, 0.3};
  double per_topic_user_fraction = 0.02;
};

/// Innate opinions: raw draws per distribution, then mean_center_rescale.
/// polarized = exponential draws x_i with the first ceil(n/2) users at x_i
/// and the rest at 1 - x_i.
OpinionVector gen_opinions(std::size_t n, const SynthConfig& config);

/// User-topic matrix: per row, k Pareto draws max-scaled to (0, 1], entries
/// below the sparsity threshold zeroed, row renormalized to sum 1.
TopicMatrix gen_x(std::size_t n, const SynthConfig& config);

/// Influence-topic matrix: per topic, sample an opinion-spectrum chunk by
/// weight, pick min(ceil(fraction * n), chunk size) users uniformly, give
/// them Pareto weights, renormalize. Empty chunks are resampled.
TopicMatrix gen_y(std::size_t n, const SynthConfig& config,
                  std::span<const double> s);

/// Connected preferential-attachment graph with ~edges_per_node * n
/// unit-weight edges.
Graph gen_graph(std::size_t n, std::size_t edges_per_node, std::uint64_t seed);

}  // namespace polmin::synth
