#pragma once

#include <span>
#include <vector>

#include "polmin/gdpm.hpp"
#include "polmin/lowrank.hpp"

namespace polmin {

/// Per-topic opinion signals used by the greedy baselines.
struct TopicSignals {
  double z_bar = 0.0;           // average expressed opinion
  std::vector<double> tau;      // tau_j = sum_u Y_ju z(u)
};

TopicSignals topic_signals(const LowRankModel& model,
                           std::span<const double> z);

enum class BaselineVariant { bl1, bl2 };

// BL-1's printed pseudocode picks both topics by minimizing |tau - z_bar|,
// while its prose maximizes the distance for the penalized topic. Default
// follows the listing.
enum class Bl1Selection { as_listed, as_prose };

struct BaselineConfig {
  BaselineVariant variant = BaselineVariant::bl2;
  std::size_t max_iters = 10;
  double eps = 1e-6;  // opinion-estimate accuracy per iteration
  Bl1Selection bl1_selection = Bl1Selection::as_listed;
};

/// Greedy timeline re-weighting: per user move as much weight as the bounds
/// allow from a penalized topic to a favored one. BL-1 targets topics by
/// distance from the average opinion; BL-2 strengthens topics opposing the
/// user's own opinion. Returns the best iterate over all iterations.
OptimizeResult run_baseline(const LowRankModel& model,
                            std::span<const double> s, const Bounds& bounds,
                            const BaselineConfig& config);

}  // namespace polmin
