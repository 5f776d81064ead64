#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "polmin/lowrank.hpp"
#include "polmin/matrix.hpp"

namespace polmin {

struct TraceRecord {
  std::size_t iter = 0;
  double objective = 0.0;
  double grad_norm = 0.0;
  double seconds = 0.0;
  std::size_t rows_skipped = 0;  // baselines only
};
using Trace = std::vector<TraceRecord>;

// CSV schema shared by the optimizer and the baselines:
// iter,objective,grad_norm,seconds
void write_trace_csv(std::ostream& out, const Trace& trace);

struct GdpmConfig {
  // step constant; the theoretical value is lipschitz_bound(model, s)
  double learning_rate = 10.0;
  std::size_t max_iters = 100;
  double grad_eps = 1e-6;
  // stop once f(T)/f(T-1) exceeds this ratio
  double convergence_ratio = 0.99999;
  bool track_objective = true;
};

struct OptimizeResult {
  TopicMatrix x_best;
  double objective_initial = 0.0;
  double objective_best = 0.0;
  Trace trace;
};

/// Accelerated projected-gradient minimization of f over Q with inexact
/// gradients. Per iteration: project the gradient step (V), project the
/// weighted gradient history from the start point (W), and combine with
/// tau_T = alpha_T / A_T. Returns the best iterate seen among the X and V
/// sequences.
OptimizeResult optimize(const LowRankModel& model, std::span<const double> s,
                        const Bounds& bounds, const GdpmConfig& config);

/// f_after / f_before; errors on nonpositive f_before.
double reduction_ratio(double f_before, double f_after);

}  // namespace polmin
