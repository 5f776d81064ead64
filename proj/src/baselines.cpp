#include "polmin/baselines.hpp"

#include <chrono>
#include <cmath>
#include <optional>

#include "polmin/errors.hpp"
#include "polmin/vec_ops.hpp"

namespace polmin {

TopicSignals topic_signals(const LowRankModel& model,
                           std::span<const double> z) {
  if (z.size() != model.n())
    throw ValidationError("topic_signals: length mismatch");
  TopicSignals sig;
  double sum = 0.0;
  for (double v : z) sum += v;
  sig.z_bar = sum / double(model.n());
  sig.tau.resize(model.k());
  for (std::size_t j = 0; j < model.k(); ++j)
    sig.tau[j] = vec::dot(model.Y().row(j), z);
  return sig;
}

namespace {

// one (favor, penalize) topic pick per row; nullopt = row skipped
struct Pick {
  std::size_t favor, penalize;
};

std::optional<Pick> pick_topics(const BaselineConfig& config,
                                const TopicSignals& sig,
                                std::span<const double> x_row,
                                std::span<const double> lo,
                                std::span<const double> hi, double z_i) {
  const std::size_t k = sig.tau.size();
  std::optional<std::size_t> favor, penalize;
  auto better_min = [](double cand, double best) { return cand < best; };

  if (config.variant == BaselineVariant::bl1) {
    double favor_score = 0.0, pen_score = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double dist = std::abs(sig.tau[j] - sig.z_bar);
      if (x_row[j] < hi[j] && (!favor || better_min(dist, favor_score))) {
        favor = j;
        favor_score = dist;
      }
      const bool pen_better =
          config.bl1_selection == Bl1Selection::as_listed
              ? (!penalize || dist < pen_score)
              : (!penalize || dist > pen_score);
      if (x_row[j] > lo[j] && pen_better) {
        penalize = j;
        pen_score = dist;
      }
    }
  } else {
    if (z_i == 0.0) return std::nullopt;  // opposing sign undefined
    double favor_score = 0.0, pen_score = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double opposing = -z_i * sig.tau[j];
      if (x_row[j] < hi[j] && (!favor || opposing > favor_score)) {
        favor = j;
        favor_score = opposing;
      }
      const double dist = std::abs(sig.tau[j] - sig.z_bar);
      if (x_row[j] > lo[j] && z_i * sig.tau[j] > 0.0 &&
          (!penalize || dist < pen_score)) {
        penalize = j;
        pen_score = dist;
      }
    }
  }
  if (!favor || !penalize || *favor == *penalize) return std::nullopt;
  return Pick{*favor, *penalize};
}

}  // namespace

OptimizeResult run_baseline(const LowRankModel& model,
                            std::span<const double> s, const Bounds& bounds,
                            const BaselineConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  };
  LowRankModel current = model;
  OptimizeResult result{model.X(), 0.0, 0.0, {}};

  for (std::size_t t = 0;; ++t) {
    auto z = approx_opinions(current, s, config.eps);
    const double objective = vec::dot(s, z);
    if (t == 0) {
      result.objective_initial = objective;
      result.objective_best = objective;
    } else if (objective < result.objective_best) {
      result.objective_best = objective;
      result.x_best = current.X();
    }
    std::size_t skipped = 0;
    if (t == config.max_iters) {
      result.trace.push_back({t, objective, 0.0, elapsed(), 0});
      break;
    }

    auto sig = topic_signals(current, z);
    Matrix x = current.X().matrix();
    for (std::size_t i = 0; i < x.rows(); ++i) {
      auto pick = pick_topics(config, sig, x.row(i), bounds.lower().row(i),
                              bounds.upper().row(i), z[i]);
      if (!pick) {
        ++skipped;
        continue;
      }
      const double delta =
          std::min(bounds.upper()(i, pick->favor) - x(i, pick->favor),
                   x(i, pick->penalize) - bounds.lower()(i, pick->penalize));
      // clamp away one-ulp overshoot past the bound
      x(i, pick->favor) = std::min(x(i, pick->favor) + delta,
                                   bounds.upper()(i, pick->favor));
      x(i, pick->penalize) = std::max(x(i, pick->penalize) - delta,
                                      bounds.lower()(i, pick->penalize));
    }
    result.trace.push_back({t, objective, 0.0, elapsed(), skipped});
    current = current.with_x(TopicMatrix(std::move(x)));
  }
  return result;
}

}  // namespace polmin
