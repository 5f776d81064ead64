#include "polmin/gdpm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include "polmin/errors.hpp"
#include "polmin/gradient.hpp"
#include "polmin/projection.hpp"
#include "polmin/vec_ops.hpp"

namespace polmin {

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out.precision(17);
  out << "iter,objective,grad_norm,seconds\n";
  for (const auto& r : trace)
    out << r.iter << ',' << r.objective << ',' << r.grad_norm << ','
        << r.seconds << '\n';
}

double reduction_ratio(double f_before, double f_after) {
  if (!(f_before > 0.0))
    throw ValidationError("reduction_ratio: baseline objective must be > 0");
  return f_after / f_before;
}

namespace {

void check_feasible(const TopicMatrix& x, const Bounds& bounds) {
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j)
      if (x(i, j) < bounds.lower()(i, j) - 1e-12 ||
          x(i, j) > bounds.upper()(i, j) + 1e-12)
        throw ValidationError("starting point violates the bounds at (" +
                              std::to_string(i) + ", " + std::to_string(j) +
                              ")");
}

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

}  // namespace

OptimizeResult optimize(const LowRankModel& model, std::span<const double> s,
                        const Bounds& bounds, const GdpmConfig& config) {
  if (!(config.learning_rate > 0.0))
    throw ValidationError("learning rate must be positive");
  check_feasible(model.X(), bounds);
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = model.n();
  const std::size_t k = model.k();
  const double step = 1.0 / config.learning_rate;

  // opinion accuracy that certifies a gradient error <= grad_eps
  const double cw = model.C() * model.W();
  const double yf = model.Y().matrix().frobenius_norm();
  const double z_eps = 0.125 *
                       std::min(config.grad_eps, std::sqrt(config.grad_eps)) *
                       std::sqrt(double(n)) / ((1.0 + cw) * (1.0 + yf));

  LowRankModel current = model;
  const Matrix& x0 = model.X().matrix();
  Matrix grad_history(n, k);  // sum_t alpha_t grad(X^(t))

  OptimizeResult result{model.X(), 0.0, 0.0, {}};

  auto z = approx_opinions(current, s, z_eps);
  double f_cur = vec::dot(s, z);
  result.objective_initial = f_cur;
  result.objective_best = f_cur;
  result.trace.push_back({0, f_cur, 0.0, elapsed(start)});

  for (std::size_t t = 1; t <= config.max_iters; ++t) {
    try {
      Matrix grad = gradient_from_opinions(current, z);
      const double grad_norm = grad.frobenius_norm();

      // V^(t): plain projected step from the current iterate
      Matrix v = current.X().matrix();
      vec::axpy(-step, grad.data(), v.data());
      v = project_matrix(v, bounds);

      // W^(t): projected weighted gradient history from the start point
      const double alpha = double(t + 1) / 2.0;
      vec::axpy(alpha, grad.data(), grad_history.data());
      Matrix w = x0;
      vec::axpy(-0.5 * step, grad_history.data(), w.data());
      w = project_matrix(w, bounds);

      // X^(t+1) = tau V + (1 - tau) W, with A_t = sum_{i=0..t} (i+1)/2
      const double a_t = double(t + 1) * double(t + 2) / 4.0;
      const double tau = alpha / a_t;
      // the convex combination is in Q mathematically; clamp to keep the
      // bounds exact under rounding (singleton bounds pin X bit-exactly)
      Matrix next(n, k);
      for (std::size_t i = 0; i < n * k; ++i)
        next.data()[i] =
            std::clamp(tau * v.data()[i] + (1.0 - tau) * w.data()[i],
                       bounds.lower().data()[i], bounds.upper().data()[i]);

      // the inexact-oracle guarantee is on the V sequence, so track it too
      if (config.track_objective) {
        LowRankModel v_model = current.with_x(TopicMatrix(v));
        double f_v = vec::dot(s, approx_opinions(v_model, s, z_eps));
        if (f_v < result.objective_best) {
          result.objective_best = f_v;
          result.x_best = v_model.X();
        }
      }

      current = current.with_x(TopicMatrix(next));
      z = approx_opinions(current, s, z_eps);
      const double f_next = vec::dot(s, z);
      if (f_next < result.objective_best) {
        result.objective_best = f_next;
        result.x_best = current.X();
      }
      result.trace.push_back({t, f_next, grad_norm, elapsed(start)});

      if (f_cur > 0.0 && f_next / f_cur > config.convergence_ratio) break;
      f_cur = f_next;
    } catch (const ConvergenceError& e) {
      throw ConvergenceError(std::string(e.what()) + " (optimizer iteration " +
                                 std::to_string(t) + ")",
                             e.residual());
    }
  }
  return result;
}

}  // namespace polmin
