// Acceptance suite: one numbered criterion per invocation, one
// [PASS]/[FAIL] line each. Exit 0 on pass.

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "polmin/baselines.hpp"
#include "polmin/fj.hpp"
#include "polmin/gdpm.hpp"
#include "polmin/gradient.hpp"
#include "polmin/graph.hpp"
#include "polmin/lowrank.hpp"
#include "polmin/projection.hpp"
#include "polmin/synthgen.hpp"
#include "polmin/vec_ops.hpp"

using namespace polmin;
using namespace testutil;

namespace {

TopicMatrix stochastic(std::size_t rows, std::size_t cols,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return TopicMatrix(random_stochastic(rows, cols, rng));
}

struct Instance {
  Graph graph;
  OpinionVector s;
  TopicMatrix x, y;
};

Instance synthetic_instance(std::size_t n, std::size_t k,
                            std::uint64_t seed) {
  synth::SynthConfig cfg;
  cfg.seed = seed;
  cfg.k = k;
  cfg.opinion_dist = synth::OpinionDist::polarized;
  auto s = synth::gen_opinions(n, cfg);
  return {synth::gen_graph(n, 5, seed), s, synth::gen_x(n, cfg),
          synth::gen_y(n, cfg, s)};
}

double gdpm_ratio(const Instance& inst, double c, double theta) {
  LowRankModel model(inst.graph, inst.x, inst.y, c);
  auto bounds = bounds_from_theta(inst.x, theta);
  GdpmConfig cfg;  // defaults: L = 10, 100 iterations, ratio stop 0.99999
  auto r = optimize(model, inst.s, bounds, cfg);
  return reduction_ratio(r.objective_initial, r.objective_best);
}

double baseline_ratio(const Instance& inst, double c, double theta,
                      BaselineVariant variant) {
  LowRankModel model(inst.graph, inst.x, inst.y, c);
  auto bounds = bounds_from_theta(inst.x, theta);
  BaselineConfig cfg;
  cfg.variant = variant;
  auto r = run_baseline(model, inst.s, bounds, cfg);
  return reduction_ratio(r.objective_initial, r.objective_best);
}

std::vector<double> ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = (double(i) + double(j)) / 2.0 + 1.0;  // tie-averaged
    for (std::size_t t = i; t <= j; ++t) r[order[t]] = avg;
    i = j + 1;
  }
  return r;
}

double spearman(std::span<const double> a, std::span<const double> b) {
  auto ra = ranks(a), rb = ranks(b);
  const double n = double(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  return cov / std::sqrt(va * vb);
}

// ---- criteria ----

// Low-rank estimation fidelity against the dense oracle.
bool criterion_1(std::string& detail) {
  std::mt19937_64 rng(1);
  double worst_margin = 1e300;
  for (int inst = 0; inst < 20; ++inst) {
    const std::size_t n = 50 + std::size_t(inst) * 23;  // 50 .. 487
    const std::size_t k = 3 + std::size_t(inst) % 18;   // 3 .. 20
    const double c = inst % 2 == 0 ? 0.1 : 0.4;
    auto x = stochastic(n, k, 200 + std::uint64_t(inst));
    auto y = stochastic(k, n, 300 + std::uint64_t(inst));
    // M >= I, so ||V M^-1 U||_2 <= ||U||_F ||V||_F = ||X||_F^2 + ||Y||_F^2;
    // scale the edge weights so C W times that stays under 0.99 * 2n,
    // which makes the spectral condition hold by construction
    const double fbound = x.matrix().frobenius_norm() *
                              x.matrix().frobenius_norm() +
                          y.matrix().frobenius_norm() *
                              y.matrix().frobenius_norm();
    Graph g0 = random_connected_graph(n, 4 * n, 100 + std::uint64_t(inst));
    const double scale = std::min(
        1.0, 0.9 * 0.99 * 2.0 * double(n) / (c * g0.total_weight() * fbound));
    Graph g =
        random_connected_graph(n, 4 * n, 100 + std::uint64_t(inst), scale);
    LowRankModel m(g, x, y, c);
    if (!spectral_condition(m).satisfied) {
      detail = "spectral condition unexpectedly unsatisfied";
      return false;
    }
    auto s = random_vector(n, rng);
    auto want = dense_opinions(m, s);
    for (double eps : {1e-4, 1e-6, 1e-8}) {
      const double err = nrm2_diff(approx_opinions(m, s, eps), want);
      worst_margin = std::min(worst_margin, eps - err);
      if (err > eps) {
        detail = "error " + std::to_string(err) + " above eps " +
                 std::to_string(eps) + " (n=" + std::to_string(n) + ")";
        return false;
      }
    }
  }
  detail = "20 instances x 3 tolerances, worst margin " +
           std::to_string(worst_margin);
  return true;
}

// Total-weight identity ||XY + Y^T X^T||_{1,1} = 2n.
bool criterion_2(std::string& detail) {
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 40 * std::size_t(i + 1);  // up to 2000
    const std::size_t k = 2 + std::size_t(i) * 2;   // up to 100
    auto x = stochastic(n, k, 400 + std::uint64_t(i));
    auto y = stochastic(k, n, 500 + std::uint64_t(i));
    worst = std::max(worst,
                     std::abs(weight_identity(x, y) - 2.0 * double(n)));
  }
  detail = "50 pairs, worst |identity - 2n| = " + std::to_string(worst);
  return worst <= 1e-9;
}

// Gradient vs central finite differences on the dense objective.
bool criterion_3(std::string& detail) {
  std::mt19937_64 rng(3);
  const double h = 1e-5;
  double worst = 0.0;
  for (int inst = 0; inst < 10; ++inst) {
    const std::size_t n = 10 + 2 * std::size_t(inst);  // <= 28
    const std::size_t k = 3 + std::size_t(inst) % 3;   // <= 5
    Graph g = random_connected_graph(n, 2 * n, 600 + std::uint64_t(inst));
    Matrix x = random_stochastic(n, k, rng);
    Matrix y = random_stochastic(k, n, rng);
    const double c = 0.3;
    LowRankModel m(g, TopicMatrix(x), TopicMatrix(y), c);
    auto s = random_vector(n, rng);
    Matrix grad = gradient_exact(m, s);
    std::uniform_int_distribution<std::size_t> pi(0, n - 1), pj(0, k - 1);
    for (int t = 0; t < 20; ++t) {
      const std::size_t i = pi(rng), j = pj(rng);
      Matrix xp = x, xm = x;
      xp(i, j) += h;
      xm(i, j) = std::max(0.0, xm(i, j) - h);
      const double fd = (dense_objective_raw(g, xp, y, c, s) -
                         dense_objective_raw(g, xm, y, c, s)) /
                        (xp(i, j) - xm(i, j));
      worst = std::max(worst, std::abs(grad(i, j) - fd));
    }
  }
  detail = "10 instances x 20 entries, worst |grad - fd| = " +
           std::to_string(worst);
  return worst <= 1e-5;
}

// Projection vs a high-resolution bisection oracle; idempotence exact.
bool criterion_4(std::string& detail) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> vd(-1.0, 2.0), bd(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> kd(2, 20);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = kd(rng);
    std::vector<double> v(k), l(k), u(k);
    double lsum, usum;
    do {
      lsum = usum = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        v[i] = vd(rng);
        double a = bd(rng), b = bd(rng);
        l[i] = std::min(a, b) * 0.4;
        u[i] = std::max(a, b);
        lsum += l[i];
        usum += u[i];
      }
    } while (lsum > 1.0 || usum < 1.0);
    auto got = project_row(v, l, u);

    // oracle: 200-step bisection on the multiplier
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < k; ++i) {
      lo = std::min(lo, v[i] - u[i] - 1.0);
      hi = std::max(hi, v[i] - l[i] + 1.0);
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      double sum = 0.0;
      for (std::size_t i = 0; i < k; ++i)
        sum += std::clamp(v[i] - mid, l[i], u[i]);
      (sum >= 1.0 ? lo : hi) = mid;
    }
    double dist = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double want = std::clamp(v[i] - lo, l[i], u[i]);
      dist += (got[i] - want) * (got[i] - want);
      if (got[i] < l[i] || got[i] > u[i]) {
        detail = "bound violated";
        return false;
      }
      sum += got[i];
    }
    worst = std::max(worst, std::sqrt(dist));
    if (std::abs(sum - 1.0) > 1e-12) {
      detail = "row sum off by " + std::to_string(sum - 1.0);
      return false;
    }
    auto twice = project_row(got, l, u);
    if (nrm2_diff(twice, got) > 1e-12) {
      detail = "not idempotent";
      return false;
    }
  }
  detail = "200 rows, worst oracle distance " + std::to_string(worst);
  return worst <= 1e-8;
}

// Optimizer ordering: GDPM <= BL-2 <= BL-1 <= 1 and GDPM < 0.99.
bool criterion_5(std::string& detail) {
  detail.clear();
  for (std::uint64_t seed : {42, 43, 44, 45, 46}) {
    auto inst = synthetic_instance(1000, 20, seed);
    const double rg = gdpm_ratio(inst, 0.1, 0.1);
    const double r2 = baseline_ratio(inst, 0.1, 0.1, BaselineVariant::bl2);
    const double r1 = baseline_ratio(inst, 0.1, 0.1, BaselineVariant::bl1);
    detail += "seed " + std::to_string(seed) + ": gdpm=" + std::to_string(rg) +
              " bl2=" + std::to_string(r2) + " bl1=" + std::to_string(r1) +
              "; ";
    if (!(rg <= r2 + 1e-12 && r2 <= r1 + 1e-12 && r1 <= 1.0 + 1e-12 &&
          rg < 0.99))
      return false;
  }
  return true;
}

// Monotone trends in theta and in C (0.002 slack per step).
bool criterion_6(std::string& detail) {
  auto inst = synthetic_instance(1000, 20, 42);
  detail = "theta sweep:";
  double prev = 2.0;
  for (double theta : {0.05, 0.1, 0.15, 0.2}) {
    const double r = gdpm_ratio(inst, 0.1, theta);
    detail += " " + std::to_string(r);
    if (r > prev + 0.002) return false;
    prev = r;
  }
  detail += "; C sweep:";
  prev = 2.0;
  for (double c : {0.1, 0.2, 0.3, 0.4}) {
    const double r = gdpm_ratio(inst, c, 0.1);
    detail += " " + std::to_string(r);
    if (r > prev + 0.002) return false;
    prev = r;
  }
  return true;
}

// Dense minimum eigenvalue of M = I + L + diag(A_X 1) is >= 1.
bool criterion_7(std::string& detail) {
  double worst = 1e300;
  for (int inst = 0; inst < 20; ++inst) {
    const std::size_t n = 20 + 9 * std::size_t(inst);  // <= 191
    const std::size_t k = 2 + std::size_t(inst) % 7;
    Graph g = random_connected_graph(n, 3 * n, 700 + std::uint64_t(inst));
    LowRankModel m(g, stochastic(n, k, 800 + std::uint64_t(inst)),
                   stochastic(k, n, 900 + std::uint64_t(inst)),
                   inst % 2 == 0 ? 0.2 : 0.4);
    Eigen::MatrixXd mop = dense_laplacian(g);
    for (std::size_t i = 0; i < n; ++i)
      mop(Eigen::Index(i), Eigen::Index(i)) += 1.0 + m.ax_degree()[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mop);
    worst = std::min(worst, es.eigenvalues()(0));
  }
  detail = "20 instances, min eigenvalue " + std::to_string(worst);
  return worst >= 1.0 - 1e-9;
}

// Near-linear scaling of the estimation path when n doubles.
bool criterion_8(std::string& detail) {
  const std::size_t k = 5;
  const std::size_t sizes[] = {10000, 20000, 40000};
  struct Case {
    LowRankModel model;
    OpinionVector s;
    double eps;
    std::vector<double> times;
  };
  std::vector<Case> cases;
  for (std::size_t n : sizes) {
    synth::SynthConfig cfg;
    cfg.seed = n;
    cfg.k = k;
    cfg.opinion_dist = synth::OpinionDist::polarized;
    Graph g = synth::gen_graph(n, 5, n);
    auto s = synth::gen_opinions(n, cfg);
    LowRankModel m(g, synth::gen_x(n, cfg), synth::gen_y(n, cfg, s), 0.1);
    // fixed *relative* accuracy across sizes: ||s||_2 grows like sqrt(n),
    // so an absolute target would tighten with n and skew the iteration count
    const double eps = 1e-6 * std::sqrt(double(n) / 10000.0);
    approx_opinions(m, s, eps);  // warm-up, untimed
    cases.push_back({std::move(m), std::move(s), eps, {}});
  }
  // each round times all sizes back-to-back and evicts the LLC before each
  // timed run, so no size keeps a cache-residency advantage. The host is
  // multi-tenant: neighbor memory-bandwidth contention inflates individual
  // runs (it only ever adds time), and it hits the largest size hardest, so
  // the per-size *minimum* over the rounds estimates the uncontended cost
  static std::vector<double> flusher(16u << 20);  // 128 MiB
  for (int run = 0; run < 15; ++run) {
    for (auto& c : cases) {
      for (std::size_t i = 0; i < flusher.size(); i += 8) flusher[i] += 1.0;
      const auto t0 = std::chrono::steady_clock::now();
      approx_opinions(c.model, c.s.values(), c.eps);
      c.times.push_back(std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0)
                            .count());
    }
  }
  std::vector<double> best;
  detail.clear();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    best.push_back(*std::min_element(cases[i].times.begin(),
                                     cases[i].times.end()));
    detail += "n=" + std::to_string(sizes[i]) + " best " +
              std::to_string(best.back()) + "s; ";
  }
  bool ok = true;
  for (std::size_t step = 0; step + 1 < best.size(); ++step) {
    const double ratio = best[step + 1] / best[step];
    detail += "x" + std::to_string(ratio) + "; ";
    ok = ok && ratio <= 2.6;
  }
  return ok;
}

// Iterated FJ updates reach the solved equilibrium.
bool criterion_9(std::string& detail) {
  std::mt19937_64 rng(9);
  double worst = 0.0;
  for (int inst = 0; inst < 10; ++inst) {
    const std::size_t n = 10 + 3 * std::size_t(inst);
    Graph g = random_connected_graph(n, 2 * n, 1000 + std::uint64_t(inst));
    auto s = mean_center_rescale(random_vector(n, rng));
    std::vector<double> z(s.values());
    for (int t = 0; t < 10000; ++t) z = fj_step(g, s, z);
    worst = std::max(worst, nrm2_diff(z, equilibrium_exact(g, s, true)));
  }
  detail = "10 instances, worst deviation " + std::to_string(worst);
  return worst <= 1e-6;
}

// Topic behavior after optimization: weight moves toward topics with large
// |tau_{j,s}| and the post-run tau_{j,z} spread narrows.
bool criterion_10(std::string& detail) {
  auto inst = synthetic_instance(1000, 20, 42);
  LowRankModel model(inst.graph, inst.x, inst.y, 0.1);
  auto bounds = bounds_from_theta(inst.x, 0.1);
  auto r = optimize(model, inst.s, bounds, GdpmConfig{});

  const std::size_t k = 20;
  std::vector<double> tau_s(k), abs_tau(k), delta(k);
  for (std::size_t j = 0; j < k; ++j) {
    tau_s[j] = vec::dot(inst.y.row(j), inst.s);
    abs_tau[j] = std::abs(tau_s[j]);
    for (std::size_t i = 0; i < 1000; ++i)
      delta[j] += r.x_best(i, j) - inst.x(i, j);
  }
  const double rho = spearman(abs_tau, delta);

  auto range_of = [&](const LowRankModel& m) {
    auto z = approx_opinions(m, inst.s, 1e-8);
    auto sig = topic_signals(m, z);
    auto [lo, hi] = std::minmax_element(sig.tau.begin(), sig.tau.end());
    return *hi - *lo;
  };
  const double pre = range_of(model);
  const double post = range_of(model.with_x(r.x_best));
  detail = "spearman(|tau_s|, delta) = " + std::to_string(rho) +
           ", tau_z range " + std::to_string(pre) + " -> " +
           std::to_string(post);
  return rho > 0.3 && post < pre;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance <criterion 1-10>\n");
    return 2;
  }
  const int id = std::atoi(argv[1]);
  static const struct {
    bool (*fn)(std::string&);
    const char* name;
  } table[] = {
      {criterion_1, "low-rank estimation fidelity"},
      {criterion_2, "total-weight identity = 2n"},
      {criterion_3, "gradient vs finite differences"},
      {criterion_4, "projection optimality"},
      {criterion_5, "optimizer ordering gdpm <= bl2 <= bl1 <= 1"},
      {criterion_6, "monotone trends in theta and C"},
      {criterion_7, "eigenvalue floor of M"},
      {criterion_8, "near-linear scaling"},
      {criterion_9, "iterated FJ reaches equilibrium"},
      {criterion_10, "topic-behavior qualitative check"},
  };
  if (id < 1 || id > 10) {
    std::fprintf(stderr, "criterion must be 1..10\n");
    return 2;
  }
  std::string detail;
  bool ok = false;
  try {
    ok = table[id - 1].fn(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  std::printf("[%s] criterion %d (%s): %s\n", ok ? "PASS" : "FAIL", id,
              table[id - 1].name, detail.c_str());
  return ok ? 0 : 1;
}
