// Command-line harness: simulate | optimize | synth | analyze.
// Exit codes: 0 success, 2 validation/parse error, 3 convergence error.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "polmin/baselines.hpp"
#include "polmin/errors.hpp"
#include "polmin/fj.hpp"
#include "polmin/gdpm.hpp"
#include "polmin/gradient.hpp"
#include "polmin/graph.hpp"
#include "polmin/lowrank.hpp"
#include "polmin/synthgen.hpp"
#include "polmin/vec_ops.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace polmin;

namespace {

constexpr int kSchemaVersion = 1;

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open graph file: " + path);
  return Graph::from_edge_list(in);
}

std::vector<double> load_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open opinion file: " + path);
  return read_vector(in);
}

TopicMatrix load_topic(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open matrix file: " + path);
  return TopicMatrix::renormalized(read_matrix_tsv(in));
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  out << j.dump(2) << '\n';
}

struct CommonOpts {
  std::string graph, opinions, x, y, out = ".";
  double c = 0.0, theta = 0.1, eps = 1e-6, learning_rate = 10.0;
  std::string algo = "gdpm";
  std::size_t iters = 100;
  std::uint64_t seed = 42;
  std::vector<std::size_t> frozen_topics;
};

LowRankModel build_model(const CommonOpts& o, Graph g) {
  return LowRankModel(std::move(g), load_topic(o.x), load_topic(o.y), o.c);
}

int cmd_simulate(const CommonOpts& o) {
  Graph g = load_graph(o.graph);
  OpinionVector s(load_vector(o.opinions));
  auto z = equilibrium_exact(g, s);
  auto idx = indices(g, s, z);

  json report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = "simulate";
  report["n"] = g.num_vertices();
  report["m"] = g.num_edges();
  report["total_weight"] = g.total_weight();
  report["base"] = {{"polarization", idx.polarization},
                    {"disagreement", idx.disagreement},
                    {"index", idx.index}};

  if (!o.x.empty() || !o.y.empty() || o.c != 0.0) {
    if (o.x.empty() || o.y.empty())
      throw ValidationError("simulate with C > 0 needs both --x and --y");
    LowRankModel model = build_model(o, std::move(g));
    auto cond = spectral_condition(model);
    auto zx = approx_opinions(model, s, o.eps, nullptr, &cond);
    const double index = vec::dot(s, zx);
    double pol = 0.0;
    for (double v : zx) pol += v * v;
    report["augmented"] = {{"polarization", pol},
                           {"disagreement", index - pol},
                           {"index", index},
                           {"eps", o.eps}};
    report["spectral_condition"] = {{"norm_estimate", cond.norm_estimate},
                                    {"threshold", cond.threshold},
                                    {"satisfied", cond.satisfied}};
  }
  fs::create_directories(o.out);
  write_json(fs::path(o.out) / "report.json", report);
  std::cout << report.dump(2) << '\n';
  return 0;
}

int cmd_optimize(const CommonOpts& o) {
  const auto t0 = std::chrono::steady_clock::now();
  Graph g = load_graph(o.graph);
  OpinionVector s(load_vector(o.opinions));
  LowRankModel model = build_model(o, std::move(g));
  auto bounds = bounds_from_theta(model.X(), o.theta, o.frozen_topics);

  OptimizeResult result = [&] {
    if (o.algo == "gdpm") {
      GdpmConfig cfg;
      cfg.learning_rate = o.learning_rate;
      cfg.max_iters = o.iters;
      cfg.grad_eps = o.eps;
      return optimize(model, s, bounds, cfg);
    }
    if (o.algo == "bl1" || o.algo == "bl2") {
      BaselineConfig cfg;
      cfg.variant =
          o.algo == "bl1" ? BaselineVariant::bl1 : BaselineVariant::bl2;
      cfg.max_iters = o.iters;
      cfg.eps = o.eps;
      return run_baseline(model, s, bounds, cfg);
    }
    throw ValidationError("unknown --algo '" + o.algo +
                          "' (expected gdpm | bl1 | bl2)");
  }();

  fs::create_directories(o.out);
  {
    std::ofstream xout(fs::path(o.out) / "x_best.tsv");
    write_matrix_tsv(xout, result.x_best.matrix());
    std::ofstream tout(fs::path(o.out) / "trace.csv");
    write_trace_csv(tout, result.trace);
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  json report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = "optimize";
  report["algo"] = o.algo;
  report["c"] = o.c;
  report["theta"] = o.theta;
  report["iterations"] = result.trace.empty() ? 0 : result.trace.size() - 1;
  report["objective_initial"] = result.objective_initial;
  report["objective_best"] = result.objective_best;
  report["reduction_ratio"] =
      reduction_ratio(result.objective_initial, result.objective_best);
  report["wall_time_s"] = wall;  // the only non-reproducible field
  write_json(fs::path(o.out) / "report.json", report);
  std::cout << report.dump(2) << '\n';
  return 0;
}

int cmd_synth(const CommonOpts& o, std::size_t n, std::size_t k,
              const std::string& dist, std::size_t edges_per_node) {
  synth::SynthConfig cfg;
  cfg.seed = o.seed;
  cfg.k = k;
  if (dist == "uniform")
    cfg.opinion_dist = synth::OpinionDist::uniform;
  else if (dist == "powerlaw")
    cfg.opinion_dist = synth::OpinionDist::powerlaw;
  else if (dist == "exponential")
    cfg.opinion_dist = synth::OpinionDist::exponential;
  else if (dist == "polarized")
    cfg.opinion_dist = synth::OpinionDist::polarized;
  else
    throw ValidationError("unknown --dist '" + dist + "'");

  Graph g = synth::gen_graph(n, edges_per_node, o.seed);
  auto s = synth::gen_opinions(n, cfg);
  auto x = synth::gen_x(n, cfg);
  auto y = synth::gen_y(n, cfg, s);

  fs::create_directories(o.out);
  {
    std::ofstream gout(fs::path(o.out) / "graph.txt");
    g.save_edge_list(gout);
    std::ofstream sout(fs::path(o.out) / "opinions.txt");
    write_vector(sout, s);
    std::ofstream xout(fs::path(o.out) / "x.tsv");
    write_matrix_tsv(xout, x.matrix());
    std::ofstream yout(fs::path(o.out) / "y.tsv");
    write_matrix_tsv(yout, y.matrix());
  }
  json report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = "synth";
  report["seed"] = o.seed;
  report["n"] = n;
  report["k"] = k;
  report["dist"] = dist;
  report["m"] = g.num_edges();
  write_json(fs::path(o.out) / "report.json", report);
  std::cout << report.dump(2) << '\n';
  return 0;
}

json group_stats(const std::vector<double>& values,
                 const std::vector<std::size_t>& order, std::size_t groups) {
  json out = json::array();
  const std::size_t n = order.size();
  for (std::size_t gidx = 0; gidx < groups; ++gidx) {
    const std::size_t lo = gidx * n / groups, hi = (gidx + 1) * n / groups;
    double mean = 0.0;
    for (std::size_t i = lo; i < hi; ++i) mean += values[order[i]];
    const auto count = double(hi - lo);
    mean /= count;
    double var = 0.0;
    for (std::size_t i = lo; i < hi; ++i)
      var += (values[order[i]] - mean) * (values[order[i]] - mean);
    out.push_back({{"group", gidx},
                   {"mean", mean},
                   {"stdev", count > 1 ? std::sqrt(var / (count - 1)) : 0.0}});
  }
  return out;
}

int cmd_analyze(const CommonOpts& o, const std::string& x_after_path) {
  Graph g = load_graph(o.graph);
  OpinionVector s(load_vector(o.opinions));
  auto x_before = load_topic(o.x);
  auto x_after = load_topic(x_after_path);
  auto y = load_topic(o.y);
  if (x_before.rows() != x_after.rows() || x_before.cols() != x_after.cols())
    throw ValidationError("analyze: X matrices have different shapes");

  LowRankModel before(g, x_before, y, o.c);
  LowRankModel after = before.with_x(x_after);
  const std::size_t n = before.n(), k = before.k();

  auto z_before = approx_opinions(before, s, o.eps);
  auto z_after = approx_opinions(after, s, o.eps);
  auto sig_before = topic_signals(before, z_before);
  auto sig_after = topic_signals(after, z_after);

  json topics = json::array();
  double delta_sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    double delta = 0.0, tau_s = 0.0;
    for (std::size_t i = 0; i < n; ++i) delta += x_after(i, j) - x_before(i, j);
    for (std::size_t u = 0; u < n; ++u) tau_s += y(j, u) * s[u];
    delta_sum += delta;
    topics.push_back({{"topic", j},
                      {"delta", delta},
                      {"tau_s", tau_s},
                      {"tau_z_before", sig_before.tau[j]},
                      {"tau_z_after", sig_after.tau[j]}});
  }
  if (std::abs(delta_sum) > 1e-9 * double(n))
    throw ValidationError("analyze: column deltas do not conserve weight");

  // degree increase rate = A_X degree / original degree (post-optimization)
  std::vector<double> rate(n), influence(n);
  for (std::size_t i = 0; i < n; ++i) {
    rate[i] = after.ax_degree()[i] / g.weighted_degree(i);
    for (std::size_t j = 0; j < k; ++j) influence[i] += y(j, i);
  }
  auto order_by = [&](const std::vector<double>& key) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return key[a] != key[b] ? key[a] > key[b] : a < b;
    });
    return order;
  };
  const std::size_t groups = std::min<std::size_t>(10, n);

  json report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = "analyze";
  report["delta_sum"] = delta_sum;
  report["topics"] = topics;
  report["degree_increase_by_influence"] =
      group_stats(rate, order_by(influence), groups);
  report["degree_increase_by_degree"] = [&] {
    std::vector<double> deg(n);
    for (std::size_t i = 0; i < n; ++i) deg[i] = g.weighted_degree(i);
    return group_stats(rate, order_by(deg), groups);
  }();

  fs::create_directories(o.out);
  write_json(fs::path(o.out) / "report.json", report);
  std::cout << report.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Opinion-dynamics toolkit: simulate, optimize, synthesize, "
               "and analyze timeline-induced polarization"};
  app.require_subcommand(1);
  CommonOpts o;
  std::size_t synth_n = 1000, synth_k = 20, edges_per_node = 5;
  std::string dist = "polarized", x_after;

  auto add_common = [&](CLI::App* cmd, bool needs_graph) {
    auto* gopt = cmd->add_option("--graph", o.graph, "edge-list file");
    auto* sopt = cmd->add_option("--opinions", o.opinions,
                                 "innate opinions, one per line");
    if (needs_graph) {
      gopt->required();
      sopt->required();
    }
    cmd->add_option("--c", o.c, "extra-weight fraction C");
    cmd->add_option("--eps", o.eps, "accuracy parameter");
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--out", o.out, "output directory");
    return cmd;
  };

  auto* sim = add_common(app.add_subcommand("simulate",
                                            "indices on G and on G + A_X"),
                         true);
  sim->add_option("--x", o.x, "user-topic matrix TSV");
  sim->add_option("--y", o.y, "influence-topic matrix TSV");

  auto* opt = add_common(
      app.add_subcommand("optimize", "minimize the index over Q"), true);
  opt->add_option("--x", o.x, "user-topic matrix TSV")->required();
  opt->add_option("--y", o.y, "influence-topic matrix TSV")->required();
  opt->add_option("--theta", o.theta, "per-entry budget in [0,1]");
  opt->add_option("--algo", o.algo, "gdpm | bl1 | bl2");
  opt->add_option("--learning-rate", o.learning_rate, "step constant L");
  opt->add_option("--iters", o.iters, "maximum iterations");
  opt->add_option("--frozen-topics", o.frozen_topics,
                  "comma-separated topic ids pinned to their current weights")
      ->delimiter(',');

  auto* syn = add_common(
      app.add_subcommand("synth", "generate a synthetic instance"), false);
  syn->add_option("--n", synth_n, "number of users");
  syn->add_option("--k", synth_k, "number of topics");
  syn->add_option("--dist", dist,
                  "uniform | powerlaw | exponential | polarized");
  syn->add_option("--edges-per-node", edges_per_node,
                  "attachment edges per node");

  auto* ana = add_common(
      app.add_subcommand("analyze", "topic and degree shift report"), true);
  ana->add_option("--x", o.x, "user-topic matrix before")->required();
  ana->add_option("--x-after", x_after, "user-topic matrix after")->required();
  ana->add_option("--y", o.y, "influence-topic matrix TSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(o);
    if (opt->parsed()) return cmd_optimize(o);
    if (syn->parsed()) return cmd_synth(o, synth_n, synth_k, dist,
                                        edges_per_node);
    if (ana->parsed()) return cmd_analyze(o, x_after);
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << '\n';
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
