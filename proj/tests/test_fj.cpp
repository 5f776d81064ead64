#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "polmin/errors.hpp"
#include "polmin/fj.hpp"
#include "polmin/vec_ops.hpp"

using namespace polmin;
using namespace testutil;

TEST_CASE("fj_step arithmetic on path(2)") {
  Graph g = path_graph(2);
  std::vector<double> s{1.0, -1.0};
  auto z = fj_step(g, s, s);
  CHECK(z[0] == 0.0);
  CHECK(z[1] == 0.0);
}

TEST_CASE("fj_step at zero stays zero") {
  Graph g = path_graph(4);
  std::vector<double> zero(4, 0.0);
  auto z = fj_step(g, zero, zero);
  for (double v : z) CHECK(v == 0.0);
}

TEST_CASE("10k fj_steps on path(3) converge to the equilibrium") {
  Graph g = path_graph(3);
  std::vector<double> s{1.0, 0.0, -1.0};
  std::vector<double> z = s;
  for (int t = 0; t < 10000; ++t) z = fj_step(g, s, z);
  CHECK(std::abs(z[0] - 0.5) <= 1e-6);
  CHECK(std::abs(z[1] - 0.0) <= 1e-6);
  CHECK(std::abs(z[2] + 0.5) <= 1e-6);
}

TEST_CASE("equilibrium_exact on the named instances") {
  Graph g2 = path_graph(2);
  auto z2 = equilibrium_exact(g2, std::vector<double>{1.0, -1.0});
  CHECK(z2[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(z2[1] == doctest::Approx(-1.0 / 3.0).epsilon(1e-10));

  Graph g3 = path_graph(3);
  auto z3 = equilibrium_exact(g3, std::vector<double>{1.0, 0.0, -1.0});
  CHECK(z3[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(z3[1] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(z3[2] == doctest::Approx(-0.5).epsilon(1e-10));

  auto z0 = equilibrium_exact(g3, std::vector<double>(3, 0.0));
  for (double v : z0) CHECK(v == 0.0);
}

TEST_CASE("iterative and dense equilibrium paths agree") {
  Graph g = random_connected_graph(150, 300, 31);
  std::mt19937_64 rng(9);
  auto s = random_vector(150, rng);
  auto fast = equilibrium_exact(g, s);
  auto dense = equilibrium_exact(g, s, /*dense_oracle=*/true);
  CHECK(nrm2_diff(fast, dense) <= 1e-10);
}

TEST_CASE("indices on path(2): P=2/9, D=4/9, I=2/3") {
  Graph g = path_graph(2);
  std::vector<double> s{1.0, -1.0};
  auto z = equilibrium_exact(g, s);
  auto idx = indices(g, s, z);
  CHECK(idx.polarization == doctest::Approx(2.0 / 9.0).epsilon(1e-9));
  CHECK(idx.disagreement == doctest::Approx(4.0 / 9.0).epsilon(1e-9));
  CHECK(idx.index == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(idx.index == doctest::Approx(vec::dot(s, z)).epsilon(1e-9));
}

TEST_CASE("indices: s=0 gives P=D=I=0; path(3) gives I=1") {
  Graph g = path_graph(3);
  std::vector<double> zero(3, 0.0);
  auto idx0 = indices(g, zero, equilibrium_exact(g, zero));
  CHECK(idx0.index == 0.0);

  std::vector<double> s{1.0, 0.0, -1.0};
  auto idx = indices(g, s, equilibrium_exact(g, s));
  CHECK(idx.index == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("indices rejects a non-equilibrium z") {
  Graph g = path_graph(3);
  std::vector<double> s{1.0, 0.0, -1.0};
  std::vector<double> bogus{0.9, 0.1, -0.7};
  CHECK_THROWS_AS(indices(g, s, bogus), ValidationError);
}

TEST_CASE("mean_center_rescale examples") {
  auto a = mean_center_rescale(std::vector<double>{0.0, 2.0});
  CHECK(a[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(a[1] == doctest::Approx(1.0).epsilon(1e-15));

  auto b = mean_center_rescale(std::vector<double>{1.0, 1.0, 4.0});
  CHECK(b[0] == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(b[1] == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(b[2] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b.centered());
}

TEST_CASE("mean_center_rescale is idempotent on normalized input") {
  std::vector<double> v{-1.0, 0.25, 0.75};  // centered, max-abs 1
  auto w = mean_center_rescale(v);
  for (std::size_t i = 0; i < v.size(); ++i)
    CHECK(std::abs(w[i] - v[i]) <= 1e-12);
}

TEST_CASE("mean_center_rescale rejects constant input") {
  CHECK_THROWS_AS(mean_center_rescale(std::vector<double>{0.3, 0.3, 0.3}),
                  ValidationError);
}

TEST_CASE("equilibrium is a fixed point of fj_step") {
  Graph g = random_connected_graph(60, 120, 77);
  std::mt19937_64 rng(10);
  auto s = random_vector(60, rng);
  auto z = equilibrium_exact(g, s);
  auto z2 = fj_step(g, s, z);
  CHECK(nrm2_diff(z, z2) <= 1e-9);
}

TEST_CASE("contraction: ||z|| <= ||s||") {
  std::mt19937_64 rng(12);
  for (std::uint64_t seed : {1, 2, 3}) {
    Graph g = random_connected_graph(80, 200, seed);
    auto s = random_vector(80, rng);
    auto z = equilibrium_exact(g, s);
    CHECK(vec::nrm2(z) <= vec::nrm2(s) + 1e-12);
  }
}

TEST_CASE("OpinionVector validates range and centering") {
  CHECK_THROWS_AS(OpinionVector(std::vector<double>{1.5}), ValidationError);
  CHECK_THROWS_AS(OpinionVector(std::vector<double>{0.5, 0.5}, true),
                  ValidationError);
  OpinionVector ok(std::vector<double>{0.5, -0.5}, true);
  CHECK(ok.centered());
}
