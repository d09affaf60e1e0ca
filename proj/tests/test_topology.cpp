#include <cmath>
#include <random>

#include "adrc/errors.hpp"
#include "adrc/linalg.hpp"
#include "adrc/topology.hpp"
#include "doctest.h"

using namespace adrc;
using namespace adrc::topology;

namespace {

Digraph reconstructed_graph() { return Digraph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 1}, {1, 4}, {4, 5}}); }

// Random graph that is guaranteed to contain a spanning tree: every follower
// gets one in-edge from a lower-numbered vertex, plus random extras.
Digraph random_rooted_graph(std::mt19937_64& rng) {
  const int m = std::uniform_int_distribution<int>(1, 16)(rng);
  std::vector<Edge> edges;
  for (int v = 1; v <= m; ++v) edges.push_back({std::uniform_int_distribution<int>(0, v - 1)(rng), v});
  const int extras = std::uniform_int_distribution<int>(0, 2 * m)(rng);
  std::uniform_int_distribution<int> any(0, m);
  std::uniform_int_distribution<int> follower(1, m);
  for (int e = 0; e < extras; ++e) {
    const int from = any(rng);
    const int to = follower(rng);
    if (from != to) edges.push_back({from, to});
  }
  return Digraph(m, edges);
}

}  // namespace

TEST_CASE("Digraph rejects invalid edges") {
  CHECK_THROWS_AS(Digraph(2, {{1, 1}}), ValidationError);
  CHECK_THROWS_AS(Digraph(2, {{1, 0}}), ValidationError);
  CHECK_THROWS_AS(Digraph(2, {{0, 3}}), ValidationError);
  CHECK_THROWS_AS(Digraph(0, {}), ValidationError);
  const Digraph g(2, {{0, 1}, {0, 1}, {1, 2}});
  CHECK(g.edges().size() == 2);
  CHECK(g.adjacent(1, 0));
  CHECK(g.adjacent(2, 1));
  CHECK_FALSE(g.adjacent(1, 2));
}

TEST_CASE("build_laplacian") {
  const auto chain = build_laplacian(Digraph(2, {{0, 1}, {1, 2}}));
  CHECK(chain.l1 == Matrix{{1, 0}, {-1, 1}});
  CHECK(chain.l0 == Vector{-1, 0});

  const auto recon = build_laplacian(reconstructed_graph());
  const Matrix expected{{2, 0, -1, 0, 0}, {-1, 1, 0, 0, 0}, {0, -1, 1, 0, 0}, {-1, 0, 0, 1, 0}, {0, 0, 0, -1, 1}};
  CHECK(recon.l1 == expected);
  for (std::size_t r = 0; r < recon.l.rows(); ++r) {
    double sum = 0.0;
    for (double v : recon.l.row(r)) sum += v;
    CHECK(sum == 0.0);
  }
  for (std::size_t c = 0; c < recon.l.cols(); ++c) CHECK(recon.l(0, c) == 0.0);

  CHECK(build_laplacian(Digraph(1, {})).l1 == Matrix{{0}});
}

TEST_CASE("check_spanning_tree") {
  CHECK(check_spanning_tree(Digraph(2, {{0, 1}, {1, 2}})));
  CHECK_FALSE(check_spanning_tree(Digraph(2, {{0, 1}})));
  CHECK(check_spanning_tree(reconstructed_graph()));
  // Cycle among followers not reachable from the leader.
  CHECK_FALSE(check_spanning_tree(Digraph(3, {{0, 1}, {2, 3}, {3, 2}})));
}

TEST_CASE("compute_w") {
  const Vector chain = compute_w(Matrix{{1, 0}, {-1, 1}});
  CHECK(chain[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(chain[1] == doctest::Approx(1.0).epsilon(1e-15));

  const Vector w = compute_w(build_laplacian(reconstructed_graph()).l1);
  const Vector expected{5, 7, 6, 2, 1};
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::fabs(w[i] - expected[i]) <= 1e-10);

  CHECK(compute_w(Matrix{{1}})[0] == 1.0);
  CHECK_THROWS_AS(compute_w(Matrix{{0}}), ValidationError);
  CHECK_THROWS_AS(compute_w(build_laplacian(Digraph(2, {{0, 1}})).l1), ValidationError);
}

TEST_CASE("compute_mu") {
  const MuPair chain = compute_mu(Matrix{{1, 0}, {-1, 1}}, Vector{2, 1});
  CHECK(chain.mu == doctest::Approx(3 - std::sqrt(2.0)).epsilon(1e-13));
  CHECK(chain.mu0 == doctest::Approx((3 - std::sqrt(2.0)) / 2).epsilon(1e-13));

  const MuPair single = compute_mu(Matrix{{1}}, Vector{1});
  CHECK(single.mu == doctest::Approx(2.0));
  CHECK(single.mu0 == doctest::Approx(2.0));

  // Reconstructed graph: mu0 agrees with the value implied by P (1/2.1949^2)
  // to the four digits the published P carries.
  const LaplacianDecomposition d = decompose(reconstructed_graph());
  CHECK(std::fabs(d.mu0 - 1.0 / (2.1949 * 2.1949)) < 1e-4);
}

TEST_CASE("random rooted graphs satisfy the M-matrix properties") {
  std::mt19937_64 rng(5);
  for (int sample = 0; sample < 200; ++sample) {
    const Digraph g = random_rooted_graph(rng);
    REQUIRE(check_spanning_tree(g));
    const LaplacianDecomposition d = decompose(g);
    const Vector lw = d.l1.transpose() * d.w;
    for (std::size_t i = 0; i < d.w.size(); ++i) {
      CHECK(d.w[i] > 0.0);
      CHECK(std::fabs(lw[i] - 1.0) <= 1e-10);
    }
    const Matrix wd = Matrix::diagonal(d.w);
    CHECK(linalg::positive_definite(wd * d.l1 + d.l1.transpose() * wd));
    CHECK(d.mu > 0.0);
  }
}
