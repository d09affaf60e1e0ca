#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "adrc/matrix.hpp"

namespace adrc::topology {

// Directed edge `from -> to`: vertex `to` receives information from `from`.
struct Edge {
  int from = 0;
  int to = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Leader-follower communication graph over vertices {0..m}; vertex 0 is the
/// leader. All edge weights are 1.
class Digraph {
 public:
  // Throws ValidationError on out-of-range vertices, self-loops or edges into
  // the leader. Duplicate edges collapse to one.
  Digraph(int followers, std::vector<Edge> edges);

  int followers() const { return m_; }
  const std::vector<Edge>& edges() const { return edges_; }

  // a_ij: 1 when i receives from j.
  bool adjacent(int i, int j) const;
  // Followers j with a_ij = 1 (excludes the leader).
  const std::vector<int>& follower_neighbors(int i) const { return in_followers_[static_cast<std::size_t>(i)]; }
  bool hears_leader(int i) const { return hears_leader_[static_cast<std::size_t>(i)]; }

  friend bool operator==(const Digraph& a, const Digraph& b) { return a.m_ == b.m_ && a.edges_ == b.edges_; }

 private:
  int m_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> in_followers_;  // indexed by vertex 0..m
  std::vector<bool> hears_leader_;
};

struct LaplacianDecomposition {
  Matrix l;   // (m+1) x (m+1), L = D - A
  Vector l0;  // m, leader column of the follower rows
  Matrix l1;  // m x m
  Vector w;   // solves L1^T w = 1
  double mu = 0.0;
  double mu0 = 0.0;
};

// L, L0 and L1 only; w, mu and mu0 are left empty.
LaplacianDecomposition build_laplacian(const Digraph& g);

// Every follower is reachable from the leader.
bool check_spanning_tree(const Digraph& g);

// Solves L1^T w = 1_m. Throws ValidationError when L1 is singular or a
// component is not positive.
Vector compute_w(const Matrix& l1);

struct MuPair {
  double mu = 0.0;
  double mu0 = 0.0;
};

// mu = lambda_min(W L1 + L1^T W), mu0 = mu / max(w). Throws ValidationError
// when mu <= 0.
MuPair compute_mu(const Matrix& l1, const Vector& w);

// All of the above. Throws ValidationError without a spanning tree.
LaplacianDecomposition decompose(const Digraph& g);

}  // namespace adrc::topology
