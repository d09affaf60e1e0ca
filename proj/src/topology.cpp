#include "adrc/topology.hpp"

#include <algorithm>
#include <queue>
#include <string>

#include "adrc/errors.hpp"
#include "adrc/linalg.hpp"

namespace adrc::topology {

namespace {
constexpr int kMaxFollowers = 16;
}

Digraph::Digraph(int followers, std::vector<Edge> edges) : m_(followers), edges_(std::move(edges)) {
  if (m_ < 1 || m_ > kMaxFollowers) {
    throw ValidationError("follower count must be in 1.." + std::to_string(kMaxFollowers));
  }
  for (const Edge& e : edges_) {
    const std::string label = std::to_string(e.from) + " -> " + std::to_string(e.to);
    if (e.from < 0 || e.from > m_ || e.to < 0 || e.to > m_) throw ValidationError("edge " + label + " out of range");
    if (e.from == e.to) throw ValidationError("self-loop " + label);
    if (e.to == 0) throw ValidationError("edge " + label + " enters the leader");
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  in_followers_.assign(static_cast<std::size_t>(m_) + 1, {});
  hears_leader_.assign(static_cast<std::size_t>(m_) + 1, false);
  for (const Edge& e : edges_) {
    if (e.from == 0) {
      hears_leader_[static_cast<std::size_t>(e.to)] = true;
    } else {
      in_followers_[static_cast<std::size_t>(e.to)].push_back(e.from);
    }
  }
}

bool Digraph::adjacent(int i, int j) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge{j, i});
}

LaplacianDecomposition build_laplacian(const Digraph& g) {
  const auto size = static_cast<std::size_t>(g.followers()) + 1;
  // Integer assembly keeps every row sum exactly zero.
  std::vector<int> lap(size * size, 0);
  for (const Edge& e : g.edges()) {
    lap[static_cast<std::size_t>(e.to) * size + static_cast<std::size_t>(e.from)] -= 1;
    lap[static_cast<std::size_t>(e.to) * size + static_cast<std::size_t>(e.to)] += 1;
  }

  LaplacianDecomposition out;
  out.l = Matrix(size, size);
  for (std::size_t r = 0; r < size; ++r)
    for (std::size_t c = 0; c < size; ++c) out.l(r, c) = lap[r * size + c];

  const std::size_t m = size - 1;
  out.l0.resize(m);
  out.l1 = Matrix(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    out.l0[i] = out.l(i + 1, 0);
    for (std::size_t j = 0; j < m; ++j) out.l1(i, j) = out.l(i + 1, j + 1);
  }
  return out;
}

bool check_spanning_tree(const Digraph& g) {
  const auto size = static_cast<std::size_t>(g.followers()) + 1;
  std::vector<std::vector<int>> out_edges(size);
  for (const Edge& e : g.edges()) out_edges[static_cast<std::size_t>(e.from)].push_back(e.to);

  std::vector<bool> seen(size, false);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (int next : out_edges[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(next)]) {
        seen[static_cast<std::size_t>(next)] = true;
        ++reached;
        frontier.push(next);
      }
    }
  }
  return reached == size;
}

Vector compute_w(const Matrix& l1) {
  const Vector ones(l1.rows(), 1.0);
  Vector w;
  try {
    w = linalg::solve_linear(l1.transpose(), ones);
  } catch (const NumericError&) {
    throw ValidationError("L1 is singular: the graph has no directed spanning tree rooted at the leader");
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0.0)) {
      throw ValidationError("weight W_" + std::to_string(i + 1) + " = " + std::to_string(w[i]) + " is not positive");
    }
  }
  return w;
}

MuPair compute_mu(const Matrix& l1, const Vector& w) {
  const Matrix wd = Matrix::diagonal(w);
  const Matrix s = wd * l1 + l1.transpose() * wd;
  MuPair out;
  out.mu = linalg::min_eigenvalue_symmetric(s);
  if (!(out.mu > 0.0)) throw ValidationError("W L1 + L1^T W is not positive definite (mu = " + std::to_string(out.mu) + ")");
  out.mu0 = out.mu / *std::max_element(w.begin(), w.end());
  return out;
}

LaplacianDecomposition decompose(const Digraph& g) {
  if (!check_spanning_tree(g)) throw ValidationError("no directed spanning tree rooted at the leader");
  LaplacianDecomposition out = build_laplacian(g);
  out.w = compute_w(out.l1);
  const MuPair mu = compute_mu(out.l1, out.w);
  out.mu = mu.mu;
  out.mu0 = mu.mu0;
  return out;
}

}  // namespace adrc::topology
