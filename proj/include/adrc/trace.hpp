#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "adrc/matrix.hpp"

namespace adrc {

/// Offsets into the flat closed-loop state vector:
/// [x0 (n)] [x_1 .. x_m (n each)] [xhat_1 .. xhat_m (n+1 each)].
/// Agent indices are 0-based throughout the C++ API.
struct StateLayout {
  int n = 0;
  int m = 0;

  std::size_t size() const { return static_cast<std::size_t>(n + m * n + m * (n + 1)); }
  std::size_t leader() const { return 0; }
  std::size_t follower(int i) const { return static_cast<std::size_t>(n + i * n); }
  std::size_t observer(int i) const { return static_cast<std::size_t>(n + m * n + i * (n + 1)); }
  std::size_t observers() const { return observer(0); }
};

struct ClosedLoopState {
  double t = 0.0;
  Vector x0;                // n
  std::vector<Vector> x;    // m x n
  std::vector<Vector> xhat; // m x (n+1)

  Vector pack() const;
  static ClosedLoopState unpack(const StateLayout& layout, double t, std::span<const double> flat);
};

/// Uniformly sampled closed-loop record. Each row holds
/// t, x0_1..x0_n, then per agent x_1..x_n, xhat_1..xhat_{n+1}, u, y.
class Trace {
 public:
  Trace() = default;
  Trace(int n, int m);

  int order() const { return n_; }
  int followers() const { return m_; }
  std::size_t columns() const { return static_cast<std::size_t>(1 + n_ + m_ * (2 * n_ + 3)); }
  std::size_t size() const { return columns() == 0 ? 0 : data_.size() / columns(); }
  bool empty() const { return data_.empty(); }

  void append(double t, std::span<const double> state, std::span<const double> u, std::span<const double> y);

  std::span<const double> row(std::size_t k) const { return {data_.data() + k * columns(), columns()}; }
  double time(std::size_t k) const { return at(k, 0); }
  double x0(std::size_t k, int q) const { return at(k, 1 + static_cast<std::size_t>(q)); }
  double x(std::size_t k, int i, int q) const { return at(k, agent_base(i) + static_cast<std::size_t>(q)); }
  double xhat(std::size_t k, int i, int q) const {
    return at(k, agent_base(i) + static_cast<std::size_t>(n_ + q));
  }
  double u(std::size_t k, int i) const { return at(k, agent_base(i) + static_cast<std::size_t>(2 * n_ + 1)); }
  double y(std::size_t k, int i) const { return at(k, agent_base(i) + static_cast<std::size_t>(2 * n_ + 2)); }

  // Sample spacing in seconds (dt * record_stride).
  double spacing() const { return spacing_; }
  void set_spacing(double s) { spacing_ = s; }

  // First sample index with t >= t_last / 2.
  std::size_t tail_start() const;

  std::vector<std::string> column_names() const;

  std::vector<std::pair<std::string, std::string>> metadata;

 private:
  double at(std::size_t k, std::size_t c) const { return data_[k * columns() + c]; }
  std::size_t agent_base(int i) const { return static_cast<std::size_t>(1 + n_ + i * (2 * n_ + 3)); }

  int n_ = 0;
  int m_ = 0;
  double spacing_ = 0.0;
  std::vector<double> data_;
};

}  // namespace adrc
