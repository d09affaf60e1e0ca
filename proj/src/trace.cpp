#include "adrc/trace.hpp"

#include "adrc/errors.hpp"

namespace adrc {

Vector ClosedLoopState::pack() const {
  Vector flat(x0);
  for (const Vector& xi : x) flat.insert(flat.end(), xi.begin(), xi.end());
  for (const Vector& xh : xhat) flat.insert(flat.end(), xh.begin(), xh.end());
  return flat;
}

ClosedLoopState ClosedLoopState::unpack(const StateLayout& layout, double t, std::span<const double> flat) {
  if (flat.size() != layout.size()) throw ValidationError("state vector has wrong dimension");
  const auto n = static_cast<std::size_t>(layout.n);
  ClosedLoopState s;
  s.t = t;
  s.x0.assign(flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(n));
  for (int i = 0; i < layout.m; ++i) {
    auto f = flat.subspan(layout.follower(i), n);
    s.x.emplace_back(f.begin(), f.end());
  }
  for (int i = 0; i < layout.m; ++i) {
    auto o = flat.subspan(layout.observer(i), n + 1);
    s.xhat.emplace_back(o.begin(), o.end());
  }
  return s;
}

Trace::Trace(int n, int m) : n_(n), m_(m) {}

void Trace::append(double t, std::span<const double> state, std::span<const double> u, std::span<const double> y) {
  const StateLayout layout{n_, m_};
  const auto n = static_cast<std::size_t>(n_);
  data_.push_back(t);
  data_.insert(data_.end(), state.begin(), state.begin() + static_cast<std::ptrdiff_t>(n));
  for (int i = 0; i < m_; ++i) {
    auto xi = state.subspan(layout.follower(i), n);
    auto xh = state.subspan(layout.observer(i), n + 1);
    data_.insert(data_.end(), xi.begin(), xi.end());
    data_.insert(data_.end(), xh.begin(), xh.end());
    data_.push_back(u[static_cast<std::size_t>(i)]);
    data_.push_back(y[static_cast<std::size_t>(i)]);
  }
}

std::size_t Trace::tail_start() const {
  if (empty()) return 0;
  const double half = 0.5 * time(size() - 1);
  std::size_t k = 0;
  while (k < size() && time(k) < half - 1e-9 * spacing_) ++k;
  return k;
}

std::vector<std::string> Trace::column_names() const {
  std::vector<std::string> names{"t"};
  for (int q = 1; q <= n_; ++q) names.push_back("x0_" + std::to_string(q));
  for (int i = 1; i <= m_; ++i) {
    const std::string id = std::to_string(i);
    for (int q = 1; q <= n_; ++q) names.push_back("x" + id + "_" + std::to_string(q));
    for (int q = 1; q <= n_ + 1; ++q) names.push_back("xh" + id + "_" + std::to_string(q));
    names.push_back("u" + id);
    names.push_back("y" + id);
  }
  return names;
}

}  // namespace adrc
