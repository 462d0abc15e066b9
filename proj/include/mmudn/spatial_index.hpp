#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "mmudn/pointprocess.hpp"

namespace mmudn {

/// Uniform-grid bucket index over points in a window.
class GridIndex {
 public:
  GridIndex(std::span<const Point2D> points, const Window& window, double points_per_cell = 2.0);

  /// Nearest point strictly within `max_radius` (inclusive); lowest index on
  /// ties. Returns kNoIndex if none qualifies.
  std::size_t nearest(Point2D q, double max_radius = kInfiniteRadius) const;

  /// Calls f(index, squared distance) for each point with distance <= radius.
  template <class F>
  void for_each_within(Point2D q, double radius, F&& f) const;

  std::size_t size() const { return pts_.size(); }

 private:
  std::size_t cell_coord(double v) const;
  template <class F>
  void visit_ring(std::size_t cx, std::size_t cy, std::size_t k, F&& f) const;

  Window window_;
  std::size_t cells_ = 1;
  double cell_size_ = 1.0;
  std::vector<std::size_t> start_;
  std::vector<Point2D> pts_;
  std::vector<std::size_t> ids_;
};

template <class F>
void GridIndex::visit_ring(std::size_t cx, std::size_t cy, std::size_t k, F&& f) const {
  // Cells at Chebyshev distance exactly k from (cx, cy), each visited once
  // even when the ring wraps onto itself.
  const auto n = static_cast<long>(cells_);
  const auto kk = static_cast<long>(k);
  auto visit = [&](long ix, long iy) {
    if (!window_.wrap() && (ix < 0 || iy < 0 || ix >= n || iy >= n)) return;
    const auto wx = static_cast<std::size_t>(((ix % n) + n) % n);
    const auto wy = static_cast<std::size_t>(((iy % n) + n) % n);
    const std::size_t c = wy * cells_ + wx;
    for (std::size_t j = start_[c]; j < start_[c + 1]; ++j) f(j);
  };
  const long x0 = static_cast<long>(cx);
  const long y0 = static_cast<long>(cy);
  if (kk == 0) {
    visit(x0, y0);
    return;
  }
  if (window_.wrap() && 2 * kk + 1 > n) {
    // Ring overlaps itself on the torus; caller handles full sweeps.
    return;
  }
  for (long dx = -kk; dx <= kk; ++dx) {
    visit(x0 + dx, y0 - kk);
    visit(x0 + dx, y0 + kk);
  }
  for (long dy = -kk + 1; dy <= kk - 1; ++dy) {
    visit(x0 - kk, y0 + dy);
    visit(x0 + kk, y0 + dy);
  }
}

template <class F>
void GridIndex::for_each_within(Point2D q, double radius, F&& f) const {
  if (pts_.empty() || !(radius >= 0.0)) return;
  const double r2 = radius * radius;
  auto check = [&](std::size_t j) {
    const double d2 = window_.distance_squared(q, pts_[j]);
    if (d2 <= r2) f(ids_[j], d2);
  };
  const double reach = std::ceil(radius / cell_size_);
  if (window_.wrap() && (!std::isfinite(reach) || 2.0 * reach + 1.0 > static_cast<double>(cells_))) {
    for (std::size_t j = 0; j < pts_.size(); ++j) check(j);
    return;
  }
  const std::size_t cx = cell_coord(q.x);
  const std::size_t cy = cell_coord(q.y);
  const auto kmax = static_cast<std::size_t>(std::min(reach, static_cast<double>(cells_)));
  for (std::size_t k = 0; k <= kmax; ++k) visit_ring(cx, cy, k, check);
}

}  // namespace mmudn
