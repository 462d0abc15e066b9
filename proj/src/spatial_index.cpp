#include "mmudn/spatial_index.hpp"

#include <algorithm>

namespace mmudn {

GridIndex::GridIndex(std::span<const Point2D> points, const Window& window, double points_per_cell)
    : window_(window) {
  const double n = static_cast<double>(points.size());
  const double target = std::max(1.0, std::floor(std::sqrt(n / std::max(points_per_cell, 0.5))));
  cells_ = static_cast<std::size_t>(std::min(target, 4096.0));
  cell_size_ = window.side() / static_cast<double>(cells_);

  std::vector<std::size_t> cell_of(points.size());
  start_.assign(cells_ * cells_ + 1, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    cell_of[i] = cell_coord(points[i].y) * cells_ + cell_coord(points[i].x);
    ++start_[cell_of[i] + 1];
  }
  for (std::size_t c = 0; c < cells_ * cells_; ++c) start_[c + 1] += start_[c];

  pts_.resize(points.size());
  ids_.resize(points.size());
  std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::size_t slot = fill[cell_of[i]]++;
    pts_[slot] = points[i];
    ids_[slot] = i;
  }
}

std::size_t GridIndex::cell_coord(double v) const {
  const double c = std::floor(v / cell_size_);
  if (c < 0.0) return 0;
  return std::min(static_cast<std::size_t>(c), cells_ - 1);
}

std::size_t GridIndex::nearest(Point2D q, double max_radius) const {
  std::size_t best = kNoIndex;
  double best_d2 = std::numeric_limits<double>::infinity();
  const double limit2 = max_radius * max_radius;
  auto consider = [&](std::size_t j) {
    const double d2 = window_.distance_squared(q, pts_[j]);
    if (d2 > limit2) return;
    if (d2 < best_d2 || (d2 == best_d2 && ids_[j] < best)) {
      best_d2 = d2;
      best = ids_[j];
    }
  };
  if (pts_.empty()) return kNoIndex;

  const std::size_t cx = cell_coord(q.x);
  const std::size_t cy = cell_coord(q.y);
  for (std::size_t k = 0;; ++k) {
    if (window_.wrap() && 2 * k + 1 > cells_) {
      for (std::size_t j = 0; j < pts_.size(); ++j) consider(j);
      return best;
    }
    if (!window_.wrap() && k > cells_) return best;
    visit_ring(cx, cy, k, consider);
    // Points outside rings 0..k lie at least k cell widths away.
    const double covered = static_cast<double>(k) * cell_size_;
    if (best != kNoIndex && best_d2 < covered * covered) return best;
    if (covered > max_radius) return best;
  }
}

}  // namespace mmudn
