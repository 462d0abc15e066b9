#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <span>
#include <vector>

#include "mmudn/rng.hpp"

namespace mmudn {

struct Point2D {
  double x = 0.0;
  double y = 0.0;
};

struct Displacement {
  double dx = 0.0;
  double dy = 0.0;
};

/// Square observation window [0, side)^2, optionally with torus metric.
class Window {
 public:
  explicit Window(double side, bool wrap = true);

  double side() const { return side_; }
  bool wrap() const { return wrap_; }
  double area() const { return side_ * side_; }
  Point2D center() const { return {0.5 * side_, 0.5 * side_}; }
  bool contains(Point2D p) const;

  /// Vector from `from` to `to`; minimal image when wrapping.
  Displacement displacement(Point2D from, Point2D to) const;
  double distance_squared(Point2D a, Point2D b) const;
  double distance(Point2D a, Point2D b) const;

 private:
  double side_;
  bool wrap_;
};

struct PointSet {
  std::vector<Point2D> points;
  double density = 0.0;
  Window window{1.0};

  std::size_t size() const { return points.size(); }
};

inline constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();
inline constexpr double kInfiniteRadius = std::numeric_limits<double>::infinity();

/// User-to-BS association with per-BS user lists (compressed rows) and the
/// scheduled user of each BS.
class AssociationMap {
 public:
  AssociationMap() = default;
  AssociationMap(std::vector<std::size_t> serving_bs, std::size_t bs_count);

  std::size_t user_count() const { return serving_bs_.size(); }
  std::size_t bs_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }

  /// Serving BS of a user, kNoIndex when unassociated.
  std::size_t serving_bs(std::size_t user) const { return serving_bs_[user]; }
  std::span<const std::size_t> users_of(std::size_t bs) const;

  /// Scheduled user of a BS, kNoIndex when the BS is inactive or unscheduled.
  std::size_t scheduled_user(std::size_t bs) const;
  bool is_scheduled() const { return !scheduled_.empty(); }
  bool is_active(std::size_t bs) const { return scheduled_user(bs) != kNoIndex; }
  std::size_t active_count() const;
  /// Active BS indices in increasing order.
  std::vector<std::size_t> active_bss() const;

  /// Replaces the scheduled user of `bs`; the user must be associated to it.
  void force_schedule(std::size_t bs, std::size_t user);

 private:
  friend AssociationMap schedule_active(const AssociationMap& assoc, RngStream& rng);

  std::vector<std::size_t> serving_bs_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> members_;
  std::vector<std::size_t> scheduled_;
};

PointSet sample_ppp(double density, const Window& window, RngStream& rng);

/// Homogeneous PPP realized tile by tile on first access. Each tile holds
/// an independent Poisson number of uniform points drawn from a stream keyed
/// by (master seed, replication, name, tile), so the realization does not
/// depend on access order. Used when only points near a sparse set of
/// queries matter.
class TiledPpp {
 public:
  /// Point identifier ordered by (tile, rank within tile).
  struct Id {
    std::size_t tile = 0;
    std::size_t rank = 0;
    auto operator<=>(const Id&) const = default;
  };
  struct Hit {
    Id id;
    Point2D point;
    double distance_squared = 0.0;
  };

  TiledPpp(double density, const Window& window, std::uint64_t master_seed, std::uint64_t replication,
           std::string_view name, double points_per_tile = 2.0);

  double density() const { return density_; }
  const Window& window() const { return window_; }
  std::size_t tiles_per_side() const { return tiles_; }
  std::size_t realized_tiles() const { return cache_.size(); }

  std::span<const Point2D> tile(std::size_t index) const;

  /// Nearest point within max_radius (inclusive), lowest Id on ties.
  std::optional<Hit> nearest(Point2D q, double max_radius = kInfiniteRadius) const;

 private:
  std::size_t tile_coord(double v) const;

  double density_;
  Window window_;
  std::uint64_t key_;
  std::size_t tiles_ = 1;
  double tile_size_ = 1.0;
  mutable std::unordered_map<std::size_t, std::vector<Point2D>> cache_;
};

/// Association against tiled processes, listed in merge order. Only BSs
/// serving at least one user are materialized, in (process, Id) order.
struct TiledAssociation {
  PointSet serving_bss;
  AssociationMap map;
  /// Process index of each materialized BS.
  std::vector<std::size_t> process_of;
};

TiledAssociation associate_strongest(const PointSet& users, std::span<const TiledPpp* const> bss,
                                     double los_radius = kInfiniteRadius);

/// Strongest-power association under equal per-tier powers, i.e. nearest BS
/// within `los_radius` under the window metric. Ties go to the lowest index.
AssociationMap associate_strongest(const PointSet& users, const PointSet& bss,
                                   double los_radius = kInfiniteRadius);

/// Each BS with k >= 1 users schedules one of them uniformly at random.
AssociationMap schedule_active(const AssociationMap& assoc, RngStream& rng);

/// p_a = 1 - (1 + 1/(3.5 lambda_hat))^-3.5
double active_bs_probability(double lambda_hat);
/// p_s = p_a * lambda_hat
double user_selection_probability(double lambda_hat);

struct GammaLaw {
  double shape;
  double rate;

  double pdf(double x) const;
  double cdf(double x) const;
  double mean() const { return shape / rate; }
  double variance() const { return shape / (rate * rate); }
};

/// Cell-size law with shape 4.5 and rate 3.5 lambda.
GammaLaw voronoi_cell_law(double bs_density);
double voronoi_cell_pdf(double x, double bs_density);

/// Gamma(3.5, 3.5 lambda) fit of the Voronoi cell area, the law behind
/// active_bs_probability.
GammaLaw voronoi_area_law(double bs_density);

}  // namespace mmudn
