#include "mmudn/pointprocess.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <string>

#include "mmudn/errors.hpp"
#include "mmudn/spatial_index.hpp"

namespace mmudn {

Window::Window(double side, bool wrap) : side_(side), wrap_(wrap) {
  if (!(side > 0.0) || !std::isfinite(side)) {
    throw ParameterError("window side must be positive and finite, got " + std::to_string(side));
  }
}

bool Window::contains(Point2D p) const {
  return p.x >= 0.0 && p.x < side_ && p.y >= 0.0 && p.y < side_;
}

Displacement Window::displacement(Point2D from, Point2D to) const {
  double dx = to.x - from.x;
  double dy = to.y - from.y;
  if (wrap_) {
    const double half = 0.5 * side_;
    if (dx > half) dx -= side_;
    else if (dx < -half) dx += side_;
    if (dy > half) dy -= side_;
    else if (dy < -half) dy += side_;
  }
  return {dx, dy};
}

double Window::distance_squared(Point2D a, Point2D b) const {
  const Displacement d = displacement(a, b);
  return d.dx * d.dx + d.dy * d.dy;
}

double Window::distance(Point2D a, Point2D b) const { return std::sqrt(distance_squared(a, b)); }

AssociationMap::AssociationMap(std::vector<std::size_t> serving_bs, std::size_t bs_count)
    : serving_bs_(std::move(serving_bs)), offsets_(bs_count + 1, 0) {
  for (std::size_t b : serving_bs_) {
    if (b != kNoIndex) ++offsets_[b + 1];
  }
  for (std::size_t b = 0; b < bs_count; ++b) offsets_[b + 1] += offsets_[b];
  members_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t u = 0; u < serving_bs_.size(); ++u) {
    const std::size_t b = serving_bs_[u];
    if (b != kNoIndex) members_[fill[b]++] = u;
  }
}

std::span<const std::size_t> AssociationMap::users_of(std::size_t bs) const {
  return {members_.data() + offsets_[bs], offsets_[bs + 1] - offsets_[bs]};
}

std::size_t AssociationMap::scheduled_user(std::size_t bs) const {
  return scheduled_.empty() ? kNoIndex : scheduled_[bs];
}

std::size_t AssociationMap::active_count() const {
  return static_cast<std::size_t>(
      std::count_if(scheduled_.begin(), scheduled_.end(), [](std::size_t u) { return u != kNoIndex; }));
}

std::vector<std::size_t> AssociationMap::active_bss() const {
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < scheduled_.size(); ++b) {
    if (scheduled_[b] != kNoIndex) out.push_back(b);
  }
  return out;
}

void AssociationMap::force_schedule(std::size_t bs, std::size_t user) {
  if (bs >= bs_count() || user >= user_count() || serving_bs_[user] != bs) {
    throw ParameterError("forced user is not associated with the given BS");
  }
  if (scheduled_.empty()) scheduled_.assign(bs_count(), kNoIndex);
  scheduled_[bs] = user;
}

PointSet sample_ppp(double density, const Window& window, RngStream& rng) {
  if (!(density >= 0.0) || !std::isfinite(density)) {
    throw ParameterError("point density must be nonnegative and finite, got " + std::to_string(density));
  }
  PointSet set;
  set.density = density;
  set.window = window;
  const std::uint64_t n = rng.poisson(density * window.area());
  set.points.resize(n);
  for (auto& p : set.points) {
    p.x = rng.uniform(0.0, window.side());
    p.y = rng.uniform(0.0, window.side());
  }
  return set;
}

AssociationMap associate_strongest(const PointSet& users, const PointSet& bss, double los_radius) {
  if (bss.points.empty()) throw DomainError("association needs at least one BS");
  if (!(los_radius > 0.0)) throw ParameterError("LOS radius must be positive");
  const GridIndex index(bss.points, bss.window);
  std::vector<std::size_t> serving(users.size());
  for (std::size_t u = 0; u < users.size(); ++u) serving[u] = index.nearest(users.points[u], los_radius);
  return AssociationMap(std::move(serving), bss.size());
}

AssociationMap schedule_active(const AssociationMap& assoc, RngStream& rng) {
  AssociationMap out = assoc;
  out.scheduled_.assign(out.bs_count(), kNoIndex);
  for (std::size_t b = 0; b < out.bs_count(); ++b) {
    const auto users = out.users_of(b);
    if (users.empty()) continue;
    out.scheduled_[b] = users.size() == 1 ? users[0] : users[rng.index(users.size())];
  }
  return out;
}

TiledPpp::TiledPpp(double density, const Window& window, std::uint64_t master_seed, std::uint64_t replication,
                   std::string_view name, double points_per_tile)
    : density_(density), window_(window), key_(stream_key(master_seed, replication, name)) {
  if (!(density >= 0.0) || !std::isfinite(density)) {
    throw ParameterError("point density must be nonnegative and finite, got " + std::to_string(density));
  }
  if (!(points_per_tile > 0.0)) throw ParameterError("points per tile must be positive");
  const double target = std::floor(window.side() * std::sqrt(density / points_per_tile));
  tiles_ = static_cast<std::size_t>(std::clamp(target, 1.0, 65536.0));
  tile_size_ = window.side() / static_cast<double>(tiles_);
}

std::size_t TiledPpp::tile_coord(double v) const {
  const double c = std::floor(v / tile_size_);
  if (c < 0.0) return 0;
  return std::min(static_cast<std::size_t>(c), tiles_ - 1);
}

std::span<const Point2D> TiledPpp::tile(std::size_t index) const {
  auto it = cache_.find(index);
  if (it == cache_.end()) {
    SplitMix64 gen(key_ ^ SplitMix64(index)());
    const double mean = density_ * tile_size_ * tile_size_;
    const std::uint64_t n = mean > 0.0 ? std::poisson_distribution<std::uint64_t>(mean)(gen) : 0;
    const double x0 = static_cast<double>(index % tiles_) * tile_size_;
    const double y0 = static_cast<double>(index / tiles_) * tile_size_;
    std::uniform_real_distribution<double> u(0.0, tile_size_);
    std::vector<Point2D> pts(n);
    const double top = std::nextafter(window_.side(), 0.0);
    for (auto& p : pts) {
      p.x = std::min(x0 + u(gen), top);
      p.y = std::min(y0 + u(gen), top);
    }
    it = cache_.emplace(index, std::move(pts)).first;
  }
  return it->second;
}

std::optional<TiledPpp::Hit> TiledPpp::nearest(Point2D q, double max_radius) const {
  std::optional<Hit> best;
  const double limit2 = max_radius * max_radius;
  auto scan = [&](std::size_t t) {
    const auto pts = tile(t);
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const double d2 = window_.distance_squared(q, pts[k]);
      if (d2 > limit2) continue;
      const Id id{t, k};
      if (!best || d2 < best->distance_squared || (d2 == best->distance_squared && id < best->id)) {
        best = Hit{id, pts[k], d2};
      }
    }
  };
  const auto n = static_cast<long>(tiles_);
  auto visit = [&](long ix, long iy) {
    if (!window_.wrap() && (ix < 0 || iy < 0 || ix >= n || iy >= n)) return;
    const long wx = ((ix % n) + n) % n;
    const long wy = ((iy % n) + n) % n;
    scan(static_cast<std::size_t>(wy * n + wx));
  };
  const long cx = static_cast<long>(tile_coord(q.x));
  const long cy = static_cast<long>(tile_coord(q.y));
  for (long k = 0;; ++k) {
    if (window_.wrap() && 2 * k + 1 > n) {
      // Rings overlap on the torus: finish with a sweep of every tile.
      for (std::size_t t = 0; t < tiles_ * tiles_; ++t) scan(t);
      return best;
    }
    if (!window_.wrap() && k > n) return best;
    if (k == 0) {
      visit(cx, cy);
    } else {
      for (long dx = -k; dx <= k; ++dx) {
        visit(cx + dx, cy - k);
        visit(cx + dx, cy + k);
      }
      for (long dy = -k + 1; dy <= k - 1; ++dy) {
        visit(cx - k, cy + dy);
        visit(cx + k, cy + dy);
      }
    }
    // Points beyond ring k lie at least k tile widths away.
    const double covered = static_cast<double>(k) * tile_size_;
    if (best && best->distance_squared < covered * covered) return best;
    if (covered > max_radius) return best;
  }
}

TiledAssociation associate_strongest(const PointSet& users, std::span<const TiledPpp* const> bss,
                                     double los_radius) {
  if (bss.empty()) throw DomainError("association needs at least one BS process");
  if (!(los_radius > 0.0)) throw ParameterError("LOS radius must be positive");
  struct Key {
    std::size_t process;
    TiledPpp::Id id;
    auto operator<=>(const Key&) const = default;
  };
  std::vector<std::optional<std::pair<Key, Point2D>>> choice(users.size());
  for (std::size_t u = 0; u < users.size(); ++u) {
    std::optional<TiledPpp::Hit> best;
    std::size_t best_process = 0;
    for (std::size_t p = 0; p < bss.size(); ++p) {
      const auto hit = bss[p]->nearest(users.points[u], los_radius);
      if (hit && (!best || hit->distance_squared < best->distance_squared)) {
        best = hit;
        best_process = p;
      }
    }
    if (best) choice[u] = std::make_pair(Key{best_process, best->id}, best->point);
  }
  std::vector<std::pair<Key, Point2D>> serving;
  for (const auto& c : choice) {
    if (c) serving.push_back(*c);
  }
  std::sort(serving.begin(), serving.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  serving.erase(std::unique(serving.begin(), serving.end(),
                            [](const auto& a, const auto& b) { return a.first == b.first; }),
                serving.end());

  TiledAssociation out;
  out.serving_bss.window = users.window;
  for (const auto* p : bss) out.serving_bss.density += p->density();
  std::vector<std::size_t> index(users.size(), kNoIndex);
  for (std::size_t u = 0; u < users.size(); ++u) {
    if (!choice[u]) continue;
    const auto it = std::lower_bound(serving.begin(), serving.end(), choice[u]->first,
                                     [](const auto& a, const Key& k) { return a.first < k; });
    index[u] = static_cast<std::size_t>(it - serving.begin());
  }
  for (const auto& [key, point] : serving) {
    out.serving_bss.points.push_back(point);
    out.process_of.push_back(key.process);
  }
  out.map = AssociationMap(std::move(index), serving.size());
  return out;
}

double active_bs_probability(double lambda_hat) {
  if (!(lambda_hat > 0.0)) throw ParameterError("density ratio must be positive");
  return -std::expm1(-3.5 * std::log1p(1.0 / (3.5 * lambda_hat)));
}

double user_selection_probability(double lambda_hat) {
  return active_bs_probability(lambda_hat) * lambda_hat;
}

double GammaLaw::pdf(double x) const {
  if (x < 0.0) return 0.0;
  if (x == 0.0) return shape < 1.0 ? std::numeric_limits<double>::infinity() : (shape == 1.0 ? rate : 0.0);
  return std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x - std::lgamma(shape));
}

double GammaLaw::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_p(shape, rate * x);
}

GammaLaw voronoi_cell_law(double bs_density) {
  if (!(bs_density > 0.0)) throw ParameterError("BS density must be positive");
  return {4.5, 3.5 * bs_density};
}

double voronoi_cell_pdf(double x, double bs_density) {
  if (!(bs_density > 0.0)) throw ParameterError("BS density must be positive");
  if (x < 0.0) throw ParameterError("cell size must be nonnegative");
  if (x == 0.0) return 0.0;
  // 3.5^3.5 / Gamma(3.5) * lambda^4.5 * x^3.5 * exp(-3.5 lambda x)
  const double log_pdf = 3.5 * std::log(3.5) - std::lgamma(3.5) + 4.5 * std::log(bs_density) +
                         3.5 * std::log(x) - 3.5 * bs_density * x;
  return std::exp(log_pdf);
}

GammaLaw voronoi_area_law(double bs_density) {
  if (!(bs_density > 0.0)) throw ParameterError("BS density must be positive");
  return {3.5, 3.5 * bs_density};
}

}  // namespace mmudn
