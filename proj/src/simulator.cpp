#include "mmudn/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <numbers>
#include <thread>

#include "mmudn/errors.hpp"
#include "mmudn/spatial_index.hpp"

namespace mmudn {

std::string to_string(Tier tier) { return tier == Tier::MmW ? "mmw" : "muw"; }
std::string to_string(Direction d) { return d == Direction::DL ? "dl" : "ul"; }

std::string to_string(ReceiverMode mode) {
  switch (mode) {
    case ReceiverMode::InsertedUser: return "inserted";
    case ReceiverMode::NearestScheduled: return "nearest";
    case ReceiverMode::AllScheduled: return "all";
  }
  return "inserted";
}

Tier parse_tier(const std::string& s) {
  if (s == "mmw") return Tier::MmW;
  if (s == "muw") return Tier::MuW;
  throw ParameterError("unknown tier '" + s + "' (expected mmw or muw)");
}

Direction parse_direction(const std::string& s) {
  if (s == "dl") return Direction::DL;
  if (s == "ul") return Direction::UL;
  throw ParameterError("unknown direction '" + s + "' (expected dl or ul)");
}

ReceiverMode parse_receiver_mode(const std::string& s) {
  if (s == "inserted") return ReceiverMode::InsertedUser;
  if (s == "nearest") return ReceiverMode::NearestScheduled;
  if (s == "all") return ReceiverMode::AllScheduled;
  throw ParameterError("unknown receiver mode '" + s + "' (expected inserted, nearest or all)");
}

void SimConfig::validate() const {
  params.validate();
  if (replications < 1) throw ParameterError("replications must be at least 1");
  if (fading_draws < 1) throw ParameterError("fading draws must be at least 1");
  if (window_side_m < 0.0) throw ParameterError("window side must be nonnegative");
  if (decoupled && !(tier == Tier::MmW && direction == Direction::UL)) {
    throw ParameterError("decoupling applies to the mmW UL only");
  }
}

Window SimConfig::window() const {
  const double side = window_side_m > 0.0 ? window_side_m : std::sqrt(1000.0 / params.lambda_u);
  return Window(side, wrap);
}

double SimConfig::tier_density() const { return tier == Tier::MmW ? params.lambda_m : params.lambda_mu; }

double SimConfig::tier_lambda_hat() const { return tier_density() / params.lambda_u; }

bool SimConfig::small_window() const {
  const Window w = window();
  return params.lambda_u * w.area() < 1000.0 * (1.0 - 1e-9);
}

namespace {

struct Transmitter {
  Point2D position;
  Point2D target;
  std::size_t bs;
};

struct Receiver {
  Point2D position;
  std::size_t bs = kNoIndex;  // serving BS, kNoIndex when unserved
  std::size_t user = kNoIndex;
};

// Receiver inside the mainlobe of a transmitter aimed at its own peer.
bool in_mainlobe(const Window& w, const Transmitter& tx, Point2D rx, double half_beam) {
  const Displacement aim = w.displacement(tx.position, tx.target);
  const Displacement to_rx = w.displacement(tx.position, rx);
  const double cross = aim.dx * to_rx.dy - aim.dy * to_rx.dx;
  const double dot = aim.dx * to_rx.dx + aim.dy * to_rx.dy;
  return std::atan2(std::abs(cross), dot) <= half_beam;
}

double power_of(const SimConfig& c) {
  const TxPowers& p = c.params.powers;
  if (c.tier == Tier::MmW) return c.direction == Direction::DL ? p.mmw_dl_w : p.mmw_ul_w;
  return c.direction == Direction::DL ? p.muw_dl_w : p.muw_ul_w;
}

}  // namespace

ReplicationResult simulate_replication(const SimConfig& cfg, std::size_t rep, bool keep_sir) {
  const Window w = cfg.window();
  const NetworkParams& p = cfg.params;
  const bool mmw = cfg.tier == Tier::MmW;
  const bool dl = cfg.direction == Direction::DL;
  const double alpha = mmw ? p.alpha_m : p.alpha_mu;
  const double half_beam = 0.5 * p.theta;
  const bool beam_test = mmw && p.theta < 2.0 * std::numbers::pi;
  const double los = mmw ? p.r_los_m : kInfiniteRadius;

  RngStream user_rng(cfg.master_seed, rep, "users");
  RngStream sched_rng(cfg.master_seed, rep, "schedule");
  RngStream fade_rng(cfg.master_seed, rep, "fading");

  // Only BSs that serve a user transmit, so BS processes are realized
  // lazily around the users.
  const TiledPpp tier_bss(cfg.tier_density(), w, cfg.master_seed, rep, "bs");
  std::optional<TiledPpp> aux_bss;
  if (cfg.decoupled) aux_bss.emplace(p.lambda_mu, w, cfg.master_seed, rep, "bs-aux");
  std::vector<const TiledPpp*> processes{&tier_bss};
  if (aux_bss) processes.push_back(&*aux_bss);

  PointSet users = sample_ppp(p.lambda_u, w, user_rng);
  std::size_t typical = kNoIndex;
  if (cfg.receiver == ReceiverMode::InsertedUser) {
    typical = users.size();
    users.points.push_back(w.center());
  }

  ReplicationResult res;
  TiledAssociation tiled = associate_strongest(users, processes, los);
  const PointSet& bss = tiled.serving_bss;
  AssociationMap assoc = schedule_active(tiled.map, sched_rng);
  if (typical != kNoIndex && assoc.serving_bs(typical) != kNoIndex) {
    assoc.force_schedule(assoc.serving_bs(typical), typical);
  }
  const std::vector<std::size_t> active = assoc.active_bss();
  if (active.empty()) return res;

  std::vector<Transmitter> txs;
  txs.reserve(active.size());
  for (std::size_t b : active) {
    const Point2D bs_pos = bss.points[b];
    const Point2D user_pos = users.points[assoc.scheduled_user(b)];
    txs.push_back(dl ? Transmitter{bs_pos, user_pos, b} : Transmitter{user_pos, bs_pos, b});
  }

  auto link_receiver = [&](std::size_t b) {
    const std::size_t u = assoc.scheduled_user(b);
    return Receiver{dl ? users.points[u] : bss.points[b], b, u};
  };

  std::vector<Receiver> receivers;
  switch (cfg.receiver) {
    case ReceiverMode::InsertedUser: {
      const std::size_t b0 = assoc.serving_bs(typical);
      receivers.push_back(b0 == kNoIndex ? Receiver{w.center(), kNoIndex, typical} : link_receiver(b0));
      break;
    }
    case ReceiverMode::NearestScheduled: {
      // DL: nearest scheduled or unserved user; UL: nearest active BS.
      const Point2D c = w.center();
      double best = std::numeric_limits<double>::infinity();
      Receiver pick;
      auto offer = [&](const Receiver& r) {
        const double d2 = w.distance_squared(c, r.position);
        if (d2 < best) {
          best = d2;
          pick = r;
        }
      };
      if (dl) {
        for (std::size_t u = 0; u < users.size(); ++u) {
          const std::size_t b = assoc.serving_bs(u);
          if (b == kNoIndex) offer(Receiver{users.points[u], kNoIndex, u});
          else if (assoc.scheduled_user(b) == u) offer(link_receiver(b));
        }
      } else {
        for (std::size_t b : active) offer(link_receiver(b));
      }
      receivers.push_back(pick);
      break;
    }
    case ReceiverMode::AllScheduled: {
      for (std::size_t b : active) receivers.push_back(link_receiver(b));
      for (std::size_t u = 0; u < users.size(); ++u) {
        if (assoc.serving_bs(u) == kNoIndex) receivers.push_back(Receiver{users.points[u], kNoIndex, u});
      }
      break;
    }
  }

  std::vector<Point2D> tx_positions(txs.size());
  for (std::size_t i = 0; i < txs.size(); ++i) tx_positions[i] = txs[i].position;
  const bool use_index = std::isfinite(los) && txs.size() > 64;
  std::optional<GridIndex> tx_index;
  if (use_index) tx_index.emplace(tx_positions, w);

  // All transmitters share the tier/direction power, so the desired to
  // interfering power ratio is exactly 1 for any scaling of the powers.
  const double p_desired = power_of(cfg);
  const double p_interferer = power_of(cfg);
  const double power_ratio = p_desired / p_interferer;

  std::vector<double> gains;
  double se_sum = 0.0;
  std::size_t counted = 0;
  for (const Receiver& rx : receivers) {
    ++res.receivers;
    if (rx.bs == kNoIndex) {
      ++res.unserved_receivers;
      ++counted;
      continue;
    }
    const Point2D desired_tx = dl ? bss.points[rx.bs] : users.points[rx.user];
    const double desired_gain = std::pow(w.distance_squared(desired_tx, rx.position), -0.5 * alpha);

    gains.clear();
    auto consider = [&](std::size_t i, double d2) {
      const Transmitter& tx = txs[i];
      if (tx.bs == rx.bs) return;
      if (beam_test && !in_mainlobe(w, tx, rx.position, half_beam)) return;
      gains.push_back(std::pow(d2, -0.5 * alpha));
    };
    if (use_index) {
      tx_index->for_each_within(rx.position, los, consider);
    } else {
      for (std::size_t i = 0; i < txs.size(); ++i) {
        const double d2 = w.distance_squared(txs[i].position, rx.position);
        if (d2 <= los * los) consider(i, d2);
      }
    }
    if (gains.empty()) {
      ++res.interference_free_receivers;
      continue;
    }
    // Keep the interferer order deterministic regardless of index layout.
    std::sort(gains.begin(), gains.end());
    double link_se = 0.0;
    for (std::size_t f = 0; f < cfg.fading_draws; ++f) {
      const double g = fade_rng.exponential();
      double interference = 0.0;
      for (double gi : gains) interference += fade_rng.exponential() * gi;
      const double sir = power_ratio * g * desired_gain / interference;
      if (keep_sir) res.sir.push_back(sir);
      link_se += std::log1p(sir);
    }
    se_sum += link_se / static_cast<double>(cfg.fading_draws);
    ++counted;
  }
  if (counted == 0) {
    res.kind = ReplicationResult::Kind::InterferenceFree;
    return res;
  }
  res.kind = ReplicationResult::Kind::Counted;
  res.se = se_sum / static_cast<double>(counted);
  return res;
}

namespace {

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads == 0 ? hw : threads, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n && !failed; i = next++) {
          try {
            body(i);
          } catch (...) {
            if (!failed.exchange(true)) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

SEEstimate estimate_se(const SimConfig& config) { return estimate_se(config, nullptr); }

SEEstimate estimate_se(const SimConfig& config, std::vector<double>* sir_samples) {
  config.validate();
  std::vector<ReplicationResult> results(config.replications);
  parallel_for(config.replications, config.threads, [&](std::size_t r) {
    results[r] = simulate_replication(config, r, sir_samples != nullptr);
  });

  SEEstimate est;
  std::size_t receivers = 0;
  std::size_t free_receivers = 0;
  std::size_t unserved = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const ReplicationResult& r : results) {
    if (sir_samples) sir_samples->insert(sir_samples->end(), r.sir.begin(), r.sir.end());
    receivers += r.receivers;
    free_receivers += r.interference_free_receivers;
    unserved += r.unserved_receivers;
    switch (r.kind) {
      case ReplicationResult::Kind::Discarded: ++est.discarded; break;
      case ReplicationResult::Kind::InterferenceFree: ++est.interference_free; break;
      case ReplicationResult::Kind::Counted:
        ++est.n;
        sum += r.se;
        sum_sq += r.se * r.se;
        break;
    }
  }
  if (est.n > 0) {
    const double n = static_cast<double>(est.n);
    est.mean = sum / n;
    if (est.n > 1) {
      const double var = std::max(0.0, (sum_sq - n * est.mean * est.mean) / (n - 1.0));
      est.ci_half_width = 1.96 * std::sqrt(var / n);
    }
  }
  if (receivers > 0) {
    est.interference_free_fraction = static_cast<double>(free_receivers) / static_cast<double>(receivers);
    est.unserved_fraction = static_cast<double>(unserved) / static_cast<double>(receivers);
  }
  return est;
}

HomogenizationReport validate_homogenization(const SimConfig& config) {
  config.validate();
  if (config.direction != Direction::DL) throw ParameterError("homogenization check needs a DL configuration");
  const Window w = config.window();
  const double los = config.tier == Tier::MmW ? config.params.r_los_m : kInfiniteRadius;
  HomogenizationReport rep;
  rep.lambda_u = config.params.lambda_u;
  std::vector<std::pair<std::size_t, std::size_t>> counts(config.replications);
  parallel_for(config.replications, config.threads, [&](std::size_t r) {
    RngStream bs_rng(config.master_seed, r, "bs");
    RngStream user_rng(config.master_seed, r, "users");
    RngStream sched_rng(config.master_seed, r, "schedule");
    const PointSet bss = sample_ppp(config.tier_density(), w, bs_rng);
    const PointSet users = sample_ppp(config.params.lambda_u, w, user_rng);
    if (bss.points.empty()) return;
    const AssociationMap a = schedule_active(associate_strongest(users, bss, los), sched_rng);
    counts[r] = {bss.size(), a.active_count()};
  });
  for (const auto& [b, a] : counts) {
    rep.bs_count += b;
    rep.active_count += a;
  }
  rep.empirical_active_density =
      static_cast<double>(rep.active_count) / (w.area() * static_cast<double>(config.replications));
  rep.ratio = rep.empirical_active_density / rep.lambda_u;
  return rep;
}

bool power_invariance_check(const SimConfig& config, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ParameterError("power scale must be positive");
  SimConfig scaled = config;
  TxPowers& p = scaled.params.powers;
  p.mmw_dl_w *= scale;
  p.mmw_ul_w *= scale;
  p.muw_dl_w *= scale;
  p.muw_ul_w *= scale;
  std::vector<double> base_sir;
  std::vector<double> scaled_sir;
  const SEEstimate a = estimate_se(config, &base_sir);
  const SEEstimate b = estimate_se(scaled, &scaled_sir);
  if (base_sir.size() != scaled_sir.size()) return false;
  for (std::size_t i = 0; i < base_sir.size(); ++i) {
    if (std::memcmp(&base_sir[i], &scaled_sir[i], sizeof(double)) != 0) return false;
  }
  return a.mean == b.mean && a.ci_half_width == b.ci_half_width && a.n == b.n;
}

SEBounds analytic_bounds(const SimConfig& config) {
  const NetworkParams& p = config.params;
  if (config.tier == Tier::MuW) return se_muw_bounds(p.lambda_hat_mu(), p.alpha_mu);
  return se_mmw_bounds_integral(p);
}

std::vector<SweepRow> sweep_se(const std::vector<double>& grid, const SimConfig& base,
                               const std::vector<std::pair<Tier, Direction>>& links) {
  if (grid.empty()) throw ParameterError("SE sweep grid is empty");
  if (links.empty()) throw ParameterError("SE sweep needs at least one tier/direction");
  std::vector<SweepRow> rows;
  for (double lh : grid) {
    if (!(lh > 0.0)) throw ParameterError("sweep density ratios must be positive");
    for (const auto& [tier, direction] : links) {
      SimConfig c = base;
      c.tier = tier;
      c.direction = direction;
      c.decoupled = base.decoupled && tier == Tier::MmW && direction == Direction::UL;
      (tier == Tier::MmW ? c.params.lambda_m : c.params.lambda_mu) = lh * c.params.lambda_u;
      SweepRow row;
      row.lambda_hat = lh;
      row.tier = tier;
      row.direction = direction;
      row.estimate = estimate_se(c);
      row.bounds = analytic_bounds(c);
      rows.push_back(row);
    }
  }
  return rows;
}

CellAreaSample sample_cell_areas(std::size_t replications, double window_side, std::size_t samples_per_cell,
                                 std::uint64_t seed) {
  if (replications < 1 || samples_per_cell < 1) throw ParameterError("cell sampling needs positive counts");
  const Window w(window_side, true);
  CellAreaSample out;
  for (std::size_t r = 0; r < replications; ++r) {
    RngStream bs_rng(seed, r, "cells-bs");
    RngStream probe_rng(seed, r, "cells-probe");
    const PointSet bss = sample_ppp(1.0, w, bs_rng);
    if (bss.points.empty()) continue;
    const GridIndex index(bss.points, w);
    std::vector<std::size_t> hits(bss.size(), 0);
    const std::size_t probes = samples_per_cell * bss.size();
    for (std::size_t i = 0; i < probes; ++i) {
      const Point2D q{probe_rng.uniform(0.0, window_side), probe_rng.uniform(0.0, window_side)};
      ++hits[index.nearest(q)];
    }
    const double per_probe = w.area() / static_cast<double>(probes);
    for (std::size_t h : hits) out.areas.push_back(static_cast<double>(h) * per_probe);
    out.cells += bss.size();
  }
  return out;
}

double ks_distance(std::vector<double> sample, const GammaLaw& law) {
  if (sample.empty()) throw ParameterError("KS distance needs a nonempty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = law.cdf(sample[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

}  // namespace mmudn
