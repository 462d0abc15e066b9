#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mmudn/analytic_se.hpp"
#include "mmudn/pointprocess.hpp"

namespace mmudn {

enum class Tier { MmW, MuW };
enum class Direction { DL, UL };

/// How the receiver(s) of a replication are chosen.
enum class ReceiverMode {
  /// A user added at the window center (Palm user), scheduled by its BS.
  InsertedUser,
  /// The scheduled entity nearest the window center. Biased toward large
  /// cells; kept for comparison.
  NearestScheduled,
  /// Every scheduled link of the replication.
  AllScheduled,
};

std::string to_string(Tier tier);
std::string to_string(Direction direction);
std::string to_string(ReceiverMode mode);
Tier parse_tier(const std::string& s);
Direction parse_direction(const std::string& s);
ReceiverMode parse_receiver_mode(const std::string& s);

struct SimConfig {
  NetworkParams params;
  /// Window side in meters; 0 selects the side holding 1000 expected users.
  double window_side_m = 0.0;
  bool wrap = true;
  std::size_t replications = 200;
  std::size_t fading_draws = 20;
  std::uint64_t master_seed = 1;
  Tier tier = Tier::MuW;
  Direction direction = Direction::DL;
  /// mmW UL received by the merged mmW and uW BS set.
  bool decoupled = false;
  ReceiverMode receiver = ReceiverMode::InsertedUser;
  unsigned threads = 1;

  void validate() const;
  Window window() const;
  double tier_density() const;
  double tier_lambda_hat() const;
  /// True when the window holds fewer than 1000 expected users.
  bool small_window() const;
};

struct SEEstimate {
  double mean = 0.0;           // nats/s/Hz
  double ci_half_width = 0.0;  // 95%, normal approximation
  std::size_t n = 0;           // replications entering the mean
  std::size_t interference_free = 0;
  std::size_t discarded = 0;
  /// Interference-free receivers over all receivers.
  double interference_free_fraction = 0.0;
  /// Receivers without a LOS serving BS (their SE is 0).
  double unserved_fraction = 0.0;
};

/// Per-replication record.
struct ReplicationResult {
  // Counted: enters the mean. InterferenceFree: every receiver saw no
  // interferer. Discarded: no BS or no active transmitter.
  enum class Kind { Counted, InterferenceFree, Discarded };
  Kind kind = Kind::Discarded;
  double se = 0.0;  // mean over counted receivers and fading draws
  std::size_t receivers = 0;
  std::size_t interference_free_receivers = 0;
  std::size_t unserved_receivers = 0;
  std::vector<double> sir;  // filled only when requested
};

ReplicationResult simulate_replication(const SimConfig& config, std::size_t replication, bool keep_sir = false);

/// Runs all replications (in parallel when threads > 1) and reduces them in
/// replication order.
SEEstimate estimate_se(const SimConfig& config);

/// Same as estimate_se, also returning every SIR sample in replication order.
SEEstimate estimate_se(const SimConfig& config, std::vector<double>* sir_samples);

struct HomogenizationReport {
  double empirical_active_density = 0.0;
  double lambda_u = 0.0;
  double ratio = 0.0;
  std::size_t bs_count = 0;
  std::size_t active_count = 0;
};

HomogenizationReport validate_homogenization(const SimConfig& config);

/// Reruns estimate_se with every transmit power scaled and compares the SIR
/// samples bit for bit.
bool power_invariance_check(const SimConfig& config, double scale);

struct SweepRow {
  double lambda_hat = 0.0;
  Tier tier = Tier::MuW;
  Direction direction = Direction::DL;
  SEEstimate estimate;
  SEBounds bounds;
};

/// One row per grid point and (tier, direction) pair; the template's tier
/// density is replaced by lambda_hat * lambda_u.
std::vector<SweepRow> sweep_se(const std::vector<double>& grid, const SimConfig& base,
                               const std::vector<std::pair<Tier, Direction>>& links);

/// Analytic bounds attached to a sweep row: Prop-style closed forms for uW,
/// integral bounds for mmW.
SEBounds analytic_bounds(const SimConfig& config);

struct CellAreaSample {
  std::vector<double> areas;  // in units of 1/lambda
  std::size_t cells = 0;
};

/// Voronoi cell areas of a unit-density PPP estimated by uniform sampling of
/// nearest-BS ownership on the torus.
CellAreaSample sample_cell_areas(std::size_t replications, double window_side, std::size_t samples_per_cell,
                                 std::uint64_t seed);

/// Two-sided Kolmogorov-Smirnov statistic against a Gamma law.
double ks_distance(std::vector<double> sample, const GammaLaw& law);

}  // namespace mmudn
