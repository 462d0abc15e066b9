#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mmudn {

/// Lognormal law of the building floor count.
struct FloorCountModel {
  double mu_ln = 0.0;
  double sigma_ln = 1.0;
};

struct BuildingStats {
  std::string region;
  double avg_perimeter_m = 0.0;  // rho
  double avg_area_m2 = 0.0;      // A
  double coverage = 0.0;         // kappa
  FloorCountModel floors;
  double floor_height_m = 3.0;
  double bs_height_m = 0.0;      // B

  void validate() const;
};

struct BlockageParams {
  double beta = 0.0;       // per meter
  double eta = 1.0;
  double r_los_2d_m = 0.0;
  double r_los_3d_m = 0.0;
};

enum class LosMode { TwoD, ThreeD };

/// Mean building height floor_height * E[floor count].
double mean_building_height(const FloorCountModel& floors, double floor_height_m);

/// beta = -2 rho ln(1 - kappa) / (pi A)
double blockage_beta(const BuildingStats& stats);

/// eta = integral over s in [0,1] of Pr(H <= (1 - s) B).
double height_fraction_eta(const BuildingStats& stats);

/// R_L = 2 (1 - kappa) / (beta eta); eta = 1 in 2D mode.
double los_distance(const BuildingStats& stats, LosMode mode,
                    std::optional<double> eta_override = std::nullopt);

BlockageParams blockage_params(const BuildingStats& stats,
                               std::optional<double> eta_override = std::nullopt);

struct FloorBin {
  double floors = 0.0;
  double frequency = 0.0;
};

struct LognormalFit {
  double mu_ln = 0.0;
  double sigma_ln = 0.0;
  double rmse = 0.0;
};

/// Least-squares fit of the lognormal pdf to the normalized histogram.
LognormalFit fit_floor_lognormal(std::span<const FloorBin> histogram);

struct BuildingRecord {
  BuildingStats stats;
  std::optional<double> eta_override;
};

/// Reads the building-statistics CSV. An optional trailing `eta_override`
/// column supplies tabulated eta values; an empty bs_height_m cell defaults
/// to the mean building height.
std::vector<BuildingRecord> read_building_csv(std::istream& in);

}  // namespace mmudn
