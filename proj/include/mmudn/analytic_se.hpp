#pragma once

#include <numbers>

namespace mmudn {

struct TxPowers {
  double mmw_dl_w = 1.0;
  double mmw_ul_w = 0.2;
  double muw_dl_w = 1.0;
  double muw_ul_w = 0.2;
};

struct NetworkParams {
  double lambda_m = 1e-2;   // mmW BSs per m^2
  double lambda_mu = 1e-2;  // uW BSs per m^2
  double lambda_u = 1e-4;   // users per m^2
  double alpha_m = 2.5;
  double alpha_mu = 4.0;
  double theta = std::numbers::pi / 12.0;  // mmW mainlobe beamwidth, radians
  double r_los_m = 10.0;
  TxPowers powers;

  double lambda_hat_m() const;
  double lambda_hat_mu() const;
  void validate() const;
};

/// Spectral efficiency in nats/s/Hz with a flag set when the density ratio
/// is below 1, i.e. outside the ultra-dense regime.
struct SEValue {
  double nats = 0.0;
  bool outside_udn = false;
};

struct SEBounds {
  double lower = 0.0;
  double upper = 0.0;
  double asymptotic = 0.0;
  bool outside_udn = false;
};

inline double nats_to_bits(double nats) { return nats / std::numbers::ln2; }

/// rho(alpha) = (2 pi / alpha) csc(2 pi / alpha)
double interference_constant(double alpha);

/// (alpha_mu / 2) ln lambda_hat_mu
SEValue se_muw_asymptotic(double lambda_hat_mu, double alpha_mu);

SEBounds se_muw_bounds(double lambda_hat_mu, double alpha_mu);

/// p_L = 1 - exp(-lambda_m pi R_L^2)
double los_probability(double lambda_m, double r_los_m);

/// (alpha_m p_L / 2) ln lambda_hat_m
SEValue se_mmw_asymptotic(double lambda_hat_m, double lambda_m, double alpha_m, double r_los_m);

/// Closed-form mmW bounds with the constant LOS factors p_L and C_L2.
SEBounds se_mmw_bounds_tractable(const NetworkParams& params);

/// mmW bounds from numerical integration of the t-domain integrands with
/// the distance-dependent LOS factor.
SEBounds se_mmw_bounds_integral(const NetworkParams& params);

/// Probability 1 - exp(-rho_m lambda_u pi R_L^2) that the mmW interference
/// bound is valid.
double mmw_interference_bound_validity(const NetworkParams& params);

}  // namespace mmudn
