#pragma once

#include <optional>
#include <string>

#include "mmudn/analytic_se.hpp"

namespace mmudn {

struct SpectrumParams {
  double w_m_hz = 500e6;     // mmW bandwidth
  double w_mu_hz = 20e6;     // uW bandwidth
  double w_m_ul_hz = 100e6;  // PAPR-limited mmW UL bandwidth
  double f_s_hz = 244.14e3;  // subcarrier spacing
  double delta = 10.0;       // PAPR threshold, linear
  double epsilon = 0.7;      // PAPR outage probability
  double zeta = 0.25;        // minimum UL/DL rate ratio

  /// Throws ParameterError unless w_m > w_mu > 0, w_m_ul > 0 and zeta in [0, 1].
  void validate() const;
  /// Copy with w_m_ul clamped to w_m; `clamped` reports whether it fired.
  SpectrumParams clamped(bool* clamped = nullptr) const;
};

struct Allocation {
  double beta_m = 0.0;
  double beta_mu = 0.0;
};

struct RatePair {
  double r_d = 0.0;  // nats/s
  double r_u = 0.0;  // nats/s
};

struct Gammas {
  double m = 0.0;     // mmW DL SE
  double mu = 0.0;    // uW SE
  double m_ul = 0.0;  // mmW UL SE
};

enum class Region { CL, CH };

struct RegionLabel {
  Region region = Region::CL;
  bool decoupling_region = false;  // membership in D

  std::string to_string(bool decoupled) const;
};

/// Density ratios and LOS probabilities at one operating point.
struct AllocationInputs {
  double lambda_hat_m = 2.0;
  double lambda_hat_mu = 2.0;
  double alpha_m = 2.5;
  double alpha_mu = 4.0;
  double p_l = 1.0;            // LOS probability of the mmW DL/UL SE
  double p_l_decoupled = 1.0;  // LOS probability inside the decoupled UL SE
  double r_los_m = 0.0;        // reporting only; 0 when unknown

  void validate() const;
};

enum class DecoupledLos { MmwDensity, CombinedDensity };

/// Operating point at mmW density ratio `lambda_hat_m`, with p_L from the
/// LOS distance and lambda_m = lambda_hat_m lambda_u.
AllocationInputs allocation_inputs(const NetworkParams& params, double lambda_hat_m,
                                   DecoupledLos los = DecoupledLos::MmwDensity);
AllocationInputs allocation_inputs(const NetworkParams& params,
                                   DecoupledLos los = DecoupledLos::MmwDensity);

/// gamma_m = gamma_m.u = (alpha_m p_L / 2) ln lambda_hat_m; with decoupling
/// gamma_m.u uses ln(lambda_hat_m + lambda_hat_mu) instead.
Gammas spectral_efficiencies(const AllocationInputs& in, bool decoupled);

double papr_outage(double w_hz, double f_s_hz, double delta);

enum class BandwidthMode { AsPrinted, ExactInversion };

struct UlBandwidth {
  double w_hz = 0.0;
  double unclamped_hz = 0.0;
  bool clamped = false;
};

UlBandwidth mmw_ul_bandwidth(double f_s_hz, double delta, double epsilon, BandwidthMode mode, double cap_hz);

RatePair rates(const Allocation& alloc, const SpectrumParams& spectrum, const Gammas& gammas);

/// Evaluates the C_L and D inequalities at the operating point.
RegionLabel region_classify(const AllocationInputs& in, const SpectrumParams& spectrum, bool decoupled);

/// Diagnostic SE-level form of D: W_m.u gamma_m.u(dec) >= W_m gamma_m.
bool decoupling_region_by_se(const AllocationInputs& in, const SpectrumParams& spectrum);

/// C_L/C_H boundary in lambda_hat_m, solved by bisection with p_L following
/// lambda_m. Returns nullopt if no crossing lies in (1, upper].
std::optional<double> cl_boundary(const NetworkParams& params, const SpectrumParams& spectrum,
                                  double upper = 1e12);

enum class AssumptionPolicy { Enforce, Report };

struct AllocationResult {
  Allocation allocation;
  RegionLabel label;
  /// W_m gamma_m > W_mu gamma_mu, required by the closed forms.
  bool mmw_dominates = true;
};

AllocationResult optimal_allocation(const AllocationInputs& in, const SpectrumParams& spectrum,
                                    AssumptionPolicy policy = AssumptionPolicy::Enforce);
AllocationResult optimal_allocation_decoupled(const AllocationInputs& in, const SpectrumParams& spectrum,
                                              AssumptionPolicy policy = AssumptionPolicy::Enforce);

struct AllocationLimits {
  double min_beta_mu = 0.0;
  double max_beta_m = 0.0;
};

AllocationLimits allocation_limits(const SpectrumParams& spectrum);

struct MaxDlRate {
  AllocationResult optimum;
  RatePair rates;
  double r_d_star = 0.0;
  /// The closed-form rate expression evaluated as written.
  double printed = 0.0;
  /// Decoupling region only: the expression with R_L in place of p_L.
  std::optional<double> printed_literal;
};

/// R_d* from substituting the optimal allocation into the rate model, with
/// the closed-form rate expression evaluated alongside.
MaxDlRate max_dl_rate(const AllocationInputs& in, const SpectrumParams& spectrum, bool decoupled,
                      AssumptionPolicy policy = AssumptionPolicy::Enforce);

struct LpResult {
  Allocation allocation;
  double r_d = 0.0;
};

/// Exact two-variable LP: enumerates vertices of {0 <= beta <= 1,
/// R_u >= zeta R_d} and returns the R_d maximizer.
LpResult lp_oracle(const AllocationInputs& in, const SpectrumParams& spectrum, bool decoupled);

}  // namespace mmudn
