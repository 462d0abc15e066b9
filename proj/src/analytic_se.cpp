#include "mmudn/analytic_se.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mmudn/errors.hpp"
#include "mmudn/quadrature.hpp"

namespace mmudn {

namespace {

constexpr double kPi = std::numbers::pi;

void require_exponent(double alpha, const char* name) {
  if (!(alpha > 2.0) || !std::isfinite(alpha)) {
    throw DomainError(std::string(name) + " must exceed 2, got " + std::to_string(alpha));
  }
}

void require_ratio(double lambda_hat) {
  if (!(lambda_hat > 0.0) || !std::isfinite(lambda_hat)) {
    throw ParameterError("density ratio must be positive and finite");
  }
}

// Lower and upper log terms ln(1 + g [x lambda_hat]^{alpha/2}) - alpha/2
// with g the beamforming gain 2 pi / theta.
double log_term(double gain, double scaled_ratio, double alpha) {
  return std::log1p(gain * std::pow(scaled_ratio, 0.5 * alpha));
}

}  // namespace

double NetworkParams::lambda_hat_m() const {
  if (!(lambda_u > 0.0)) throw ParameterError("lambda_u must be positive for density ratios");
  return lambda_m / lambda_u;
}

double NetworkParams::lambda_hat_mu() const {
  if (!(lambda_u > 0.0)) throw ParameterError("lambda_u must be positive for density ratios");
  return lambda_mu / lambda_u;
}

void NetworkParams::validate() const {
  if (!(lambda_m >= 0.0) || !(lambda_mu >= 0.0)) throw ParameterError("BS densities must be nonnegative");
  if (!(lambda_u > 0.0)) throw ParameterError("lambda_u must be positive");
  require_exponent(alpha_m, "alpha_m");
  require_exponent(alpha_mu, "alpha_mu");
  if (!(theta > 0.0 && theta <= 2.0 * kPi)) throw ParameterError("theta must lie in (0, 2 pi]");
  if (!(r_los_m > 0.0)) throw ParameterError("r_los must be positive");
  if (!(powers.mmw_dl_w > 0.0 && powers.mmw_ul_w > 0.0 && powers.muw_dl_w > 0.0 && powers.muw_ul_w > 0.0)) {
    throw ParameterError("transmit powers must be positive");
  }
}

double interference_constant(double alpha) {
  require_exponent(alpha, "path-loss exponent");
  const double x = 2.0 * kPi / alpha;
  return x / std::sin(x);
}

SEValue se_muw_asymptotic(double lambda_hat_mu, double alpha_mu) {
  require_ratio(lambda_hat_mu);
  require_exponent(alpha_mu, "alpha_mu");
  return {0.5 * alpha_mu * std::log(lambda_hat_mu), lambda_hat_mu < 1.0};
}

SEBounds se_muw_bounds(double lambda_hat_mu, double alpha_mu) {
  const SEValue asym = se_muw_asymptotic(lambda_hat_mu, alpha_mu);
  const double rho = interference_constant(alpha_mu);
  SEBounds b;
  b.lower = std::max(0.0, log_term(1.0, lambda_hat_mu / rho, alpha_mu) - 0.5 * alpha_mu);
  b.upper = std::max(0.0, log_term(1.0, (1.0 + 2.0 / alpha_mu) * lambda_hat_mu, alpha_mu) - 0.5 * alpha_mu);
  b.asymptotic = std::max(0.0, asym.nats);
  b.outside_udn = asym.outside_udn;
  return b;
}

double los_probability(double lambda_m, double r_los_m) {
  if (!(lambda_m >= 0.0)) throw ParameterError("lambda_m must be nonnegative");
  if (!(r_los_m > 0.0)) throw ParameterError("r_los must be positive");
  return -std::expm1(-lambda_m * kPi * r_los_m * r_los_m);
}

SEValue se_mmw_asymptotic(double lambda_hat_m, double lambda_m, double alpha_m, double r_los_m) {
  require_ratio(lambda_hat_m);
  require_exponent(alpha_m, "alpha_m");
  const double p_l = los_probability(lambda_m, r_los_m);
  return {0.5 * alpha_m * p_l * std::log(lambda_hat_m), lambda_hat_m < 1.0};
}

SEBounds se_mmw_bounds_tractable(const NetworkParams& params) {
  params.validate();
  const double lh = params.lambda_hat_m();
  require_ratio(lh);
  const double a = params.alpha_m;
  const double rho = interference_constant(a);
  const double gain = 2.0 * kPi / params.theta;
  const double area = params.lambda_m * kPi * params.r_los_m * params.r_los_m;
  const double p_l = -std::expm1(-area);
  const double c_l2 = -std::expm1(-area * (1.0 + rho * (1.0 + 2.0 / a)));

  SEBounds b;
  b.lower = std::max(0.0, p_l * (log_term(gain, lh / rho, a) - 0.5 * a));
  b.upper = std::max(0.0, c_l2 * log_term(gain, (1.0 + 2.0 / a) * lh, a));
  b.asymptotic = std::max(0.0, 0.5 * a * p_l * std::log(lh));
  b.outside_udn = lh < 1.0;
  return b;
}

SEBounds se_mmw_bounds_integral(const NetworkParams& params) {
  params.validate();
  const double lh = params.lambda_hat_m();
  require_ratio(lh);
  const double a = params.alpha_m;
  const double rho = interference_constant(a);
  const double area = params.lambda_m * kPi * params.r_los_m * params.r_los_m;
  const double beam = params.theta / (2.0 * kPi);

  // Integrand p_L(t) (1 - c x(t))^+ with x(t) = (beam (e^t - 1))^{2/alpha};
  // the bracket vanishes at t_max = ln(1 + c^{-alpha/2} / beam).
  auto bound = [&](double c, const char* what) {
    auto x_of = [&](double t) { return std::pow(beam * std::expm1(t), 2.0 / a); };
    auto f = [&](double t) {
      const double x = x_of(t);
      const double bracket = 1.0 - c * x;
      if (bracket <= 0.0) return 0.0;
      const double p_lt = -std::expm1(-area * (1.0 + rho * x / lh));
      return p_lt * bracket;
    };
    const double t_max = std::log1p(std::pow(c, -0.5 * a) / beam);
    return integrate_adaptive(f, 0.0, t_max, 1e-6, what).value;
  };

  SEBounds b;
  b.lower = std::max(0.0, bound(rho / lh, "mmW SE lower bound"));
  b.upper = std::max(0.0, bound(1.0 / ((1.0 + 2.0 / a) * lh), "mmW SE upper bound"));
  b.asymptotic = std::max(0.0, 0.5 * a * (-std::expm1(-area)) * std::log(lh));
  b.outside_udn = lh < 1.0;
  return b;
}

double mmw_interference_bound_validity(const NetworkParams& params) {
  params.validate();
  const double rho = interference_constant(params.alpha_m);
  return -std::expm1(-rho * params.lambda_u * kPi * params.r_los_m * params.r_los_m);
}

}  // namespace mmudn
