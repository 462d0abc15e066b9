#include "mmudn/allocation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "mmudn/errors.hpp"

namespace mmudn {

void SpectrumParams::validate() const {
  if (!(w_mu_hz > 0.0)) throw ParameterError("w_mu_hz must be positive");
  if (!(w_m_hz > w_mu_hz)) throw ParameterError("w_m_hz must exceed w_mu_hz");
  if (!(w_m_ul_hz > 0.0)) throw ParameterError("w_m_ul_hz must be positive");
  if (!(f_s_hz > 0.0)) throw ParameterError("f_s_hz must be positive");
  if (!(delta > 0.0)) throw ParameterError("delta must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in (0, 1)");
  if (!(zeta >= 0.0 && zeta <= 1.0)) throw ParameterError("zeta must lie in [0, 1]");
}

SpectrumParams SpectrumParams::clamped(bool* clamped) const {
  validate();
  SpectrumParams out = *this;
  const bool fire = out.w_m_ul_hz > out.w_m_hz;
  if (fire) out.w_m_ul_hz = out.w_m_hz;
  if (clamped) *clamped = fire;
  return out;
}

std::string RegionLabel::to_string(bool decoupled) const {
  if (decoupled && decoupling_region) return "D";
  return region == Region::CL ? "C_L" : "C_H";
}

void AllocationInputs::validate() const {
  if (!(lambda_hat_m > 1.0) || !std::isfinite(lambda_hat_m)) {
    throw ParameterError("lambda_hat_m must exceed 1 for the allocation closed forms");
  }
  if (!(lambda_hat_mu > 1.0) || !std::isfinite(lambda_hat_mu)) {
    throw ParameterError("lambda_hat_mu must exceed 1 for the allocation closed forms");
  }
  if (!(alpha_m > 2.0) || !(alpha_mu > 2.0)) throw DomainError("path-loss exponents must exceed 2");
  if (!(p_l >= 0.0 && p_l <= 1.0) || !(p_l_decoupled >= 0.0 && p_l_decoupled <= 1.0)) {
    throw ParameterError("LOS probabilities must lie in [0, 1]");
  }
}

AllocationInputs allocation_inputs(const NetworkParams& params, double lambda_hat_m, DecoupledLos los) {
  params.validate();
  AllocationInputs in;
  in.lambda_hat_m = lambda_hat_m;
  in.lambda_hat_mu = params.lambda_hat_mu();
  in.alpha_m = params.alpha_m;
  in.alpha_mu = params.alpha_mu;
  const double lambda_m = lambda_hat_m * params.lambda_u;
  in.p_l = los_probability(lambda_m, params.r_los_m);
  in.p_l_decoupled = los == DecoupledLos::MmwDensity ? in.p_l
                                                     : los_probability(lambda_m + params.lambda_mu, params.r_los_m);
  in.r_los_m = params.r_los_m;
  return in;
}

AllocationInputs allocation_inputs(const NetworkParams& params, DecoupledLos los) {
  return allocation_inputs(params, params.lambda_hat_m(), los);
}

Gammas spectral_efficiencies(const AllocationInputs& in, bool decoupled) {
  Gammas g;
  g.m = 0.5 * in.alpha_m * in.p_l * std::log(in.lambda_hat_m);
  g.mu = 0.5 * in.alpha_mu * std::log(in.lambda_hat_mu);
  g.m_ul = decoupled ? 0.5 * in.alpha_m * in.p_l_decoupled * std::log(in.lambda_hat_m + in.lambda_hat_mu) : g.m;
  return g;
}

double papr_outage(double w_hz, double f_s_hz, double delta) {
  if (!(f_s_hz > 0.0)) throw ParameterError("subcarrier spacing must be positive");
  if (!(delta > 0.0)) throw ParameterError("PAPR threshold must be positive");
  if (!(w_hz >= 0.0)) throw ParameterError("bandwidth must be nonnegative");
  const double rate = std::exp(-delta) / f_s_hz * std::sqrt(std::numbers::pi * delta / 3.0);
  return -std::expm1(-w_hz * rate);
}

UlBandwidth mmw_ul_bandwidth(double f_s_hz, double delta, double epsilon, BandwidthMode mode, double cap_hz) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in (0, 1)");
  if (!(f_s_hz > 0.0)) throw ParameterError("subcarrier spacing must be positive");
  if (!(delta > 0.0)) throw ParameterError("PAPR threshold must be positive");
  if (!(cap_hz > 0.0)) throw ParameterError("bandwidth cap must be positive");
  const double scale = f_s_hz * std::exp(delta);
  UlBandwidth out;
  if (mode == BandwidthMode::AsPrinted) {
    out.unclamped_hz = std::sqrt(3.0) * scale / std::sqrt(std::numbers::pi * delta) / std::log(1.0 / epsilon);
  } else {
    out.unclamped_hz = scale * std::sqrt(3.0 / (std::numbers::pi * delta)) * -std::log1p(-epsilon);
  }
  out.clamped = !(out.unclamped_hz <= cap_hz);
  out.w_hz = out.clamped ? cap_hz : out.unclamped_hz;
  return out;
}

RatePair rates(const Allocation& a, const SpectrumParams& s, const Gammas& g) {
  RatePair r;
  r.r_u = a.beta_m * s.w_m_ul_hz * g.m_ul + a.beta_mu * s.w_mu_hz * g.mu;
  r.r_d = (1.0 - a.beta_m) * s.w_m_hz * g.m + (1.0 - a.beta_mu) * s.w_mu_hz * g.mu;
  return r;
}

RegionLabel region_classify(const AllocationInputs& in, const SpectrumParams& spectrum, bool decoupled) {
  in.validate();
  const SpectrumParams s = spectrum.clamped();
  RegionLabel label;
  // ln lambda_hat_m <= alpha_mu W_mu ln lambda_hat_mu / (zeta alpha_m p_L W_m)
  const double lhs = s.zeta * in.alpha_m * in.p_l * s.w_m_hz * std::log(in.lambda_hat_m);
  const double rhs = in.alpha_mu * s.w_mu_hz * std::log(in.lambda_hat_mu);
  label.region = lhs <= rhs ? Region::CL : Region::CH;
  if (decoupled) {
    label.decoupling_region = std::log(in.lambda_hat_mu + in.lambda_hat_m) >=
                              s.w_m_hz / s.w_m_ul_hz * std::log(in.lambda_hat_m);
  }
  return label;
}

bool decoupling_region_by_se(const AllocationInputs& in, const SpectrumParams& spectrum) {
  in.validate();
  const SpectrumParams s = spectrum.clamped();
  const Gammas g = spectral_efficiencies(in, true);
  return s.w_m_ul_hz * g.m_ul >= s.w_m_hz * g.m;
}

std::optional<double> cl_boundary(const NetworkParams& params, const SpectrumParams& spectrum, double upper) {
  params.validate();
  const SpectrumParams s = spectrum.clamped();
  if (s.zeta == 0.0) return std::nullopt;
  const double lh_mu = params.lambda_hat_mu();
  if (!(lh_mu > 1.0)) throw ParameterError("lambda_hat_mu must exceed 1");
  auto excess = [&](double lh) {
    const double p_l = los_probability(lh * params.lambda_u, params.r_los_m);
    return s.zeta * params.alpha_m * p_l * s.w_m_hz * std::log(lh) - params.alpha_mu * s.w_mu_hz * std::log(lh_mu);
  };
  if (excess(upper) <= 0.0) return std::nullopt;
  // Both p_L and ln(lambda_hat_m) increase, so the excess has one sign change.
  double lo = 1.0;
  double hi = upper;
  for (int it = 0; it < 400; ++it) {
    if (hi - lo <= 1e-9 * hi) return hi;
    const double mid = hi / lo > 4.0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? hi : lo) = mid;
  }
  throw NumericError("C_L/C_H boundary bisection did not reach tolerance");
}

namespace {

bool check_dominance(const SpectrumParams& s, const Gammas& g, AssumptionPolicy policy) {
  const double mmw = s.w_m_hz * g.m;
  const double muw = s.w_mu_hz * g.mu;
  const bool ok = mmw > muw;
  if (!ok && policy == AssumptionPolicy::Enforce) {
    std::ostringstream msg;
    msg << "closed-form allocation requires W_m*gamma_m > W_mu*gamma_mu, got " << mmw << " <= " << muw;
    throw AssumptionError(msg.str());
  }
  return ok;
}

Allocation clamp_box(Allocation a) {
  a.beta_m = std::clamp(a.beta_m, 0.0, 1.0);
  a.beta_mu = std::clamp(a.beta_mu, 0.0, 1.0);
  return a;
}

// Low-density branch: mmW stays DL, uW carries the UL share.
Allocation low_branch(const SpectrumParams& s, const Gammas& g) {
  const double k = s.zeta / (1.0 + s.zeta);
  return {0.0, k * (1.0 + s.w_m_hz * g.m / (s.w_mu_hz * g.mu))};
}

// High-density branch: all uW UL, mmW tops up the UL constraint.
Allocation high_branch(const SpectrumParams& s, const Gammas& g) {
  const double mmw = s.w_m_hz * g.m;
  return {(s.zeta - s.w_mu_hz * g.mu / mmw) / (s.zeta + s.w_m_ul_hz * g.m_ul / mmw), 1.0};
}

// Decoupling region: uW all DL, mmW carries the UL share.
Allocation decoupling_branch(const SpectrumParams& s, const Gammas& g) {
  const double mmw = s.w_m_hz * g.m;
  return {(1.0 + s.w_mu_hz * g.mu / mmw) / (1.0 + s.w_m_ul_hz * g.m_ul / (s.zeta * mmw)), 0.0};
}

}  // namespace

AllocationResult optimal_allocation(const AllocationInputs& in, const SpectrumParams& spectrum,
                                    AssumptionPolicy policy) {
  in.validate();
  const SpectrumParams s = spectrum.clamped();
  const Gammas g = spectral_efficiencies(in, false);
  AllocationResult out;
  out.mmw_dominates = check_dominance(s, g, policy);
  out.label = region_classify(in, s, false);
  if (s.zeta == 0.0) return out;
  out.allocation = clamp_box(out.label.region == Region::CL ? low_branch(s, g) : high_branch(s, g));
  return out;
}

AllocationResult optimal_allocation_decoupled(const AllocationInputs& in, const SpectrumParams& spectrum,
                                              AssumptionPolicy policy) {
  in.validate();
  const SpectrumParams s = spectrum.clamped();
  const Gammas g = spectral_efficiencies(in, true);
  AllocationResult out;
  out.mmw_dominates = check_dominance(s, g, policy);
  out.label = region_classify(in, s, true);
  if (s.zeta == 0.0) return out;
  Allocation a;
  if (out.label.decoupling_region) {
    a = decoupling_branch(s, g);
  } else if (out.label.region == Region::CL) {
    a = low_branch(s, g);
  } else {
    a = high_branch(s, g);
  }
  out.allocation = clamp_box(a);
  return out;
}

AllocationLimits allocation_limits(const SpectrumParams& spectrum) {
  const SpectrumParams s = spectrum.clamped();
  AllocationLimits lim;
  if (s.zeta == 0.0) return lim;
  lim.min_beta_mu = 1.0 / (1.0 + 1.0 / s.zeta);
  lim.max_beta_m = 1.0 / (1.0 + s.w_m_ul_hz / (s.zeta * s.w_m_hz));
  return lim;
}

MaxDlRate max_dl_rate(const AllocationInputs& in, const SpectrumParams& spectrum, bool decoupled,
                      AssumptionPolicy policy) {
  const SpectrumParams s = spectrum.clamped();
  MaxDlRate out;
  out.optimum = decoupled ? optimal_allocation_decoupled(in, s, policy) : optimal_allocation(in, s, policy);
  out.rates = rates(out.optimum.allocation, s, spectral_efficiencies(in, decoupled));
  out.r_d_star = out.rates.r_d;

  const double ln_m = std::log(in.lambda_hat_m);
  const double ln_mu = std::log(in.lambda_hat_mu);
  const double ln_sum = std::log(in.lambda_hat_m + in.lambda_hat_mu);
  const double muw_term = in.alpha_mu * s.w_mu_hz * ln_mu;
  const RegionLabel& label = out.optimum.label;
  if (s.zeta == 0.0) {
    out.printed = 0.5 * (muw_term + in.alpha_m * s.w_m_hz * in.p_l * ln_m);
  } else if (decoupled && label.decoupling_region) {
    const double denom = 2.0 * (1.0 + s.zeta * s.w_m_hz * ln_m / (s.w_m_ul_hz * ln_sum));
    out.printed = (muw_term + in.alpha_m * s.w_m_ul_hz * in.p_l * ln_m) / denom;
    if (in.r_los_m > 0.0) out.printed_literal = (muw_term + in.alpha_m * s.w_m_ul_hz * in.r_los_m * ln_m) / denom;
  } else if (label.region == Region::CL) {
    out.printed = (muw_term + in.alpha_m * s.w_m_hz * in.p_l * ln_m) / (2.0 * (1.0 + s.zeta));
  } else if (decoupled) {
    out.printed = (muw_term + in.alpha_m * s.w_m_ul_hz * in.p_l_decoupled * ln_sum) /
                  (2.0 * (s.zeta + s.w_m_ul_hz * in.p_l_decoupled * ln_sum / (s.w_m_hz * in.p_l * ln_m)));
  } else {
    out.printed = (muw_term + in.alpha_m * s.w_m_ul_hz * in.p_l * ln_m) / (2.0 * (s.zeta + s.w_m_ul_hz / s.w_m_hz));
  }
  return out;
}

LpResult lp_oracle(const AllocationInputs& in, const SpectrumParams& spectrum, bool decoupled) {
  in.validate();
  const SpectrumParams s = spectrum.clamped();
  const Gammas g = spectral_efficiencies(in, decoupled);
  // Constraint R_u - zeta R_d = a beta_m + b beta_mu - c >= 0.
  const double a = s.w_m_ul_hz * g.m_ul + s.zeta * s.w_m_hz * g.m;
  const double b = (1.0 + s.zeta) * s.w_mu_hz * g.mu;
  const double c = s.zeta * (s.w_m_hz * g.m + s.w_mu_hz * g.mu);

  std::vector<Allocation> candidates = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
  for (double bm : {0.0, 1.0}) {
    if (b > 0.0) {
      const double bu = (c - a * bm) / b;
      if (bu >= 0.0 && bu <= 1.0) candidates.push_back({bm, bu});
    }
  }
  for (double bu : {0.0, 1.0}) {
    if (a > 0.0) {
      const double bm = (c - b * bu) / a;
      if (bm >= 0.0 && bm <= 1.0) candidates.push_back({bm, bu});
    }
  }

  const double scale = std::max({c, a, b, 1.0});
  std::optional<LpResult> best;
  for (const Allocation& v : candidates) {
    const RatePair r = rates(v, s, g);
    if (r.r_u - s.zeta * r.r_d < -1e-12 * scale) continue;
    const bool better = !best || r.r_d > best->r_d * (1.0 + 1e-12) ||
                        (r.r_d >= best->r_d * (1.0 - 1e-12) &&
                         (v.beta_m < best->allocation.beta_m ||
                          (v.beta_m == best->allocation.beta_m && v.beta_mu < best->allocation.beta_mu)));
    if (better) best = LpResult{v, r.r_d};
  }
  if (!best) throw AssumptionError("UL rate constraint is infeasible for every allocation");
  return *best;
}

}  // namespace mmudn
