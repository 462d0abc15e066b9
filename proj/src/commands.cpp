#include "mmudn/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "mmudn/blockage.hpp"
#include "mmudn/errors.hpp"

namespace mmudn {

namespace {

std::string num(double v) { return format_number(v); }

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = n == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return g;
}

Table new_table(const std::string& command, const Config& config) {
  Table t;
  t.command = command;
  t.config = config.resolved();
  return t;
}

void add_warnings(Table& t, const std::vector<std::string>& warnings) {
  for (std::size_t i = 0; i < warnings.size(); ++i) t.derived.emplace_back("warning" + std::to_string(i + 1), warnings[i]);
}

Table run_blockage(const Config& config) {
  const std::string path = config.raw("input_csv");
  if (path.empty()) throw ConfigError("input_csv", "blockage needs a building statistics CSV (--input)");
  std::ifstream in(path);
  if (!in) throw ConfigError("input_csv", "cannot open " + path);
  const auto records = read_building_csv(in);

  Table t = new_table("blockage", config);
  t.columns = {"region", "beta", "eta", "r_los_2d_m", "r_los_3d_m", "eta_formula", "r_los_3d_formula_m"};
  for (const auto& rec : records) {
    const BlockageParams used = blockage_params(rec.stats, rec.eta_override);
    const BlockageParams formula = blockage_params(rec.stats);
    t.add_row({rec.stats.region, num(used.beta), num(used.eta), num(used.r_los_2d_m), num(used.r_los_3d_m),
               num(formula.eta), num(formula.r_los_3d_m)});
  }
  return t;
}

Table run_se(const Config& config) {
  NetworkParams p = network_from(config);
  const bool bits = config.get_choice("se_unit", {"nats", "bits"}) == "bits";
  auto se = [&](double nats) { return num(bits ? nats_to_bits(nats) : nats); };
  const auto grid = config.get_list("lambda_hat_grid");
  if (grid.empty()) throw ConfigError("lambda_hat_grid", "grid is empty");

  Table t = new_table("se", config);
  t.columns = {"lambda_hat",      "tier",           "asymptotic",     "lower_bound", "upper_bound",
               "tractable_lower", "tractable_upper", "bound_validity", "outside_udn"};
  for (double lh : grid) {
    if (!(lh > 0.0)) throw ConfigError("lambda_hat_grid", "density ratios must be positive");
    const SEBounds mu = se_muw_bounds(lh, p.alpha_mu);
    t.add_row({num(lh), "muw", se(mu.asymptotic), se(mu.lower), se(mu.upper), se(mu.lower), se(mu.upper), "",
               format_bool(mu.outside_udn)});
    p.lambda_m = lh * p.lambda_u;
    const SEBounds integral = se_mmw_bounds_integral(p);
    const SEBounds tractable = se_mmw_bounds_tractable(p);
    t.add_row({num(lh), "mmw", se(integral.asymptotic), se(integral.lower), se(integral.upper), se(tractable.lower),
               se(tractable.upper), num(mmw_interference_bound_validity(p)), format_bool(integral.outside_udn)});
  }
  return t;
}

std::vector<std::string> sim_columns() {
  return {"lambda_hat", "tier",       "direction",  "se_mean",  "se_ci",
          "lower_bound", "upper_bound", "asymptotic", "interference_free_fraction",
          "n",          "interference_free", "discarded", "unserved_fraction"};
}

std::vector<std::string> sim_row(double lh, Tier tier, Direction dir, const SEEstimate& e, const SEBounds& b,
                                 bool bits) {
  auto se = [&](double nats) { return num(bits ? nats_to_bits(nats) : nats); };
  return {num(lh),           to_string(tier),     to_string(dir),
          se(e.mean),        se(e.ci_half_width), se(b.lower),
          se(b.upper),       se(b.asymptotic),    num(e.interference_free_fraction),
          std::to_string(e.n), std::to_string(e.interference_free), std::to_string(e.discarded),
          num(e.unserved_fraction)};
}

void window_warning(const SimConfig& c, std::vector<std::string>& warnings) {
  if (c.small_window()) warnings.push_back("window holds fewer than 1000 expected users");
}

Table run_simulate(const Config& config) {
  SimConfig c = sim_config_from(config);
  const bool bits = config.get_choice("se_unit", {"nats", "bits"}) == "bits";
  std::vector<std::string> warnings;
  window_warning(c, warnings);
  const SEEstimate e = estimate_se(c);
  const SEBounds b = analytic_bounds(c);
  Table t = new_table("simulate", config);
  t.columns = sim_columns();
  t.add_row(sim_row(c.tier_lambda_hat(), c.tier, c.direction, e, b, bits));
  add_warnings(t, warnings);
  return t;
}

Table run_sweep(const Config& config) {
  SimConfig c = sim_config_from(config);
  const bool bits = config.get_choice("se_unit", {"nats", "bits"}) == "bits";
  const auto grid = config.get_list("lambda_hat_grid");
  if (grid.empty()) throw ConfigError("lambda_hat_grid", "grid is empty");
  std::vector<std::pair<Tier, Direction>> links;
  for (const auto& item : config.get_strings("links")) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("links", "expected tier:direction, got '" + item + "'");
    try {
      links.emplace_back(parse_tier(item.substr(0, colon)), parse_direction(item.substr(colon + 1)));
    } catch (const ParameterError& e) {
      throw ConfigError("links", e.what());
    }
  }
  if (links.empty()) throw ConfigError("links", "no tier:direction pairs");
  std::vector<std::string> warnings;
  window_warning(c, warnings);
  const auto rows = sweep_se(grid, c, links);
  Table t = new_table("sweep", config);
  t.columns = sim_columns();
  for (const auto& r : rows) t.add_row(sim_row(r.lambda_hat, r.tier, r.direction, r.estimate, r.bounds, bits));
  add_warnings(t, warnings);
  return t;
}

Table run_allocate(const Config& config) {
  const NetworkParams p = network_from(config);
  std::vector<std::string> warnings;
  const SpectrumParams s = spectrum_from(config, &warnings);
  const DecoupledLos los =
      config.get_choice("decoupled_los", {"mmw", "combined"}) == "mmw" ? DecoupledLos::MmwDensity
                                                                       : DecoupledLos::CombinedDensity;
  const AssumptionPolicy policy = config.get_choice("assumption_policy", {"report", "enforce"}) == "report"
                                      ? AssumptionPolicy::Report
                                      : AssumptionPolicy::Enforce;
  const double lo = config.get_double("lambda_hat_m_min");
  const double hi = config.get_double("lambda_hat_m_max");
  const auto points = config.get_uint("lambda_hat_m_points");
  if (!(lo > 1.0)) throw ConfigError("lambda_hat_m_min", "must exceed 1");
  if (!(hi >= lo)) throw ConfigError("lambda_hat_m_max", "must be at least lambda_hat_m_min");
  if (points < 1) throw ConfigError("lambda_hat_m_points", "must be at least 1");

  Table t = new_table("allocate", config);
  t.columns = {"lambda_hat_m",      "region",        "beta_m",           "beta_mu",
               "r_d",               "r_u",           "r_d_decoupled",    "gain",
               "region_decoupled",  "beta_m_decoupled", "beta_mu_decoupled", "r_u_decoupled",
               "r_d_bits",          "r_u_bits",      "r_d_decoupled_bits", "r_u_decoupled_bits",
               "p_l",               "mmw_dominates"};
  double peak_gain = 0.0;
  double peak_at = 0.0;
  std::size_t dominance_failures = 0;
  for (double lh : log_grid(lo, hi, points)) {
    const AllocationInputs in = allocation_inputs(p, lh, los);
    const MaxDlRate plain = max_dl_rate(in, s, false, policy);
    const MaxDlRate dec = max_dl_rate(in, s, true, policy);
    const double gain = dec.r_d_star / plain.r_d_star;
    if (gain > peak_gain) {
      peak_gain = gain;
      peak_at = lh;
    }
    if (!plain.optimum.mmw_dominates) ++dominance_failures;
    t.add_row({num(lh),
               plain.optimum.label.to_string(false),
               num(plain.optimum.allocation.beta_m),
               num(plain.optimum.allocation.beta_mu),
               num(plain.r_d_star),
               num(plain.rates.r_u),
               num(dec.r_d_star),
               num(gain),
               dec.optimum.label.to_string(true),
               num(dec.optimum.allocation.beta_m),
               num(dec.optimum.allocation.beta_mu),
               num(dec.rates.r_u),
               num(nats_to_bits(plain.r_d_star)),
               num(nats_to_bits(plain.rates.r_u)),
               num(nats_to_bits(dec.r_d_star)),
               num(nats_to_bits(dec.rates.r_u)),
               num(in.p_l),
               format_bool(plain.optimum.mmw_dominates)});
  }
  const auto boundary = cl_boundary(p, s);
  const AllocationLimits lim = allocation_limits(s);
  t.derived.emplace_back("w_m_ul_hz_effective", num(s.w_m_ul_hz));
  t.derived.emplace_back("cl_boundary_lambda_hat_m", boundary ? num(*boundary) : "none");
  t.derived.emplace_back("min_beta_mu", num(lim.min_beta_mu));
  t.derived.emplace_back("max_beta_m", num(lim.max_beta_m));
  t.derived.emplace_back("peak_gain", num(peak_gain));
  t.derived.emplace_back("peak_gain_lambda_hat_m", num(peak_at));
  if (dominance_failures > 0) {
    warnings.push_back(std::to_string(dominance_failures) +
                       " sweep points have W_m*gamma_m <= W_mu*gamma_mu (closed forms outside their premise)");
  }
  add_warnings(t, warnings);
  return t;
}

}  // namespace

NetworkParams network_from(const Config& c) {
  NetworkParams p;
  p.lambda_m = c.get_double("lambda_m_per_m2");
  p.lambda_mu = c.get_double("lambda_mu_per_m2");
  p.lambda_u = c.get_double("lambda_u_per_m2");
  p.alpha_m = c.get_double("alpha_m");
  p.alpha_mu = c.get_double("alpha_mu");
  p.theta = c.get_double("theta_deg") * std::numbers::pi / 180.0;
  p.r_los_m = c.get_double("r_los_m");
  p.powers.mmw_dl_w = c.get_double("p_mmw_dl_w");
  p.powers.mmw_ul_w = c.get_double("p_mmw_ul_w");
  p.powers.muw_dl_w = c.get_double("p_muw_dl_w");
  p.powers.muw_ul_w = c.get_double("p_muw_ul_w");
  c.get_choice("user_process", {"ppp"});
  if (!(p.lambda_u > 0.0)) throw ConfigError("lambda_u_per_m2", "must be positive");
  if (!(p.lambda_m >= 0.0)) throw ConfigError("lambda_m_per_m2", "must be nonnegative");
  if (!(p.lambda_mu >= 0.0)) throw ConfigError("lambda_mu_per_m2", "must be nonnegative");
  if (!(p.alpha_m > 2.0)) throw ConfigError("alpha_m", "must exceed 2");
  if (!(p.alpha_mu > 2.0)) throw ConfigError("alpha_mu", "must exceed 2");
  if (!(p.theta > 0.0 && p.theta <= 2.0 * std::numbers::pi + 1e-12)) throw ConfigError("theta_deg", "must lie in (0, 360]");
  p.theta = std::min(p.theta, 2.0 * std::numbers::pi);
  if (!(p.r_los_m > 0.0)) throw ConfigError("r_los_m", "must be positive");
  p.validate();
  return p;
}

SpectrumParams spectrum_from(const Config& c, std::vector<std::string>* warnings) {
  SpectrumParams s;
  s.w_m_hz = c.get_double("w_m_hz");
  s.w_mu_hz = c.get_double("w_mu_hz");
  s.f_s_hz = c.get_double("f_s_hz");
  s.delta = c.get_double("papr_delta");
  s.epsilon = c.get_double("papr_epsilon");
  s.zeta = c.get_double("zeta");
  if (!(s.w_mu_hz > 0.0)) throw ConfigError("w_mu_hz", "must be positive");
  if (!(s.w_m_hz > s.w_mu_hz)) throw ConfigError("w_m_hz", "must exceed w_mu_hz");
  if (!(s.zeta >= 0.0 && s.zeta <= 1.0)) throw ConfigError("zeta", "must lie in [0, 1]");
  if (!(s.epsilon > 0.0 && s.epsilon < 1.0)) throw ConfigError("papr_epsilon", "must lie in (0, 1)");
  if (!(s.f_s_hz > 0.0)) throw ConfigError("f_s_hz", "must be positive");
  if (!(s.delta > 0.0)) throw ConfigError("papr_delta", "must be positive");
  const std::string source = c.get_choice("w_m_ul_source", {"config", "as_printed", "exact"});
  if (source == "config") {
    s.w_m_ul_hz = c.get_double("w_m_ul_hz");
    if (!(s.w_m_ul_hz > 0.0)) throw ConfigError("w_m_ul_hz", "must be positive");
  } else {
    const auto mode = source == "as_printed" ? BandwidthMode::AsPrinted : BandwidthMode::ExactInversion;
    const UlBandwidth w = mmw_ul_bandwidth(s.f_s_hz, s.delta, s.epsilon, mode, s.w_m_hz);
    s.w_m_ul_hz = w.w_hz;
    if (w.clamped && warnings) {
      warnings->push_back("PAPR-limited UL bandwidth " + format_number(w.unclamped_hz) + " Hz clamped to w_m_hz");
    }
  }
  bool clamped = false;
  s = s.clamped(&clamped);
  if (clamped && warnings) warnings->push_back("w_m_ul_hz clamped to w_m_hz");
  return s;
}

SimConfig sim_config_from(const Config& c) {
  SimConfig s;
  s.params = network_from(c);
  s.window_side_m = c.get_double("window_side_m");
  if (s.window_side_m < 0.0) throw ConfigError("window_side_m", "must be nonnegative");
  s.wrap = c.get_bool("wrap");
  s.replications = c.get_uint("replications");
  if (s.replications < 1) throw ConfigError("replications", "must be at least 1");
  s.fading_draws = c.get_uint("fading_draws");
  if (s.fading_draws < 1) throw ConfigError("fading_draws", "must be at least 1");
  s.master_seed = c.get_uint("seed");
  s.threads = static_cast<unsigned>(c.get_uint("threads"));
  s.tier = parse_tier(c.get_choice("tier", {"mmw", "muw"}));
  s.direction = parse_direction(c.get_choice("direction", {"dl", "ul"}));
  s.decoupled = c.get_bool("decoupled");
  if (s.decoupled && !(s.tier == Tier::MmW && s.direction == Direction::UL)) {
    throw ConfigError("decoupled", "applies to tier=mmw, direction=ul only");
  }
  s.receiver = parse_receiver_mode(c.get_choice("receiver", {"inserted", "nearest", "all"}));
  if (!c.raw("lambda_hat").empty()) {
    const double lh = c.get_double("lambda_hat");
    if (!(lh > 0.0)) throw ConfigError("lambda_hat", "must be positive");
    (s.tier == Tier::MmW ? s.params.lambda_m : s.params.lambda_mu) = lh * s.params.lambda_u;
  }
  return s;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"blockage", "se", "simulate", "allocate", "sweep"};
  return names;
}

Table run_command(const std::string& command, const Config& config) {
  if (command == "blockage") return run_blockage(config);
  if (command == "se") return run_se(config);
  if (command == "simulate") return run_simulate(config);
  if (command == "allocate") return run_allocate(config);
  if (command == "sweep") return run_sweep(config);
  throw ConfigError("command", "unknown command '" + command + "'");
}

}  // namespace mmudn
