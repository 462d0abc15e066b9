// Acceptance checks. Prints one PASS/FAIL line per criterion followed by
// indented detail lines; exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "mmudn/allocation.hpp"
#include "mmudn/analytic_se.hpp"
#include "mmudn/blockage.hpp"
#include "mmudn/pointprocess.hpp"
#include "mmudn/quadrature.hpp"
#include "mmudn/simulator.hpp"

using namespace mmudn;

namespace {

// Tolerances.
constexpr double kBetaRelTol = 0.02;
constexpr double kRlos2dRelTol = 0.01;
constexpr double kRlos3dRelTol = 0.02;
constexpr double kBracketSlackNats = 0.3;
constexpr std::size_t kMinReplications = 200;
constexpr double kConvergenceFloorNats = 0.2;
constexpr double kPowerScale = 100.0;
constexpr double kHomogenizationLo = 0.95;
constexpr double kHomogenizationHi = 1.05;
constexpr std::size_t kMinBsCount = 10000;
constexpr double kLpBetaTol = 1e-6;
constexpr double kLpRateRelTol = 1e-9;
constexpr double kPrintedRelTol = 1e-9;
constexpr double kGainFloor = 1.0 - 1e-12;
constexpr double kLowDensityLimitTol = 1e-6;
constexpr double kHighDensityLimitTol = 1e-3;
constexpr double kPeakGainFloor = 1.2;
constexpr double kPaprTol = 1e-9;
constexpr double kPdfNormTol = 1e-9;
constexpr double kKsTol = 0.1;
constexpr std::size_t kMinCells = 10000;

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "MISS ") + what);
  }
  void note(const std::string& what) { details.push_back("     " + what); }
};

std::string fmt(double v, int digits = 6) {
  std::ostringstream s;
  s << std::setprecision(digits) << v;
  return s.str();
}

int failures = 0;

void report(int id, const std::string& name, const Outcome& o, double seconds) {
  std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << "  " << name << "  (" << fmt(seconds, 3)
            << " s)\n";
  for (const auto& d : o.details) std::cout << "      " << d << '\n';
  std::cout.flush();
  if (!o.pass) ++failures;
}

template <class F>
void run(int id, const std::string& name, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    f(o);
  } catch (const std::exception& e) {
    o.check(false, std::string("exception: ") + e.what());
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(id, name, o, s);
}

bool within_rel(double value, double expected, double tol) {
  return std::abs(value - expected) <= tol * std::abs(expected);
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return g;
}

// ---------------------------------------------------------------- criterion 1

struct TableRow {
  BuildingStats stats;
  double beta;
  double eta;
  double r2d;
  double r3d;
  bool beta_checked;
};

std::vector<TableRow> table_rows() {
  auto make = [](const char* name, double rho, double area, double kappa, double mu, double sigma, double eh) {
    BuildingStats s;
    s.region = name;
    s.avg_perimeter_m = rho;
    s.avg_area_m2 = area;
    s.coverage = kappa;
    s.floors = {mu, sigma};
    s.bs_height_m = eh;
    return s;
  };
  return {
      {make("Gangnam", 59.02, 218.60, 0.3477, 1.62, 0.27, 14.23), 0.073, 0.36, 17.77, 49.61, true},
      {make("Jongro", 39.29, 107.67, 0.4690, 0.69, 0.55, 8.12), 0.014, 0.22, 7.22, 33.33, false},
      {make("Yonsei", 51.99, 173.95, 0.2548, 1.10, 0.34, 11.14), 0.056, 0.13, 26.63, 198.76, true},
      {make("Manhattan", 73.78, 312.26, 0.4583, 3.32, 0.30, 101.00), 0.092, 0.12, 11.75, 98.11, true},
      {make("Chicago", 114.48, 886.46, 0.4202, 1.36, 1.23, 28.95), 0.045, 0.46, 25.88, 56.20, true},
  };
}

void criterion_table(Outcome& o) {
  for (const auto& row : table_rows()) {
    const std::string& n = row.stats.region;
    const double beta = blockage_beta(row.stats);
    const double r2d = los_distance(row.stats, LosMode::TwoD);
    const double r3d = los_distance(row.stats, LosMode::ThreeD, row.eta);
    if (row.beta_checked) {
      o.check(within_rel(beta, row.beta, kBetaRelTol), n + " beta " + fmt(beta) + " vs " + fmt(row.beta));
    } else {
      o.note(n + " beta " + fmt(beta) + " (tabulated " + fmt(row.beta) + " is a typo; validated via R_L 2D)");
    }
    o.check(within_rel(r2d, row.r2d, kRlos2dRelTol), n + " R_L 2D " + fmt(r2d) + " vs " + fmt(row.r2d));
    o.check(within_rel(r3d, row.r3d, kRlos3dRelTol), n + " R_L 3D " + fmt(r3d) + " vs " + fmt(row.r3d) +
                                                         " (rel " + fmt((r3d - row.r3d) / row.r3d, 3) + ")");
  }
}

// ------------------------------------------------------------- criteria 2, 3

SimConfig se_config(Tier tier, Direction dir, double lambda_hat) {
  SimConfig c;
  c.params.lambda_u = 0.01;
  c.params.alpha_mu = 4.0;
  c.params.alpha_m = 2.5;
  c.params.theta = kPi / 12.0;
  c.params.r_los_m = 10.0;
  c.params.lambda_mu = lambda_hat * c.params.lambda_u;
  c.params.lambda_m = lambda_hat * c.params.lambda_u;
  c.tier = tier;
  c.direction = dir;
  c.master_seed = 2024;
  c.replications = kMinReplications;
  return c;
}

// Grows the replication count until at least kMinReplications replications
// enter the mean (mmW points are often interference-free).
SEEstimate estimate_with_min_count(SimConfig c) {
  SEEstimate e = estimate_se(c);
  for (int round = 0; round < 6 && e.n < kMinReplications; ++round) {
    const double per_rep = std::max(1e-3, static_cast<double>(e.n) / static_cast<double>(c.replications));
    c.replications = static_cast<std::size_t>(std::ceil(1.1 * kMinReplications / per_rep));
    e = estimate_se(c);
  }
  return e;
}

struct SePoint {
  Tier tier;
  Direction dir;
  double lambda_hat;
  SEEstimate est;
  SEBounds bounds;
};

std::vector<SePoint> se_points;

void criterion_bracket(Outcome& o) {
  for (Tier tier : {Tier::MuW, Tier::MmW}) {
    for (double lh : {10.0, 100.0, 1000.0}) {
      for (Direction dir : {Direction::DL, Direction::UL}) {
        const SimConfig c = se_config(tier, dir, lh);
        const SEEstimate e = estimate_with_min_count(c);
        const SEBounds b = analytic_bounds(c);
        se_points.push_back({tier, dir, lh, e, b});
        const bool ok = e.n >= kMinReplications && e.mean >= b.lower - kBracketSlackNats &&
                        e.mean <= b.upper + kBracketSlackNats;
        o.check(ok, to_string(tier) + " " + to_string(dir) + " lambda_hat=" + fmt(lh) + ": MC " + fmt(e.mean, 5) +
                        " +- " + fmt(e.ci_half_width, 3) + " (n=" + std::to_string(e.n) + ", interference-free " +
                        std::to_string(e.interference_free) + ") vs [" + fmt(b.lower, 5) + ", " + fmt(b.upper, 5) +
                        "] +- " + fmt(kBracketSlackNats, 2));
      }
    }
  }
}

void criterion_convergence(Outcome& o) {
  for (Tier tier : {Tier::MuW, Tier::MmW}) {
    const SePoint* dl = nullptr;
    const SePoint* ul = nullptr;
    for (const auto& p : se_points) {
      if (p.tier == tier && p.lambda_hat == 1000.0) (p.dir == Direction::DL ? dl : ul) = &p;
    }
    if (!dl || !ul) {
      o.check(false, to_string(tier) + ": estimates missing");
      continue;
    }
    const double diff = std::abs(dl->est.mean - ul->est.mean);
    const double tol = std::max(kConvergenceFloorNats, dl->est.ci_half_width + ul->est.ci_half_width);
    o.check(diff <= tol, to_string(tier) + " |DL - UL| = " + fmt(diff, 4) + " <= " + fmt(tol, 4));
  }
}

// ---------------------------------------------------------------- criterion 4

bool bit_identical(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

void criterion_power(Outcome& o) {
  for (Tier tier : {Tier::MuW, Tier::MmW}) {
    for (Direction dir : {Direction::DL, Direction::UL}) {
      SimConfig c = se_config(tier, dir, 100.0);
      c.replications = 20;
      std::vector<double> base;
      estimate_se(c, &base);
      for (int which = 0; which < 2; ++which) {
        SimConfig s = c;
        TxPowers& p = s.params.powers;
        if (which == 0) {
          p.mmw_dl_w *= kPowerScale;
          p.mmw_ul_w *= kPowerScale;
        } else {
          p.muw_dl_w *= kPowerScale;
          p.muw_ul_w *= kPowerScale;
        }
        std::vector<double> scaled;
        estimate_se(s, &scaled);
        o.check(!base.empty() && bit_identical(base, scaled),
                to_string(tier) + " " + to_string(dir) + ": " + std::to_string(base.size()) +
                    " SIR samples with " + (which == 0 ? "mmW" : "uW") + " powers x" + fmt(kPowerScale));
      }
    }
  }
}

// ---------------------------------------------------------------- criterion 5

void criterion_homogenization(Outcome& o) {
  SimConfig c;
  c.params.lambda_u = 1e-4;
  c.params.lambda_mu = 1e-2;
  c.tier = Tier::MuW;
  c.direction = Direction::DL;
  c.replications = 20;
  c.master_seed = 2024;
  const HomogenizationReport r = validate_homogenization(c);
  o.check(r.bs_count >= kMinBsCount, "BS count " + std::to_string(r.bs_count));
  o.check(r.ratio >= kHomogenizationLo && r.ratio <= kHomogenizationHi,
          "active density / lambda_u = " + fmt(r.ratio, 5) + " (p_a lambda_hat = " +
              fmt(active_bs_probability(100.0) * 100.0, 5) + ")");
}

// ---------------------------------------------------------- criteria 6 to 9

struct SweepConfig {
  const char* name;
  double w_m;
  double zeta;
};

constexpr SweepConfig kSweepConfigs[] = {{"W_m=500MHz zeta=0.25", 500e6, 0.25}, {"W_m=1GHz zeta=0.5", 1e9, 0.5}};

struct City {
  const char* name;
  double r_los;
};

constexpr City kSweepCities[] = {{"Jongro", 33.33}, {"Gangnam", 49.61}};

NetworkParams sweep_network(double r_los) {
  NetworkParams p;
  p.lambda_u = 1e-4;
  p.lambda_mu = 2e-4;
  p.alpha_m = 2.5;
  p.alpha_mu = 4.0;
  p.r_los_m = r_los;
  return p;
}

SpectrumParams sweep_spectrum(double w_m, double zeta) {
  SpectrumParams s;
  s.w_m_hz = w_m;
  s.w_mu_hz = 20e6;
  s.w_m_ul_hz = 100e6;
  s.zeta = zeta;
  return s;
}

void criterion_lp(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& cfg : kSweepConfigs) {
    for (const auto& city : kSweepCities) {
      const SpectrumParams s = sweep_spectrum(cfg.w_m, cfg.zeta);
      const NetworkParams net = sweep_network(city.r_los);
      for (bool dec : {false, true}) {
        double worst_beta = 0.0;
        double worst_rate = 0.0;
        for (double lh : log_grid(1.05, 1e4, 200)) {
          const AllocationInputs in = allocation_inputs(net, lh);
          const AllocationResult cf = dec ? optimal_allocation_decoupled(in, s, AssumptionPolicy::Report)
                                          : optimal_allocation(in, s, AssumptionPolicy::Report);
          const LpResult lp = lp_oracle(in, s, dec);
          const double rd = rates(cf.allocation, s, spectral_efficiencies(in, dec)).r_d;
          worst_beta = std::max({worst_beta, std::abs(cf.allocation.beta_m - lp.allocation.beta_m),
                                 std::abs(cf.allocation.beta_mu - lp.allocation.beta_mu)});
          worst_rate = std::max(worst_rate, std::abs(rd - lp.r_d) / lp.r_d);
        }
        o.check(worst_beta <= kLpBetaTol && worst_rate <= kLpRateRelTol,
                std::string(cfg.name) + " " + city.name + (dec ? " decoupled" : " plain") + ": max |dbeta| " +
                    fmt(worst_beta, 3) + ", max rel dR_d " + fmt(worst_rate, 3));
      }
    }
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.check(s < 1.0, "sweep time " + fmt(s, 3) + " s < 1 s");
}

void criterion_printed(Outcome& o) {
  const SpectrumParams s = sweep_spectrum(500e6, 0.25);
  const NetworkParams gangnam = sweep_network(49.61);

  const AllocationInputs cl = allocation_inputs(gangnam, 1.2);
  const MaxDlRate a = max_dl_rate(cl, s, false, AssumptionPolicy::Report);
  o.check(a.optimum.label.region == Region::CL && within_rel(a.printed, a.r_d_star, kPrintedRelTol) &&
              within_rel(a.r_d_star, 7.729e7, 1e-3),
          "plain C_L lambda_hat_m=1.2 (p_L " + fmt(cl.p_l, 4) + "): substitution " + fmt(a.r_d_star, 8) +
              ", printed " + fmt(a.printed, 8));

  AllocationInputs ch;
  ch.lambda_hat_m = 100.0;
  ch.lambda_hat_mu = 2.0;
  ch.p_l = ch.p_l_decoupled = 0.6864;
  const MaxDlRate b = max_dl_rate(ch, s, false);
  o.check(b.optimum.label.region == Region::CH && within_rel(b.printed, b.r_d_star, kPrintedRelTol) &&
              within_rel(b.r_d_star, 9.3969e8, 1e-4),
          "plain C_H lambda_hat_m=100 (p_L 0.6864): substitution " + fmt(b.r_d_star, 8) + ", printed " +
              fmt(b.printed, 8));

  const AllocationInputs cl_dc = allocation_inputs(gangnam, 1.29);
  const MaxDlRate c = max_dl_rate(cl_dc, s, true, AssumptionPolicy::Report);
  o.check(c.optimum.label.region == Region::CL && !c.optimum.label.decoupling_region &&
              within_rel(c.printed, c.r_d_star, kPrintedRelTol),
          "decoupled C_L and not D lambda_hat_m=1.29: substitution " + fmt(c.r_d_star, 8) + ", printed " +
              fmt(c.printed, 8));

  const MaxDlRate d = max_dl_rate(ch, s, true);
  o.check(d.optimum.label.region == Region::CH && !d.optimum.label.decoupling_region &&
              within_rel(d.printed, d.r_d_star, kPrintedRelTol),
          "decoupled C_H and not D lambda_hat_m=100: substitution " + fmt(d.r_d_star, 8) + ", printed " +
              fmt(d.printed, 8));

  const AllocationInputs dp = allocation_inputs(gangnam, 1.25);
  const MaxDlRate e = max_dl_rate(dp, s, true, AssumptionPolicy::Report);
  o.check(e.optimum.label.decoupling_region && within_rel(e.r_d_star, 9.23e7, 1e-3),
          "decoupled D lambda_hat_m=1.25 (p_L " + fmt(dp.p_l, 4) + "): substitution " + fmt(e.r_d_star, 6));
  o.note("D branch as printed: " + fmt(e.printed, 6) + " (p_L reading), " +
         fmt(e.printed_literal.value_or(NAN), 6) + " (R_L literal); substitution is authoritative");
}

void criterion_structure(Outcome& o) {
  for (const auto& cfg : kSweepConfigs) {
    const SpectrumParams s = sweep_spectrum(cfg.w_m, cfg.zeta);
    for (const auto& city : kSweepCities) {
      const NetworkParams net = sweep_network(city.r_los);
      std::size_t sequential_miss = 0;
      std::size_t gain_miss = 0;
      std::size_t identity_miss = 0;
      std::size_t identity_points = 0;
      double min_gain = INFINITY;
      for (double lh : log_grid(1.05, 1e4, 200)) {
        const AllocationInputs in = allocation_inputs(net, lh);
        const AllocationResult plain = optimal_allocation(in, s, AssumptionPolicy::Report);
        const AllocationResult dec = optimal_allocation_decoupled(in, s, AssumptionPolicy::Report);
        if (plain.allocation.beta_m > 0.0 && plain.allocation.beta_mu != 1.0) ++sequential_miss;
        const double gain = rates(dec.allocation, s, spectral_efficiencies(in, true)).r_d /
                            rates(plain.allocation, s, spectral_efficiencies(in, false)).r_d;
        min_gain = std::min(min_gain, gain);
        if (!(gain >= kGainFloor)) ++gain_miss;
        if (dec.label.region == Region::CL && !dec.label.decoupling_region) {
          ++identity_points;
          if (std::abs(gain - 1.0) > 1e-12) ++identity_miss;
        }
      }
      const std::string tag = std::string(cfg.name) + " " + city.name + ": ";
      o.check(sequential_miss == 0, tag + "sequential allocation violations " + std::to_string(sequential_miss));
      o.check(gain_miss == 0, tag + "min gain " + fmt(min_gain, 10));
      o.check(identity_miss == 0, tag + "gain == 1 on C_L and not D at " + std::to_string(identity_points) +
                                      " points, violations " + std::to_string(identity_miss));
    }
    const AllocationResult near_one =
        optimal_allocation(allocation_inputs(sweep_network(33.33), 1.0 + 1e-9), s, AssumptionPolicy::Report);
    const double target_mu = s.zeta / (1.0 + s.zeta);
    o.check(std::abs(near_one.allocation.beta_mu - target_mu) <= kLowDensityLimitTol,
            std::string(cfg.name) + ": beta_mu(1+) " + fmt(near_one.allocation.beta_mu, 10) + " vs " +
                fmt(target_mu, 10));
    const AllocationResult far =
        optimal_allocation(allocation_inputs(sweep_network(33.33), 1e12), s, AssumptionPolicy::Report);
    const double bound = allocation_limits(s).max_beta_m;
    o.check(std::abs(far.allocation.beta_m - bound) <= kHighDensityLimitTol,
            std::string(cfg.name) + ": beta_m(1e12) " + fmt(far.allocation.beta_m, 8) + " vs bound " +
                fmt(bound, 8) + " (diff " + fmt(bound - far.allocation.beta_m, 3) + ")");
  }
}

void criterion_peak_gain(Outcome& o) {
  const City seoul[] = {{"Jongro", 33.33}, {"Gangnam", 49.61}, {"Yonsei", 198.76}};
  for (const auto& cfg : kSweepConfigs) {
    const SpectrumParams s = sweep_spectrum(cfg.w_m, cfg.zeta);
    double best = 0.0;
    for (const auto& city : seoul) {
      const NetworkParams net = sweep_network(city.r_los);
      double peak = 0.0;
      double at = 0.0;
      for (double lh : log_grid(1.05, 1e4, 200)) {
        const AllocationInputs in = allocation_inputs(net, lh);
        const double gain =
            rates(optimal_allocation_decoupled(in, s, AssumptionPolicy::Report).allocation, s,
                  spectral_efficiencies(in, true))
                .r_d /
            rates(optimal_allocation(in, s, AssumptionPolicy::Report).allocation, s, spectral_efficiencies(in, false))
                .r_d;
        if (gain > peak) {
          peak = gain;
          at = lh;
        }
      }
      best = std::max(best, peak);
      o.note(std::string(cfg.name) + " " + city.name + ": peak gain " + fmt(peak, 5) + " at lambda_hat_m " +
             fmt(at, 4));
    }
    if (cfg.w_m == 500e6) {
      o.check(best > kPeakGainFloor, std::string(cfg.name) + ": peak over Seoul regions " + fmt(best, 5) + " > " +
                                         fmt(kPeakGainFloor));
    }
  }
}

// --------------------------------------------------------------- criterion 10

void criterion_papr(Outcome& o) {
  const double f_s = 244.14e3;
  const double delta = 10.0;
  const double eps = 0.7;
  const UlBandwidth w = mmw_ul_bandwidth(f_s, delta, eps, BandwidthMode::ExactInversion, INFINITY);
  const double back = papr_outage(w.w_hz, f_s, delta);
  o.check(std::abs(back - eps) <= kPaprTol,
          "w* = " + fmt(w.w_hz, 8) + " Hz, papr_outage(w*) - eps = " + fmt(back - eps, 3));
  std::size_t violations = 0;
  double prev = -1.0;
  for (double x : log_grid(1e6, 1e10, 100)) {
    const double p = papr_outage(x, f_s, delta);
    if (!(p > prev)) ++violations;
    prev = p;
  }
  o.check(violations == 0, "strictly increasing on 100 log-spaced widths, violations " + std::to_string(violations));
  o.note("as-printed inversion gives " +
         fmt(mmw_ul_bandwidth(f_s, delta, eps, BandwidthMode::AsPrinted, INFINITY).w_hz, 6) + " Hz");
}

// --------------------------------------------------------------- criterion 11

void criterion_voronoi(Outcome& o) {
  const auto norm =
      integrate_adaptive([](double x) { return voronoi_cell_pdf(x, 1.0); }, 0.0, INFINITY, 1e-11, "cell pdf");
  o.check(std::abs(norm.value - 1.0) <= kPdfNormTol, "pdf integral " + fmt(norm.value, 15));
  const CellAreaSample cells = sample_cell_areas(2, 100.0, 400, 2024);
  o.check(cells.cells >= kMinCells, "cells " + std::to_string(cells.cells));
  const double ks = ks_distance(cells.areas, voronoi_cell_law(1.0));
  o.check(ks <= kKsTol, "KS vs Gamma(4.5, 3.5) = " + fmt(ks, 4) + " <= " + fmt(kKsTol));
  o.note("KS vs Gamma(3.5, 3.5) = " + fmt(ks_distance(cells.areas, voronoi_area_law(1.0)), 4));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  run(1, "building table reproduction", criterion_table);
  run(2, "analytic bounds bracket Monte Carlo", criterion_bracket);
  run(3, "DL/UL convergence", criterion_convergence);
  run(4, "power invariance", criterion_power);
  run(5, "homogenization", criterion_homogenization);
  run(6, "LP oracle equivalence", criterion_lp);
  run(7, "printed-formula cross-check", criterion_printed);
  run(8, "structural properties", criterion_structure);
  run(9, "decoupling gain magnitude", criterion_peak_gain);
  run(10, "PAPR inversion", criterion_papr);
  run(11, "cell-size law", criterion_voronoi);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << (11 - failures) << "/11 criteria passed in " << fmt(s, 4) << " s\n";
  return failures == 0 ? 0 : 1;
}
