#include <cmath>
#include <vector>

#include "doctest.h"
#include "mmudn/allocation.hpp"
#include "mmudn/errors.hpp"

using namespace mmudn;

namespace {

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

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return g;
}

// Dense grid search over the feasible set as an independent LP reference.
double grid_max_rd(const AllocationInputs& in, const SpectrumParams& s, bool decoupled) {
  const Gammas g = spectral_efficiencies(in, decoupled);
  double best = 0.0;
  const int n = 400;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const Allocation a{static_cast<double>(i) / n, static_cast<double>(j) / n};
      const RatePair r = rates(a, s, g);
      if (r.r_u >= s.zeta * r.r_d) best = std::max(best, r.r_d);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("rate model") {
  SpectrumParams s = sweep_spectrum(500e6, 0.25);
  const Gammas g{3.9513, 1.3863, 3.9513};
  const RatePair corner = rates({0.0, 0.0}, s, g);
  CHECK(corner.r_u == 0.0);
  CHECK(corner.r_d == doctest::Approx(500e6 * 3.9513 + 20e6 * 1.3863));
  CHECK(rates({1.0, 1.0}, s, g).r_d == 0.0);
  CHECK(rates({0.0, 0.5}, s, g).r_d == doctest::Approx(1.9757e9 + 1.3863e7).epsilon(1e-4));
}

TEST_CASE("decoupling region membership") {
  AllocationInputs in;
  in.lambda_hat_mu = 2.0;
  in.p_l = in.p_l_decoupled = 0.6;
  const SpectrumParams s = sweep_spectrum(500e6, 0.25);
  in.lambda_hat_m = 1.25;
  CHECK(region_classify(in, s, true).decoupling_region);
  in.lambda_hat_m = 1.3;
  CHECK_FALSE(region_classify(in, s, true).decoupling_region);
}

TEST_CASE("zeta = 0 is always C_L and allocates nothing to UL") {
  SpectrumParams s = sweep_spectrum(500e6, 0.0);
  const NetworkParams net = sweep_network(33.33);
  for (double lh : {1.1, 10.0, 1e4}) {
    const AllocationInputs in = allocation_inputs(net, lh);
    CHECK(region_classify(in, s, false).region == Region::CL);
    const AllocationResult r = optimal_allocation(in, s, AssumptionPolicy::Report);
    CHECK(r.allocation.beta_m == 0.0);
    CHECK(r.allocation.beta_mu == 0.0);
    const LpResult lp = lp_oracle(in, s, false);
    CHECK(lp.allocation.beta_m == 0.0);
    CHECK(lp.allocation.beta_mu == 0.0);
  }
}

TEST_CASE("C_L/C_H boundary by bisection") {
  const auto b = cl_boundary(sweep_network(33.33), sweep_spectrum(500e6, 0.25));
  REQUIRE(b);
  CHECK(*b == doctest::Approx(1.5).epsilon(0.1));
  CHECK(*b == doctest::Approx(1.5342).epsilon(1e-4));
  const NetworkParams net = sweep_network(33.33);
  const SpectrumParams s = sweep_spectrum(500e6, 0.25);
  CHECK(region_classify(allocation_inputs(net, *b * 0.99), s, false).region == Region::CL);
  CHECK(region_classify(allocation_inputs(net, *b * 1.01), s, false).region == Region::CH);
}

TEST_CASE("worked allocation points") {
  const SpectrumParams s = sweep_spectrum(500e6, 0.25);
  SUBCASE("C_H point") {
    AllocationInputs in;
    in.lambda_hat_m = 100.0;
    in.lambda_hat_mu = 2.0;
    in.p_l = in.p_l_decoupled = 0.6864;
    const AllocationResult r = optimal_allocation(in, s);
    CHECK(r.label.region == Region::CH);
    CHECK(r.allocation.beta_m == doctest::Approx(0.5244).epsilon(1e-3));
    CHECK(r.allocation.beta_mu == 1.0);
  }
  SUBCASE("D point") {
    const AllocationInputs in = allocation_inputs(sweep_network(49.61), 1.25);
    CHECK(in.p_l == doctest::Approx(0.6196).epsilon(1e-3));
    const AllocationResult r = optimal_allocation_decoupled(in, s, AssumptionPolicy::Report);
    CHECK(r.label.decoupling_region);
    CHECK(r.allocation.beta_m == doctest::Approx(0.2528).epsilon(1e-3));
    CHECK(r.allocation.beta_mu == 0.0);
    const LpResult lp = lp_oracle(in, s, true);
    CHECK(lp.allocation.beta_m == doctest::Approx(r.allocation.beta_m).epsilon(1e-9));
  }
}

TEST_CASE("maximized DL rate: substitution against the printed expressions") {
  const SpectrumParams s = sweep_spectrum(500e6, 0.25);
  const NetworkParams net = sweep_network(49.61);
  const AllocationInputs cl = allocation_inputs(net, 1.2);
  CHECK(cl.p_l == doctest::Approx(0.6046).epsilon(1e-3));
  const MaxDlRate r = max_dl_rate(cl, s, false, AssumptionPolicy::Report);
  CHECK(r.r_d_star == doctest::Approx(7.729e7).epsilon(1e-3));
  CHECK(r.printed == doctest::Approx(r.r_d_star).epsilon(1e-9));
  // With decoupling the same point lies in D (3.2 >= 1.2^5).
  CHECK(region_classify(cl, s, true).decoupling_region);
  const AllocationInputs cl_dc = allocation_inputs(net, 1.29);
  REQUIRE(region_classify(cl_dc, s, true).region == Region::CL);
  REQUIRE_FALSE(region_classify(cl_dc, s, true).decoupling_region);
  const MaxDlRate rdc = max_dl_rate(cl_dc, s, true, AssumptionPolicy::Report);
  CHECK(rdc.printed == doctest::Approx(rdc.r_d_star).epsilon(1e-9));
  AllocationInputs ch;
  ch.lambda_hat_m = 100.0;
  ch.lambda_hat_mu = 2.0;
  ch.p_l = ch.p_l_decoupled = 0.6864;
  const MaxDlRate h = max_dl_rate(ch, s, false);
  CHECK(h.r_d_star == doctest::Approx(9.3969e8).epsilon(1e-4));
  CHECK(h.printed == doctest::Approx(h.r_d_star).epsilon(1e-9));
  const MaxDlRate hd = max_dl_rate(ch, s, true);
  CHECK(hd.printed == doctest::Approx(hd.r_d_star).epsilon(1e-9));

  const MaxDlRate d = max_dl_rate(allocation_inputs(net, 1.25), s, true, AssumptionPolicy::Report);
  CHECK(d.r_d_star == doctest::Approx(9.23e7).epsilon(1e-3));
  CHECK(d.printed == doctest::Approx(3.64e7).epsilon(1e-2));
  REQUIRE(d.printed_literal);
  CHECK(*d.printed_literal == doctest::Approx(1.1414e9).epsilon(1e-3));
  CHECK(d.r_d_star == doctest::Approx(d.optimum.allocation.beta_m * s.w_m_ul_hz *
                                      spectral_efficiencies(allocation_inputs(net, 1.25), true).m_ul / s.zeta)
                          .epsilon(1e-12));
}

TEST_CASE("allocation limits") {
  SpectrumParams s = sweep_spectrum(500e6, 0.25);
  CHECK(allocation_limits(s).min_beta_mu == doctest::Approx(0.2));
  CHECK(allocation_limits(s).max_beta_m == doctest::Approx(1.0 / 1.8));
  s.zeta = 1.0;
  s.w_m_ul_hz = s.w_m_hz;
  CHECK(allocation_limits(s).max_beta_m == doctest::Approx(0.5));
  s.zeta = 0.0;
  CHECK(allocation_limits(s).max_beta_m == 0.0);
}

TEST_CASE("beta_mu tends to zeta / (1 + zeta) as lambda_hat_m -> 1+") {
  for (double zeta : {0.25, 0.5, 1.0}) {
    const SpectrumParams s = sweep_spectrum(500e6, zeta);
    const AllocationInputs in = allocation_inputs(sweep_network(33.33), 1.0 + 1e-9);
    const AllocationResult r = optimal_allocation(in, s, AssumptionPolicy::Report);
    CHECK(r.allocation.beta_mu == doctest::Approx(zeta / (1.0 + zeta)).epsilon(1e-6));
    CHECK_FALSE(r.mmw_dominates);
  }
}

TEST_CASE("dominance premise is enforced on request") {
  const SpectrumParams s = sweep_spectrum(500e6, 0.25);
  const AllocationInputs in = allocation_inputs(sweep_network(33.33), 1.01);
  CHECK_THROWS_AS(optimal_allocation(in, s, AssumptionPolicy::Enforce), AssumptionError);
  CHECK_NOTHROW(optimal_allocation(allocation_inputs(sweep_network(33.33), 100.0), s, AssumptionPolicy::Enforce));
}

TEST_CASE("PAPR outage and UL bandwidth") {
  const double f_s = 244.14e3;
  const UlBandwidth exact = mmw_ul_bandwidth(f_s, 10.0, 0.7, BandwidthMode::ExactInversion, 1e12);
  CHECK(std::abs(papr_outage(exact.w_hz, f_s, 10.0) - 0.7) <= 1e-9);
  CHECK(exact.w_hz == doctest::Approx(2.001e9).epsilon(1e-3));
  const UlBandwidth printed = mmw_ul_bandwidth(f_s, 10.0, 0.7, BandwidthMode::AsPrinted, 1e12);
  CHECK(printed.w_hz == doctest::Approx(4.659e9).epsilon(1e-3));
  const UlBandwidth capped = mmw_ul_bandwidth(f_s, 10.0, 0.7, BandwidthMode::ExactInversion, 500e6);
  CHECK(capped.clamped);
  CHECK(capped.w_hz == 500e6);
  const UlBandwidth near_one = mmw_ul_bandwidth(f_s, 10.0, 1.0 - 1e-15, BandwidthMode::ExactInversion, 500e6);
  CHECK(near_one.clamped);
  CHECK_THROWS_AS(mmw_ul_bandwidth(f_s, 10.0, 1.0, BandwidthMode::ExactInversion, 500e6), ParameterError);
  CHECK(papr_outage(0.0, f_s, 10.0) == 0.0);
  double prev = -1.0;
  for (double w : log_grid(1e6, 1e10, 100)) {
    const double p = papr_outage(w, f_s, 10.0);
    CHECK(p > prev);
    prev = p;
  }
}

TEST_CASE("closed forms agree with the LP oracle across the reference sweeps") {
  for (double r_los : {33.33, 49.61}) {
    for (auto [w_m, zeta] : {std::pair{500e6, 0.25}, std::pair{1e9, 0.5}}) {
      const SpectrumParams s = sweep_spectrum(w_m, zeta);
      const NetworkParams net = sweep_network(r_los);
      for (double lh : log_grid(1.05, 1e4, 200)) {
        const AllocationInputs in = allocation_inputs(net, lh);
        for (bool dec : {false, true}) {
          const AllocationResult cf = dec ? optimal_allocation_decoupled(in, s, AssumptionPolicy::Report)
                                          : optimal_allocation(in, s, AssumptionPolicy::Report);
          const LpResult lp = lp_oracle(in, s, dec);
          const double rd = rates(cf.allocation, s, spectral_efficiencies(in, dec)).r_d;
          INFO("R_L=" << r_los << " W_m=" << w_m << " lambda_hat_m=" << lh << " decoupled=" << dec);
          CHECK(std::abs(cf.allocation.beta_m - lp.allocation.beta_m) <= 1e-6);
          CHECK(std::abs(cf.allocation.beta_mu - lp.allocation.beta_mu) <= 1e-6);
          CHECK(std::abs(rd - lp.r_d) <= 1e-9 * lp.r_d);
        }
      }
    }
  }
}

TEST_CASE("LP oracle is no worse than a dense grid search and is feasible") {
  const SpectrumParams s = sweep_spectrum(500e6, 0.25);
  const NetworkParams net = sweep_network(49.61);
  for (double lh : {1.1, 1.25, 2.0, 30.0, 1000.0}) {
    const AllocationInputs in = allocation_inputs(net, lh);
    for (bool dec : {false, true}) {
      const LpResult lp = lp_oracle(in, s, dec);
      const RatePair r = rates(lp.allocation, s, spectral_efficiencies(in, dec));
      CHECK(r.r_u >= s.zeta * r.r_d * (1.0 - 1e-12));
      CHECK(lp.r_d >= grid_max_rd(in, s, dec) * (1.0 - 1e-12));
      CHECK(lp.allocation.beta_m >= 0.0);
      CHECK(lp.allocation.beta_m <= 1.0);
      CHECK(lp.allocation.beta_mu >= 0.0);
      CHECK(lp.allocation.beta_mu <= 1.0);
    }
  }
}

TEST_CASE("structural properties over the sweeps") {
  for (double r_los : {33.33, 49.61, 198.76}) {
    const SpectrumParams s = sweep_spectrum(500e6, 0.25);
    const NetworkParams net = sweep_network(r_los);
    for (double lh : log_grid(1.05, 1e4, 200)) {
      const AllocationInputs in = allocation_inputs(net, lh);
      const AllocationResult plain = optimal_allocation(in, s, AssumptionPolicy::Report);
      const AllocationResult dec = optimal_allocation_decoupled(in, s, AssumptionPolicy::Report);
      INFO("R_L=" << r_los << " lambda_hat_m=" << lh);
      if (plain.allocation.beta_m > 0.0) CHECK(plain.allocation.beta_mu == 1.0);
      const double rd_plain = rates(plain.allocation, s, spectral_efficiencies(in, false)).r_d;
      const double rd_dec = rates(dec.allocation, s, spectral_efficiencies(in, true)).r_d;
      CHECK(rd_dec / rd_plain >= 1.0 - 1e-12);
      // UL constraint is tight.
      const RatePair rp = rates(plain.allocation, s, spectral_efficiencies(in, false));
      CHECK(rp.r_u == doctest::Approx(s.zeta * rp.r_d).epsilon(1e-9));
      if (!dec.label.decoupling_region) {
        if (dec.label.region == Region::CL) {
          CHECK(dec.allocation.beta_m == plain.allocation.beta_m);
          CHECK(dec.allocation.beta_mu == plain.allocation.beta_mu);
          CHECK(rd_dec == doctest::Approx(rd_plain).epsilon(1e-12));
        } else {
          CHECK(dec.allocation.beta_m <= plain.allocation.beta_m + 1e-12);
        }
      } else {
        CHECK(dec.allocation.beta_mu == 0.0);
        CHECK(dec.allocation.beta_m > 0.0);
      }
    }
  }
}

TEST_CASE("allocation is continuous across the C_L/C_H boundary") {
  const NetworkParams net = sweep_network(33.33);
  const SpectrumParams s = sweep_spectrum(500e6, 0.25);
  const auto b = cl_boundary(net, s);
  REQUIRE(b);
  const auto below = optimal_allocation(allocation_inputs(net, *b * (1.0 - 1e-7)), s, AssumptionPolicy::Report);
  const auto above = optimal_allocation(allocation_inputs(net, *b * (1.0 + 1e-7)), s, AssumptionPolicy::Report);
  CHECK(below.allocation.beta_m == doctest::Approx(above.allocation.beta_m).epsilon(1e-5));
  CHECK(std::abs(below.allocation.beta_mu - above.allocation.beta_mu) < 1e-5);
}

TEST_CASE("invalid spectrum parameters") {
  SpectrumParams s = sweep_spectrum(500e6, 0.25);
  s.zeta = 1.5;
  CHECK_THROWS_AS(s.validate(), ParameterError);
  s = sweep_spectrum(10e6, 0.25);
  CHECK_THROWS_AS(s.validate(), ParameterError);
  AllocationInputs in;
  in.lambda_hat_m = 0.5;
  CHECK_THROWS_AS(in.validate(), ParameterError);
}
