#include "mmudn/blockage.hpp"

#include <Eigen/Core>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>
#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <sstream>

#include "mmudn/errors.hpp"
#include "mmudn/quadrature.hpp"

namespace mmudn {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double lognormal_pdf(double x, double mu, double sigma) {
  if (x <= 0.0) return 0.0;
  const double z = (std::log(x) - mu) / sigma;
  return std::exp(-0.5 * z * z) / (x * sigma * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace

void BuildingStats::validate() const {
  auto fail = [&](const std::string& what) {
    throw ParameterError("building stats" + (region.empty() ? "" : " for " + region) + ": " + what);
  };
  if (!(avg_perimeter_m > 0.0)) fail("avg_perimeter_m must be positive");
  if (!(avg_area_m2 > 0.0)) fail("avg_area_m2 must be positive");
  if (!(coverage >= 0.0)) fail("coverage_fraction must be nonnegative");
  if (!(floors.sigma_ln > 0.0)) fail("lognormal_sigma must be positive");
  if (!std::isfinite(floors.mu_ln) && floors.mu_ln != -std::numeric_limits<double>::infinity()) {
    fail("lognormal_mu must be finite");
  }
  if (!(floor_height_m > 0.0)) fail("floor_height_m must be positive");
  if (!(bs_height_m > 0.0)) fail("bs_height_m must be positive");
}

double mean_building_height(const FloorCountModel& floors, double floor_height_m) {
  return floor_height_m * std::exp(floors.mu_ln + 0.5 * floors.sigma_ln * floors.sigma_ln);
}

double blockage_beta(const BuildingStats& stats) {
  if (stats.coverage >= 1.0) throw DomainError("coverage fraction >= 1 blocks every link");
  stats.validate();
  return -2.0 * stats.avg_perimeter_m * std::log1p(-stats.coverage) / (std::numbers::pi * stats.avg_area_m2);
}

double height_fraction_eta(const BuildingStats& stats) {
  stats.validate();
  const double mu = stats.floors.mu_ln;
  const double sigma = stats.floors.sigma_ln;
  auto cdf = [&](double s) {
    const double h = (1.0 - s) * stats.bs_height_m;
    if (h <= 0.0) return 0.0;
    return normal_cdf((std::log(h / stats.floor_height_m) - mu) / sigma);
  };
  return std::clamp(integrate_adaptive(cdf, 0.0, 1.0, 1e-8, "height fraction eta").value, 0.0, 1.0);
}

double los_distance(const BuildingStats& stats, LosMode mode, std::optional<double> eta_override) {
  const double beta = blockage_beta(stats);
  double eta = 1.0;
  if (mode == LosMode::ThreeD) {
    eta = eta_override ? *eta_override : height_fraction_eta(stats);
    if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("eta must lie in (0, 1]");
  }
  if (beta == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * (1.0 - stats.coverage) / (beta * eta);
}

BlockageParams blockage_params(const BuildingStats& stats, std::optional<double> eta_override) {
  BlockageParams p;
  p.beta = blockage_beta(stats);
  p.eta = eta_override ? *eta_override : height_fraction_eta(stats);
  p.r_los_2d_m = los_distance(stats, LosMode::TwoD);
  p.r_los_3d_m = los_distance(stats, LosMode::ThreeD, p.eta);
  return p;
}

namespace {

struct LognormalResidual {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  std::vector<FloorBin> bins;

  explicit LognormalResidual(std::vector<FloorBin> b) : bins(std::move(b)) {}
  int inputs() const { return 2; }
  int values() const { return static_cast<int>(bins.size()); }

  // x = (mu, log sigma)
  int operator()(const InputType& x, ValueType& fvec) const {
    const double sigma = std::exp(x[1]);
    for (std::size_t i = 0; i < bins.size(); ++i) {
      fvec[static_cast<Eigen::Index>(i)] = lognormal_pdf(bins[i].floors, x[0], sigma) - bins[i].frequency;
    }
    return 0;
  }
};

}  // namespace

LognormalFit fit_floor_lognormal(std::span<const FloorBin> histogram) {
  std::vector<FloorBin> bins(histogram.begin(), histogram.end());
  double total = 0.0;
  std::size_t nonzero = 0;
  for (const auto& b : bins) {
    if (!(b.floors > 0.0) || !(b.frequency >= 0.0)) {
      throw ParameterError("histogram bins need positive floor counts and nonnegative frequencies");
    }
    total += b.frequency;
    if (b.frequency > 0.0) ++nonzero;
  }
  if (nonzero < 3) throw NumericError("lognormal fit needs at least 3 nonzero bins, got " + std::to_string(nonzero));
  for (auto& b : bins) b.frequency /= total;

  // Moment estimate on log floor counts as the starting point.
  double m = 0.0;
  for (const auto& b : bins) m += b.frequency * std::log(b.floors);
  double v = 0.0;
  for (const auto& b : bins) v += b.frequency * std::pow(std::log(b.floors) - m, 2);
  Eigen::VectorXd x(2);
  x << m, std::log(std::max(std::sqrt(v), 1e-3));

  LognormalResidual functor(bins);
  Eigen::NumericalDiff<LognormalResidual> numdiff(functor);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<LognormalResidual>> lm(numdiff);
  lm.parameters.xtol = 1e-12;
  lm.parameters.ftol = 1e-14;
  lm.parameters.maxfev = 2000;
  const auto status = lm.minimize(x);
  if (status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters || !x.allFinite()) {
    throw NumericError("lognormal fit failed to converge");
  }

  Eigen::VectorXd r(static_cast<Eigen::Index>(bins.size()));
  functor(x, r);
  return {x[0], std::exp(x[1]), std::sqrt(r.squaredNorm() / static_cast<double>(bins.size()))};
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& cell, const std::string& column, std::size_t line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != cell.size()) {
    throw ParameterError("line " + std::to_string(line_no) + ": column " + column + " is not a number: '" +
                         cell + "'");
  }
  return v;
}

}  // namespace

std::vector<BuildingRecord> read_building_csv(std::istream& in) {
  static const std::vector<std::string> required = {
      "region",          "avg_perimeter_m", "avg_area_m2",    "coverage_fraction",
      "lognormal_mu",    "lognormal_sigma", "floor_height_m", "bs_height_m"};
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    header = split_csv_line(line);
    break;
  }
  if (header.size() < required.size() || !std::equal(required.begin(), required.end(), header.begin())) {
    throw ParameterError("building CSV header must start with region,avg_perimeter_m,avg_area_m2,"
                         "coverage_fraction,lognormal_mu,lognormal_sigma,floor_height_m,bs_height_m");
  }
  const bool has_eta = header.size() > required.size() && header[required.size()] == "eta_override";

  std::vector<BuildingRecord> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() < required.size()) {
      throw ParameterError("line " + std::to_string(line_no) + ": expected " + std::to_string(required.size()) +
                           " columns");
    }
    BuildingRecord rec;
    auto& s = rec.stats;
    s.region = cells[0];
    s.avg_perimeter_m = parse_number(cells[1], required[1], line_no);
    s.avg_area_m2 = parse_number(cells[2], required[2], line_no);
    s.coverage = parse_number(cells[3], required[3], line_no);
    s.floors.mu_ln = parse_number(cells[4], required[4], line_no);
    s.floors.sigma_ln = parse_number(cells[5], required[5], line_no);
    s.floor_height_m = cells[6].empty() ? 3.0 : parse_number(cells[6], required[6], line_no);
    s.bs_height_m = cells[7].empty() ? mean_building_height(s.floors, s.floor_height_m)
                                     : parse_number(cells[7], required[7], line_no);
    if (has_eta && cells.size() > required.size() && !cells[required.size()].empty()) {
      rec.eta_override = parse_number(cells[required.size()], "eta_override", line_no);
    }
    s.validate();
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace mmudn
