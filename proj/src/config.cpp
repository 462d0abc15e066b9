#include "mmudn/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mmudn {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

const ConfigKey* find_key(const std::string& name) {
  const auto& schema = config_schema();
  const auto it = std::find_if(schema.begin(), schema.end(), [&](const ConfigKey& k) { return k.name == name; });
  return it == schema.end() ? nullptr : &*it;
}

}  // namespace

const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> schema = {
      // network
      {"lambda_m_per_m2", "1e-2", "mmW BS density"},
      {"lambda_mu_per_m2", "2e-4", "uW BS density"},
      {"lambda_u_per_m2", "1e-4", "user density"},
      {"alpha_m", "2.5", "mmW path-loss exponent"},
      {"alpha_mu", "4", "uW path-loss exponent"},
      {"theta_deg", "15", "mmW mainlobe beamwidth"},
      {"r_los_m", "10", "average LOS distance"},
      {"p_mmw_dl_w", "1", "mmW DL transmit power"},
      {"p_mmw_ul_w", "0.2", "mmW UL transmit power"},
      {"p_muw_dl_w", "1", "uW DL transmit power"},
      {"p_muw_ul_w", "0.2", "uW UL transmit power"},
      {"user_process", "ppp", "user point process (only ppp)"},
      // spectrum
      {"w_m_hz", "500e6", "mmW bandwidth"},
      {"w_mu_hz", "20e6", "uW bandwidth"},
      {"w_m_ul_source", "config", "config | as_printed | exact: origin of the mmW UL bandwidth"},
      {"w_m_ul_hz", "100e6", "mmW UL bandwidth when w_m_ul_source=config"},
      {"f_s_hz", "244.14e3", "subcarrier spacing"},
      {"papr_delta", "10", "PAPR threshold (linear)"},
      {"papr_epsilon", "0.7", "PAPR outage probability"},
      {"zeta", "0.25", "minimum UL/DL rate ratio"},
      // allocation sweep
      {"lambda_hat_m_min", "1.05", "allocation sweep start"},
      {"lambda_hat_m_max", "1e4", "allocation sweep end"},
      {"lambda_hat_m_points", "200", "allocation sweep points (log-spaced)"},
      {"decoupled_los", "mmw", "mmw | combined: density inside the decoupled UL LOS probability"},
      {"assumption_policy", "report", "report | enforce: handling of W_m*gamma_m <= W_mu*gamma_mu"},
      // simulation
      {"tier", "muw", "mmw | muw"},
      {"direction", "dl", "dl | ul"},
      {"decoupled", "false", "mmW UL received by mmW and uW BSs"},
      {"receiver", "inserted", "inserted | nearest | all"},
      {"lambda_hat", "", "tier BS-to-user density ratio; empty keeps the configured densities"},
      {"window_side_m", "0", "window side; 0 holds 1000 expected users"},
      {"wrap", "true", "torus metric"},
      {"replications", "200", "spatial replications"},
      {"fading_draws", "20", "fading draws per replication"},
      {"seed", "1", "master seed"},
      {"threads", "1", "worker threads; 0 uses all cores"},
      // analytic and sweep grids
      {"lambda_hat_grid", "10,100,1000", "density ratios for se and sweep"},
      {"links", "muw:dl,muw:ul,mmw:dl,mmw:ul", "tier:direction pairs for sweep"},
      {"se_unit", "nats", "nats | bits"},
      // blockage
      {"input_csv", "", "building statistics CSV"},
  };
  return schema;
}

Config::Config() {
  for (const auto& k : config_schema()) values_[k.name] = k.default_value;
}

void Config::set(const std::string& key, const std::string& value) {
  if (!find_key(key)) throw ConfigError(key, "unknown key");
  values_[key] = value;
}

void Config::load(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(line, source + ":" + std::to_string(line_no) + ": expected key=value");
    }
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path);
  load(in, path);
}

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError(assignment, "override must be key=value");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

const std::string& Config::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(key, "unknown key");
  return it->second;
}

double Config::get_double(const std::string& key) const {
  const std::string& v = raw(key);
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (v.empty() || used != v.size()) throw ConfigError(key, "expected a number, got '" + v + "'");
  return out;
}

std::uint64_t Config::get_uint(const std::string& key) const {
  const std::string& v = raw(key);
  std::size_t used = 0;
  unsigned long long out = 0;
  try {
    out = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (v.empty() || used != v.size() || v[0] == '-') {
    throw ConfigError(key, "expected a nonnegative integer, got '" + v + "'");
  }
  return out;
}

bool Config::get_bool(const std::string& key) const {
  const std::string& v = raw(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + v + "'");
}

std::string Config::get_choice(const std::string& key, const std::vector<std::string>& allowed) const {
  const std::string& v = raw(key);
  if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    throw ConfigError(key, "expected one of {" + list + "}, got '" + v + "'");
  }
  return v;
}

std::vector<std::string> Config::get_strings(const std::string& key) const {
  std::vector<std::string> out;
  std::stringstream ss(raw(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> Config::get_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : get_strings(key)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw ConfigError(key, "expected a number list, got '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> Config::resolved() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : config_schema()) out.emplace_back(k.name, values_.at(k.name));
  return out;
}

}  // namespace mmudn
