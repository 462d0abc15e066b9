#pragma once

#include <string>
#include <vector>

#include "mmudn/allocation.hpp"
#include "mmudn/config.hpp"
#include "mmudn/simulator.hpp"
#include "mmudn/table.hpp"

namespace mmudn {

NetworkParams network_from(const Config& config);
/// Spectrum with the mmW UL bandwidth resolved from w_m_ul_source;
/// clamping notes are appended to `warnings`.
SpectrumParams spectrum_from(const Config& config, std::vector<std::string>* warnings = nullptr);
SimConfig sim_config_from(const Config& config);

const std::vector<std::string>& command_names();

/// Runs one command and returns its output table. Throws ConfigError for
/// bad keys or values; module errors propagate unchanged.
Table run_command(const std::string& command, const Config& config);

}  // namespace mmudn
