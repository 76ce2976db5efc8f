#pragma once

#include <string>

#include "core/config.hpp"

namespace vplate {

/**
 * Batch experiment runners.  Each writes its CSV artifacts plus a
 * manifest (version + canonical config echo) into out_dir, creating the
 * directory if needed.  Problems surface as the library's typed
 * exceptions: ConfigError, StabilityError, GramDegenerateError,
 * std::runtime_error (io), std::invalid_argument.
 */
void cmd_resolvent(const ExperimentConfig& cfg, const std::string& out_dir);
void cmd_simulate(const ExperimentConfig& cfg, const std::string& out_dir);
void cmd_control(const ExperimentConfig& cfg, const std::string& out_dir, bool visco);
void cmd_diagnostics(const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace vplate
