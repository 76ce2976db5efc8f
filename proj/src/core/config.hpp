#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/kernels.hpp"
#include "core/spectral.hpp"

namespace vplate {

/**
 * Everything one experiment run needs, parsed from a plain key=value
 * file.  Section headers like [problem] are allowed for grouping but
 * carry no meaning; keys are global and unknown keys are rejected.
 *
 * List values use bracket syntax: kernel = [[0.5, 1]], target_position =
 * [1, 0].  Coefficient lists shorter than `modes` are zero-padded.
 */
struct ExperimentConfig {
  std::string basis = "beam";  // beam | rectangle | synthetic
  std::size_t modes = 8;
  ControlCase control_case = ControlCase::B;
  double horizon = 1.0;
  std::size_t n_steps = 1000;
  std::vector<PronyTerm> kernel;  // empty = elastic
  double rect_a = 1.0;
  double rect_b = 1.0;
  std::size_t boundary_nodes = 64;  // edge quadrature (rectangle basis)
  std::uint64_t seed = 42;
  std::size_t probes = 0;  // 0 = default 2N
  std::vector<double> target_position;
  std::vector<double> target_velocity;
  std::vector<double> initial_position;
  std::vector<double> initial_velocity;
  std::vector<double> lambda;     // synthetic basis
  std::vector<double> psi_norms;  // synthetic basis
};

/// Parse one value into the named field; throws ConfigError naming the
/// key on any problem (unknown key, malformed value, bad range).
void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Canonical text of one field (the format apply_key accepts).
std::string config_get(const ExperimentConfig& cfg, const std::string& key);

/// Sorted list of every recognized key.
const std::vector<std::string>& config_keys();

/// Sorted `key = value` lines for the whole config; the manifest echo.
std::string canonical_echo(const ExperimentConfig& cfg);

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Cross-field checks deferred to run time (synthetic arrays, rectangle
/// dimensions); throws ConfigError.
void validate_config(const ExperimentConfig& cfg);

}  // namespace vplate
