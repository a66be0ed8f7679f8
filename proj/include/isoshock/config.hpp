// Experiment configuration: flat "key = value" text with optional [section]
// headers. Keys are "section.name"; a bare name is accepted when it is unique.
#pragma once

#include <map>
#include <string>
#include <vector>

namespace isoshock {

struct ExperimentConfig {
  // background
  double rho_l = 1.0, u_l = 1.0, rho_r = 1.0, u_r = -1.0;
  // perturbation family
  double epsilon = 0.1, a = 0.5, b = 1.0, pi_amplitude = 0.5;
  // grid on [-lx, lx] x [-ly, ly]
  int nx = 400, ny = 400;
  double lx = 5.0, ly = 5.0;
  // run
  double cfl = 0.45;
  double t_max = 2.0;
  int stride = 0;  // solver steps per diagnostic sample; 0 picks dt_sample ~ dx
  double t0 = 1.0;
  double far_field_radius = 2.0;
  double rho_min = 0.0, rho_max = 0.0;  // density bounds; 0 disables
  // refinement ladder
  int levels = 3;
  double violation_factor = 2.0;
  // sweep
  std::vector<double> sweep_epsilons{0.2, 0.3, 0.4, 0.6};
  std::string threshold_kind = "relative";
  double threshold = 1000.0;
  std::string driver = "simulation";
  double riccati_C = 1.0, riccati_k = 0.5;
  int riccati_dimension = 2;
  double sweep_horizon = 0.0;  // 0 uses t_max
  // test function
  double testfn_r_max = 30.0, testfn_h = 1e-3;
  // output
  std::string output_dir = "out";

  bool operator==(const ExperimentConfig&) const = default;

  /// Throws ConfigError naming the offending key.
  void validate() const;
  /// As validate(), reporting the line on which each key was set.
  void validate_with_lines(const std::map<std::string, int>& lines) const;
};

/// Parses a config document. Absent keys keep their defaults; unknown keys,
/// malformed values and invariant violations raise ConfigError with the key
/// and line.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

/// FNV-1a hash of the canonical text, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace isoshock
