#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "failsim/maintenance.hpp"
#include "failsim/model.hpp"
#include "failsim/reliability.hpp"

namespace failsim::cli
{

/// Malformed config text: bad YAML, unknown or missing keys, wrong value types.
class ConfigError : public std::runtime_error
{
  public:
    ConfigError(const std::string& path, int line, const std::string& message);

    const std::string& path() const { return path_; }
    int line() const { return line_; } ///< 1-based, 0 when unknown

  private:
    std::string path_;
    int line_;
};

/// Structurally valid config whose values break model invariants.
class ValidationFailure : public std::runtime_error
{
  public:
    explicit ValidationFailure(std::vector<Violation> violations);

    const std::vector<Violation>& violations() const { return violations_; }

  private:
    std::vector<Violation> violations_;
};

struct TimeGrid
{
    double t_min = 0.01;
    double t_max = 50.0;
    std::size_t t_points = 100;

    std::vector<double> points() const { return log_spaced(t_min, t_max, t_points); }
};

struct ExperimentConfig
{
    SystemSpec system;
    InitialAges ages;
    CostModel costs;
    SimConfig sim;      ///< t_grid already expanded from `grid`
    TimeGrid grid;
    TauGrid tau;
    std::string digest; ///< SHA-256 of the config bytes, hex
};

/**
 * Parses the YAML config schema:
 *
 *   system:     lambda0, eta, gamma, mode (poisson | facilitation)
 *   components: list of {name, H, D, alpha, beta, w_mean, w_std, y_mean, y_std, u}
 *   costs:      c_i, c_r, c_rho
 *   sim:        replications, max_shocks, path_steps, seed, truncation_tol   (optional)
 *   grids:      t_min, t_max, t_points, tau_min, tau_max, tau_points         (optional)
 *
 * y_mean = y_std = 0 means shocks leave no damage. Unknown keys, missing
 * required keys and non-numeric values raise ConfigError with the line;
 * model violations raise ValidationFailure carrying validate_system's list.
 */
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Runs validate_system plus the sim and tau-grid checks; throws ValidationFailure.
void validate_config(const ExperimentConfig& config);

} // namespace failsim::cli
