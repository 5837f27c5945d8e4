#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "spinvault/errors.hpp"

namespace spinvault::config {

enum class Experiment {
    FreeDynamics,
    Unmodulated,
    Modulated,
    GridTon,
    GridT0,
    PauliSuite,
    OracleCheck,
};

Experiment experiment_from_string(const std::string& name);
std::string to_string(Experiment e);

// Dimensionless configuration: frequencies in units of sigma, times in units
// of 1/sigma (sigma = 1 internally). Defaults marked below; delta defaults to
// 400 * g_eff, deep enough in the dispersive regime that frequency modulation
// matches the coupling-switching limit.
struct RunConfig {
    Experiment experiment = Experiment::Modulated;
    double g_eff_over_sigma = 0.0;      // required
    double gamma_over_sigma = 0.0;      // default 0
    double delta_over_sigma = 0.0;      // default 400 * g_eff_over_sigma
    long m = 128;                       // Krylov truncation
    double t_on_over_tpi = 1.0;
    double t0_over_Tsigma = 0.1;
    long n_periods = 10;
    long samples_per_period = 20;
    long n_spins = 10000;               // OracleCheck ensemble size
    std::uint64_t seed = 1;
    std::filesystem::path output_dir = ".";

    // derived, filled by validate_config
    double t_pi() const;
    double t_sigma() const;  // 2*pi (sigma = 1)
    double t_on() const;
    double t0() const;
    double period() const;

    std::string to_json() const;  // resolved config, defaults included
};

// Parse and validate a flat JSON object. Unknown keys are a hard error;
// missing required keys and type mismatches are reported by key name.
RunConfig validate_config(const std::string& raw);

RunConfig load_config(const std::filesystem::path& path);

}  // namespace spinvault::config
