#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <vector>

#include "spinvault/errors.hpp"

namespace spinvault::ensemble {

struct Spin {
    double omega;  // transition frequency (angular)
    double g;      // cavity coupling (angular)
};

enum class Kind { Explicit, GaussianParametric };

// Distribution of spin frequencies and couplings: an explicit list, or a
// parametric Gaussian (mean/width) carrying only the statistics used by the
// analytic Krylov chain.
struct EnsembleSpec {
    Kind kind = Kind::GaussianParametric;
    std::vector<Spin> spins;  // Explicit only
    double mean = 0.0;        // parametric omega_bar
    double width = 0.0;       // parametric sigma, >= 0 (0 = homogeneous)
    double g_eff = 0.0;       // parametric effective coupling
    std::size_t n_spins = 0;
    std::uint64_t rng_seed = 0;

    void validate() const;  // throws on invariant violation
};

struct EnsembleMoments {
    double omega_bar = 0.0;
    double g_eff = 0.0;
    double sigma = 0.0;
    double t_sigma = std::numeric_limits<double>::infinity();  // 2*pi/sigma
    double t_pi = 0.0;                                         // pi/g_eff
};

// Weighted ensemble statistics. For explicit specs:
//   g_eff^2  = sum g_j^2
//   omega_bar = sum g_j^2 omega_j / g_eff^2
//   sigma     = sqrt(sum g_j^2 (omega_j - omega_bar)^2) / g_eff
// sigma is the g-weighted standard deviation in frequency units, the quantity
// that sets the sqrt(p)*sigma chain couplings and T_sigma = 2*pi/sigma.
EnsembleMoments compute_moments(const EnsembleSpec& spec);

// n frequencies from Gaussian(mean, width), equal couplings g_eff/sqrt(n).
// Deterministic and bit-reproducible: uniform draw j is from a SplitMix64
// counter stream keyed on `seed`, mapped through the Wichura AS241 inverse
// normal CDF. Same seed, same spins, on any platform.
EnsembleSpec sample_explicit(double mean, double width, double g_eff,
                             std::size_t n, std::uint64_t seed);

// Deterministic discretization of the Gaussian: n equally spaced frequencies
// over mean ± span_sigmas*width with couplings g_j^2 proportional to the
// Gaussian density. Unlike a random sample, the weighted measure carries the
// distribution tails, so the Lanczos chain follows sqrt(p)*sigma far beyond
// the p ~ (support/2sigma)^2 ceiling of equal-weight samples.
EnsembleSpec gaussian_grid(double mean, double width, double g_eff,
                           std::size_t n, double span_sigmas = 8.0);

// Two-column CSV with header "omega,g".
EnsembleSpec load_spins_csv(const std::filesystem::path& path);
void save_spins_csv(const std::filesystem::path& path, const EnsembleSpec& spec);

namespace detail {
// SplitMix64 output for counter i under the given seed (counter-based stream).
std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t i);
// Uniform in (0,1), 53-bit resolution, never exactly 0 or 1.
double uniform_at(std::uint64_t seed, std::uint64_t i);
// Wichura's algorithm AS241 (PPND16), |error| < 1e-15 over (0,1).
double inverse_normal_cdf(double p);
}  // namespace detail

}  // namespace spinvault::ensemble
