#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spinvault/ensemble.hpp"
#include "spinvault/errors.hpp"

namespace spinvault::krylov {

enum class Origin { AnalyticGaussian, Lanczos };

// Tridiagonal single-excitation Hamiltonian in the Krylov basis
// {Phi_0 = photon, Phi_1 = bright, Phi_2.. dark chain}, frame rotating at
// omega_bar. alpha holds the diagonal (alpha[0] is the detuning slot, kept 0
// here; Delta(t) is added by the propagators), beta the off-diagonal with
// beta[0] = g_eff and, for a Gaussian ensemble, beta[p] = sqrt(p)*sigma.
struct KrylovChain {
    std::size_t m = 0;
    std::vector<double> alpha;  // size m
    std::vector<double> beta;   // size m-1, all >= 0
    Origin origin = Origin::AnalyticGaussian;

    double g_eff() const { return beta.at(0); }
    // first dark coupling, i.e. sigma for a Gaussian chain (0 if m < 3)
    double sigma() const { return m >= 3 ? beta[1] : 0.0; }

    std::string to_json() const;
    static KrylovChain from_json(const std::string& text);
};

KrylovChain gaussian_chain(const ensemble::EnsembleMoments& moments, std::size_t m);

// Lanczos with full reorthogonalization on the exact (N+1)-dimensional
// Hamiltonian, started from the photon state; step one lands on the bright
// vector, so the run tridiagonalizes the spin detuning operator on the Krylov
// space of the bright state. The chain truncates early (m reduced) when the
// residual norm falls below 1e-12 * sigma (1e-12 * g_eff if sigma = 0).
KrylovChain lanczos_chain(const ensemble::EnsembleSpec& spec, std::size_t m);

// Arrowhead matrix of the Tavis-Cummings single-excitation block in the
// omega_bar frame: index 0 is the photon (diag = delta), index j couples to
// the photon with g_j and carries omega_j - omega_bar on the diagonal.
struct FullSpaceHamiltonian {
    std::size_t dim = 0;            // N+1
    std::vector<double> diag;       // size N+1
    std::vector<double> coupling;   // size N, g_j
    std::vector<double> bright;     // size N, g_j/g_eff, unit norm

    void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;
    // [lo, hi] enclosing all eigenvalues (diag range widened by g_eff)
    std::pair<double, double> spectral_bounds() const;
};

FullSpaceHamiltonian full_space_hamiltonian(const ensemble::EnsembleSpec& spec,
                                            double delta);

// <psi0| exp(-i H t) |psi0> for psi0 = bright state (photon amplitude 0), at
// the given times, by Chebyshev expansion of the propagator with arrowhead
// matvecs. Independent of any Krylov-chain machinery; this is the brute-force
// oracle for chain-truncation checks. Series truncated below 1e-14.
std::vector<std::complex<double>>
full_survival_amplitude(const FullSpaceHamiltonian& h, std::span<const double> times);

// Survival amplitude <Phi_1| exp(-i H_chain t) |Phi_1> of the chain (delta on
// the photon slot), via eigendecomposition of the tridiagonal matrix.
std::vector<std::complex<double>>
chain_survival_amplitude(const KrylovChain& chain, double delta,
                         std::span<const double> times);

}  // namespace spinvault::krylov
