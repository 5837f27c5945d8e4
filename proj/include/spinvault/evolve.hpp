#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spinvault/errors.hpp"
#include "spinvault/krylov.hpp"
#include "spinvault/protocol.hpp"

namespace spinvault::evolve {

// Pure state on {|G>} + single-excitation sector (Phi_0..Phi_{m-1}).
struct SectorState {
    std::complex<double> g_amp{0.0, 0.0};
    Eigen::VectorXcd ex;

    double norm2() const { return std::norm(g_amp) + ex.squaredNorm(); }
    static SectorState bright(std::size_t m);
};

// Density operator on {|G>, Phi_0, ..., Phi_{m-1}}; index 0 is |G>.
struct DensityMatrix {
    Eigen::MatrixXcd rho;

    double trace() const { return rho.trace().real(); }
    void symmetrize() { rho = 0.5 * (rho + rho.adjoint()).eval(); }
    // Hermiticity/trace as soft checks, positivity asserted hard: an
    // eigenvalue below -pos_tol throws NumericalFailure with diagnostics.
    void check_physical(double trace_tol = 1e-8, double herm_tol = 1e-10,
                        double pos_tol = 1e-8) const;
    static DensityMatrix from_sector(const SectorState& psi);
};

// Exact exponential of one piecewise-constant segment.
struct SegmentPropagator {
    Eigen::MatrixXcd u;  // m x m, acts on ex amplitudes
    double duration = 0.0;
    double delta = 0.0;
};

// Real symmetric tridiagonal sector Hamiltonian: diag = [delta + alpha_0,
// alpha_1, ...], off-diag = beta. (alpha_0 is 0 for analytic chains.)
Eigen::MatrixXd segment_hamiltonian(const krylov::KrylovChain& chain, double delta);

// Shared propagator store keyed on (duration, delta). gamma > 0 produces the
// contraction exp(-i (H - i gamma/2 |Phi_0><Phi_0|) tau); `coupled = false`
// drops the photon-bright coupling (FreeSpins schedules). Safe for concurrent
// readers; insertion is serialized.
class PropagatorCache {
public:
    PropagatorCache(const krylov::KrylovChain& chain, double gamma, bool coupled = true);
    const SegmentPropagator& get(double duration, double delta);
    std::size_t size() const;

private:
    std::vector<double> diag_, offdiag_;
    double gamma_;
    mutable std::mutex mu_;
    std::map<std::pair<double, double>, SegmentPropagator> cache_;
};

struct TimedState {
    double time;
    SectorState state;
};

// gamma = 0 path: per-segment exponentials via eigendecomposition of the real
// symmetric tridiagonal Hamiltonian, cached per distinct (duration, delta).
// Emits samples_per_period states per period (t = kT + j T/spp), plus t = 0.
std::vector<TimedState> propagate_unitary(const krylov::KrylovChain& chain,
                                          const protocol::DetuningSchedule& schedule,
                                          const SectorState& psi0, long n_periods,
                                          int samples_per_period);

// -i[H, rho] + gamma (A rho A+ - 1/2 {A+A, rho}) with A = |G><Phi_0|.
DensityMatrix lindblad_rhs(const krylov::KrylovChain& chain, double delta,
                           double gamma, const DensityMatrix& rho);

struct IntegratorConfig {
    enum class Method {
        // closed-form per-segment maps: the decay cascade feeds only |G>, so
        // each constant segment evolves as R -> E R E+, rho_{G,ex} -> rho E+,
        // rho_GG by trace conservation, with E = exp(-i K tau)
        SegmentExact,
        // classic fixed-step RK4 on the full generator
        Rk4Fixed,
    };
    Method method = Method::SegmentExact;
    // Rk4Fixed only. 0 = automatic: min(shortest segment / 50, 0.1/Lambda)
    // with Lambda a spectral-radius bound, so off-resonant phases stay
    // resolved. Steps larger than shortest-segment/10 are rejected.
    double step = 0.0;
};

struct TimedDensity {
    double time;
    DensityMatrix rho;
};

std::vector<TimedDensity> propagate_lindblad(const krylov::KrylovChain& chain,
                                             const protocol::DetuningSchedule& schedule,
                                             double gamma, const DensityMatrix& rho0,
                                             long n_periods, int samples_per_period,
                                             const IntegratorConfig& cfg = {});

// Rank-1 fast path. For a pure initial state a|G> + |ex>, the excitation
// block evolves under H - i(gamma/2)|Phi_0><Phi_0| alone, |G> collects the
// lost norm, and the G-excitation coherence rides along with the amplitudes.
struct ReducedState {
    std::complex<double> g_amp;  // constant
    Eigen::VectorXcd ex;
    double p_g = 0.0;

    // <G| rho |Phi_p>
    Eigen::VectorXcd g_coherence() const { return g_amp * ex.conjugate(); }
    DensityMatrix to_density() const;
};

struct TimedReduced {
    double time;
    ReducedState state;
};

// `shared_cache`, when given, must have been built for the same chain, gamma
// and coupling flag; several runs may then reuse one propagator store
// concurrently.
std::vector<TimedReduced> propagate_reduced(const krylov::KrylovChain& chain,
                                            const protocol::DetuningSchedule& schedule,
                                            double gamma, const SectorState& psi0,
                                            long n_periods, int samples_per_period,
                                            PropagatorCache* shared_cache = nullptr);

// Time-stamped fidelity samples with the populations the trace CSV carries.
struct FidelityTrace {
    std::vector<double> time;
    std::vector<double> f_bright;
    std::vector<double> f_target;
    std::vector<double> p_g;
    std::vector<double> p_photon;
    std::vector<double> p_dark;
    double period = 0.0;
    std::string label;

    // subsample at integer multiples of the period (includes t = 0)
    FidelityTrace stroboscopic() const;
};

// Bright-state run: psi0 = Phi_1, f_target = f_bright.
FidelityTrace bright_trace(const krylov::KrylovChain& chain,
                           const protocol::DetuningSchedule& schedule, double gamma,
                           long n_periods, int samples_per_period);

}  // namespace spinvault::evolve
