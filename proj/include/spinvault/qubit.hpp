#pragma once

#include <array>
#include <complex>
#include <map>
#include <string>

#include "spinvault/errors.hpp"
#include "spinvault/evolve.hpp"

namespace spinvault::qubit {

// Photonic qubit alpha|0>_c + beta|1>_c mapped onto {|G>, bright} after the
// (ideal, instantaneous) write-in swap.
struct LogicalQubit {
    std::complex<double> alpha;
    std::complex<double> beta;
};

// z+/z-/x+/x-/y+/y- in that order; z+ = (0,1) stores the bright state.
std::array<std::pair<std::string, LogicalQubit>, 6> pauli_eigenstates();

evolve::SectorState encode(const LogicalQubit& q, std::size_t m);

// <psi_L| rho |psi_L> with |psi_L> = alpha|G> + parity * beta |Phi_1>.
// parity carries the deterministic pi-pulse sign imprinted per period (+1 for
// the raw, uncorrected fidelity).
double retrieval_fidelity(const LogicalQubit& q, const evolve::DensityMatrix& rho,
                          double parity = 1.0);

struct PauliTraces {
    evolve::FidelityTrace modulated;
    evolve::FidelityTrace unmodulated;
};

// Encode each Pauli eigenstate, evolve it under the given schedule and under
// the unmodulated reference of equal period, and record retrieval fidelities
// at every sample time. With parity_correction the target compounds the known
// (-1)^(k * completed periods) pulse sign, k = round(g_eff t_on / pi); raw
// fidelities otherwise. The six states run concurrently over a shared
// propagator cache.
std::map<std::string, PauliTraces> pauli_suite(const krylov::KrylovChain& chain,
                                               const protocol::DetuningSchedule& schedule,
                                               double gamma, long n_periods,
                                               int samples_per_period,
                                               bool parity_correction = true);

// Parity sign after `completed_periods` periods of the schedule.
double pulse_parity(const krylov::KrylovChain& chain,
                    const protocol::DetuningSchedule& schedule, long completed_periods);

}  // namespace spinvault::qubit
