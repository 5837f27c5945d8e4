#include "spinvault/qubit.hpp"

#include <cmath>
#include <future>
#include <numbers>

namespace spinvault::qubit {

using cd = std::complex<double>;

std::array<std::pair<std::string, LogicalQubit>, 6> pauli_eigenstates() {
    const double r = 1.0 / std::numbers::sqrt2;
    return {{
        {"z+", {0.0, 1.0}},
        {"z-", {1.0, 0.0}},
        {"x+", {r, r}},
        {"x-", {r, -r}},
        {"y+", {r, cd(0.0, r)}},
        {"y-", {r, cd(0.0, -r)}},
    }};
}

evolve::SectorState encode(const LogicalQubit& q, std::size_t m) {
    const double n2 = std::norm(q.alpha) + std::norm(q.beta);
    if (std::abs(n2 - 1.0) > 1e-12)
        throw NotNormalized("logical qubit norm^2 = " + std::to_string(n2));
    if (m < 2) throw InvalidArgument("sector needs m >= 2");
    evolve::SectorState s;
    s.g_amp = q.alpha;
    s.ex = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(m));
    s.ex[1] = q.beta;
    return s;
}

double retrieval_fidelity(const LogicalQubit& q, const evolve::DensityMatrix& rho,
                          double parity) {
    const Eigen::Index m1 = rho.rho.rows();
    Eigen::VectorXcd target = Eigen::VectorXcd::Zero(m1);
    target[0] = q.alpha;
    target[2] = parity * q.beta;  // sector index 2 = Phi_1
    return (target.adjoint() * rho.rho * target)(0, 0).real();
}

double pulse_parity(const krylov::KrylovChain& chain,
                    const protocol::DetuningSchedule& schedule, long completed_periods) {
    if (schedule.kind != protocol::Kind::PaperSymmetric) return 1.0;
    const long k = std::lround(chain.g_eff() * schedule.t_on() / std::numbers::pi);
    return ((k * completed_periods) % 2 == 0) ? 1.0 : -1.0;
}

namespace {

evolve::FidelityTrace qubit_trace(const krylov::KrylovChain& chain,
                                  const protocol::DetuningSchedule& schedule,
                                  double gamma, const LogicalQubit& q, long n_periods,
                                  int spp, bool parity_correction,
                                  evolve::PropagatorCache* cache) {
    const auto run = evolve::propagate_reduced(chain, schedule, gamma,
                                               encode(q, chain.m), n_periods, spp, cache);
    evolve::FidelityTrace tr;
    tr.period = schedule.period;
    for (const auto& [t, st] : run) {
        const long completed = static_cast<long>(std::floor(t / schedule.period + 1e-9));
        const double parity =
            parity_correction ? pulse_parity(chain, schedule, completed) : 1.0;
        const auto rho = st.to_density();
        tr.time.push_back(t);
        tr.f_target.push_back(retrieval_fidelity(q, rho, parity));
        tr.f_bright.push_back(rho.rho(2, 2).real());
        tr.p_g.push_back(st.p_g);
        tr.p_photon.push_back(std::norm(st.ex[0]));
        double dark = 0.0;
        for (Eigen::Index p = 2; p < st.ex.size(); ++p) dark += std::norm(st.ex[p]);
        tr.p_dark.push_back(dark);
    }
    return tr;
}

}  // namespace

std::map<std::string, PauliTraces> pauli_suite(const krylov::KrylovChain& chain,
                                               const protocol::DetuningSchedule& schedule,
                                               double gamma, long n_periods,
                                               int samples_per_period,
                                               bool parity_correction) {
    const auto unmod = protocol::unmodulated(schedule.period);
    const auto states = pauli_eigenstates();
    // one propagator store per variant, shared by all six states
    evolve::PropagatorCache mod_cache(chain, gamma, true);
    evolve::PropagatorCache unmod_cache(chain, gamma, true);
    std::array<std::future<PauliTraces>, 6> jobs;
    for (std::size_t i = 0; i < states.size(); ++i) {
        jobs[i] = std::async(std::launch::async, [&, i]() {
            PauliTraces out;
            out.modulated = qubit_trace(chain, schedule, gamma, states[i].second,
                                        n_periods, samples_per_period, parity_correction,
                                        &mod_cache);
            out.modulated.label = states[i].first + " modulated";
            out.unmodulated = qubit_trace(chain, unmod, gamma, states[i].second,
                                          n_periods, samples_per_period, false,
                                          &unmod_cache);
            out.unmodulated.label = states[i].first + " unmodulated";
            return out;
        });
    }
    std::map<std::string, PauliTraces> result;
    for (std::size_t i = 0; i < states.size(); ++i) result[states[i].first] = jobs[i].get();
    return result;
}

}  // namespace spinvault::qubit
