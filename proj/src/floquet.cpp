#include "spinvault/floquet.hpp"

#include <cmath>

#include <json.hpp>

#include "spinvault/evolve.hpp"

namespace spinvault::floquet {

using cd = std::complex<double>;

namespace {

void require_paper(const protocol::DetuningSchedule& s, const char* who) {
    if (s.kind != protocol::Kind::PaperSymmetric)
        throw UnsupportedKind(std::string(who) + " needs a PaperSymmetric schedule");
}

// chain Hamiltonian without detuning; drop_coupling removes the photon-bright
// link (the "coupling switched off" Hamiltonian)
Eigen::MatrixXd chain_h(const krylov::KrylovChain& chain, bool drop_coupling) {
    Eigen::MatrixXd h = evolve::segment_hamiltonian(chain, 0.0);
    if (drop_coupling && chain.m >= 2) h(0, 1) = h(1, 0) = 0.0;
    return h;
}

nlohmann::json matrix_json(const Eigen::MatrixXcd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::string FloquetHamiltonian::to_json() const {
    nlohmann::json j;
    j["period"] = period;
    j["h0"] = matrix_json(h0);
    j["h1"] = matrix_json(h1);
    j["h_eff"] = matrix_json(h_eff);
    return j.dump();
}

Eigen::MatrixXcd floquet_h0(const krylov::KrylovChain& chain,
                            const protocol::DetuningSchedule& schedule) {
    require_paper(schedule, "floquet_h0");
    Eigen::MatrixXd h = chain_h(chain, false);
    const double kappa = chain.g_eff() * schedule.t_on() / schedule.period;
    h(0, 1) = h(1, 0) = kappa;
    return h.cast<cd>();
}

Eigen::MatrixXcd floquet_h1(const krylov::KrylovChain& chain,
                            const protocol::DetuningSchedule& schedule) {
    require_paper(schedule, "floquet_h1");
    const Eigen::Index m = static_cast<Eigen::Index>(chain.m);
    const double T = schedule.period;
    const double ton = schedule.t_on();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(m, m);
    if (m >= 3) {
        const double c = chain.g_eff() * chain.sigma() * ton * ton / (8.0 * T * T);
        h(0, 2) = cd(0.0, -c);
        h(2, 0) = cd(0.0, c);
    }
    return h;
}

FloquetHamiltonian floquet_effective(const krylov::KrylovChain& chain,
                                     const protocol::DetuningSchedule& schedule) {
    FloquetHamiltonian f;
    f.period = schedule.period;
    f.h0 = floquet_h0(chain, schedule);
    f.h1 = floquet_h1(chain, schedule);
    f.h_eff = f.h0 + f.period * f.h1;
    return f;
}

Eigen::MatrixXcd hermitian_propagator(const Eigen::MatrixXcd& h, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXcd phases =
        (cd(0.0, -t) * es.eigenvalues().cast<cd>()).array().exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double stroboscopic_fidelity(const Eigen::MatrixXcd& h, double period, long n,
                             Eigen::Index target) {
    if (n < 0) throw InvalidArgument("n must be >= 0");
    if (target < 0 || target >= h.rows()) throw OutOfRange("target index out of range");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXcd w = es.eigenvectors().row(target);
    cd amp = 0.0;
    for (Eigen::Index k = 0; k < w.size(); ++k)
        amp += std::norm(w[k]) *
               std::exp(cd(0.0, -es.eigenvalues()[k] * period * static_cast<double>(n)));
    return std::norm(amp);
}

Eigen::MatrixXcd magnus_first_order(const krylov::KrylovChain& chain,
                                    const protocol::DetuningSchedule& schedule) {
    require_paper(schedule, "magnus_first_order");
    const double T = schedule.period;
    const Eigen::MatrixXd a = schedule.t0() * chain_h(chain, true);
    const Eigen::MatrixXd b = schedule.t_on() * chain_h(chain, false);
    const Eigen::MatrixXd comm = a * b - b * a;  // antisymmetric
    return comm.cast<cd>() / cd(0.0, 2.0 * T * T);
}

double spectral_norm(const Eigen::MatrixXcd& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.adjoint() * a,
                                                       Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

MagnusError magnus_error(const krylov::KrylovChain& chain,
                         const protocol::DetuningSchedule& schedule) {
    require_paper(schedule, "magnus_error");
    const double T = schedule.period;
    const Eigen::MatrixXcd h_on = chain_h(chain, false).cast<cd>();
    const Eigen::MatrixXcd h_off = chain_h(chain, true).cast<cd>();
    // pulse-aligned frame: resonant pulse first, then the off window
    const Eigen::MatrixXcd u_exact = hermitian_propagator(h_off, schedule.t0()) *
                                     hermitian_propagator(h_on, schedule.t_on());
    const Eigen::MatrixXcd h0 = floquet_h0(chain, schedule);
    const Eigen::MatrixXcd h1 = magnus_first_order(chain, schedule);
    MagnusError e;
    e.err0 = spectral_norm(u_exact - hermitian_propagator(h0, T));
    e.err1 = spectral_norm(u_exact - hermitian_propagator(h0 + T * h1, T));
    return e;
}

}  // namespace spinvault::floquet
