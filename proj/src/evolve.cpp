#include "spinvault/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace spinvault::evolve {

using cd = std::complex<double>;

SectorState SectorState::bright(std::size_t m) {
    SectorState s;
    s.g_amp = 0.0;
    s.ex = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(m));
    s.ex[1] = 1.0;
    return s;
}

DensityMatrix DensityMatrix::from_sector(const SectorState& psi) {
    const Eigen::Index m = psi.ex.size();
    DensityMatrix d;
    d.rho = Eigen::MatrixXcd::Zero(m + 1, m + 1);
    d.rho(0, 0) = std::norm(psi.g_amp);
    d.rho.block(1, 1, m, m) = psi.ex * psi.ex.adjoint();
    d.rho.block(1, 0, m, 1) = psi.ex * std::conj(psi.g_amp);
    d.rho.block(0, 1, 1, m) = psi.g_amp * psi.ex.adjoint();
    return d;
}

void DensityMatrix::check_physical(double trace_tol, double herm_tol,
                                   double pos_tol) const {
    const double tr = trace();
    if (std::abs(tr - 1.0) > trace_tol)
        throw NumericalFailure("density matrix trace " + std::to_string(tr) +
                               " deviates from 1 beyond tolerance");
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm > herm_tol)
        throw NumericalFailure("density matrix non-Hermitian by " + std::to_string(herm));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    const double lam_min = es.eigenvalues().minCoeff();
    if (lam_min < -pos_tol) {
        std::ostringstream msg;
        msg << "density matrix has negative eigenvalue " << lam_min
            << " (trace " << tr << ", dim " << rho.rows() << ")";
        throw NumericalFailure(msg.str());
    }
}

Eigen::MatrixXd segment_hamiltonian(const krylov::KrylovChain& chain, double delta) {
    const Eigen::Index m = static_cast<Eigen::Index>(chain.m);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) h(i, i) = chain.alpha[static_cast<std::size_t>(i)];
    h(0, 0) += delta;
    for (Eigen::Index i = 0; i + 1 < m; ++i)
        h(i, i + 1) = h(i + 1, i) = chain.beta[static_cast<std::size_t>(i)];
    return h;
}

PropagatorCache::PropagatorCache(const krylov::KrylovChain& chain, double gamma,
                                 bool coupled)
    : diag_(chain.alpha), offdiag_(chain.beta), gamma_(gamma) {
    if (!coupled && !offdiag_.empty()) offdiag_[0] = 0.0;
}

std::size_t PropagatorCache::size() const {
    std::lock_guard lock(mu_);
    return cache_.size();
}

const SegmentPropagator& PropagatorCache::get(double duration, double delta) {
    const auto key = std::make_pair(duration, delta);
    {
        std::lock_guard lock(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    const Eigen::Index m = static_cast<Eigen::Index>(diag_.size());
    SegmentPropagator prop;
    prop.duration = duration;
    prop.delta = delta;
    if (gamma_ == 0.0) {
        Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(diag_.data(), m);
        d[0] += delta;
        Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(offdiag_.data(), m - 1);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(d, e);
        const Eigen::VectorXcd phases =
            (cd(0.0, -duration) * es.eigenvalues().cast<cd>()).array().exp();
        prop.u = es.eigenvectors().cast<cd>() * phases.asDiagonal() *
                 es.eigenvectors().transpose().cast<cd>();
    } else {
        Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(m, m);
        for (Eigen::Index i = 0; i < m; ++i) k(i, i) = diag_[static_cast<std::size_t>(i)];
        k(0, 0) += cd(delta, -0.5 * gamma_);
        for (Eigen::Index i = 0; i + 1 < m; ++i)
            k(i, i + 1) = k(i + 1, i) = offdiag_[static_cast<std::size_t>(i)];
        prop.u = (cd(0.0, -duration) * k).exp();
    }
    std::lock_guard lock(mu_);
    auto [it, inserted] = cache_.emplace(key, std::move(prop));
    (void)inserted;  // a racing builder may have beaten us; keep the first
    return it->second;
}

namespace {

// One period decomposed into propagation gaps with sample points in between.
struct PeriodPlan {
    struct Gap {
        double duration;
        double delta;
        bool emit_after;   // sample point right after this gap
        double offset;     // time from period start after this gap
    };
    std::vector<Gap> gaps;
};

PeriodPlan plan_period(const protocol::DetuningSchedule& schedule,
                       int samples_per_period) {
    schedule.validate();
    if (samples_per_period < 1)
        throw InvalidArgument("samples_per_period must be >= 1");
    const double T = schedule.period;
    const double tol = 1e-12 * T;

    std::vector<double> events;
    double t = 0.0;
    for (const auto& seg : schedule.segments) {
        t += seg.duration;
        events.push_back(t);
    }
    for (int j = 1; j <= samples_per_period; ++j)
        events.push_back(T * static_cast<double>(j) / samples_per_period);
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end(),
                             [tol](double a, double b) { return std::abs(a - b) < tol; }),
                 events.end());

    PeriodPlan plan;
    double prev = 0.0;
    std::size_t seg_idx = 0;
    double seg_end = schedule.segments[0].duration;
    for (double ev : events) {
        while (ev > seg_end + tol && seg_idx + 1 < schedule.segments.size()) {
            ++seg_idx;
            seg_end += schedule.segments[seg_idx].duration;
        }
        const double sample_gap = T / samples_per_period;
        const bool emit =
            std::abs(std::remainder(ev, sample_gap)) < tol || std::abs(ev - T) < tol;
        plan.gaps.push_back({ev - prev, schedule.segments[seg_idx].delta, emit, ev});
        prev = ev;
    }
    return plan;
}

bool is_free(const protocol::DetuningSchedule& s) {
    return s.kind == protocol::Kind::FreeSpins;
}

}  // namespace

std::vector<TimedState> propagate_unitary(const krylov::KrylovChain& chain,
                                          const protocol::DetuningSchedule& schedule,
                                          const SectorState& psi0, long n_periods,
                                          int samples_per_period) {
    if (psi0.ex.size() != static_cast<Eigen::Index>(chain.m))
        throw InvalidArgument("state dimension does not match chain");
    PropagatorCache cache(chain, 0.0, !is_free(schedule));
    const auto plan = plan_period(schedule, samples_per_period);

    std::vector<TimedState> out;
    out.reserve(static_cast<std::size_t>(n_periods) * samples_per_period + 1);
    SectorState psi = psi0;
    out.push_back({0.0, psi});
    for (long k = 0; k < n_periods; ++k) {
        const double t_base = schedule.period * static_cast<double>(k);
        for (const auto& gap : plan.gaps) {
            psi.ex = cache.get(gap.duration, gap.delta).u * psi.ex;
            if (gap.emit_after) out.push_back({t_base + gap.offset, psi});
        }
    }
    return out;
}

DensityMatrix lindblad_rhs(const krylov::KrylovChain& chain, double delta,
                           double gamma, const DensityMatrix& rho) {
    const Eigen::Index m = static_cast<Eigen::Index>(chain.m);
    if (rho.rho.rows() != m + 1)
        throw InvalidArgument("density matrix dimension does not match chain");
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(m + 1, m + 1);
    h.block(1, 1, m, m) = segment_hamiltonian(chain, delta).cast<cd>();
    DensityMatrix out;
    out.rho = cd(0.0, -1.0) * (h * rho.rho - rho.rho * h);
    if (gamma != 0.0) {
        // A = |G><Phi_0|: refill G from the photon population, drain row/col 1
        out.rho(0, 0) += gamma * rho.rho(1, 1);
        out.rho.row(1) -= 0.5 * gamma * rho.rho.row(1);
        out.rho.col(1) -= 0.5 * gamma * rho.rho.col(1);
    }
    return out;
}

namespace {

// tridiagonal (real) times dense (complex): y = H x, H from (diag, offdiag)
void tridiag_left(const std::vector<double>& d, const std::vector<double>& e,
                  const Eigen::MatrixXcd& x, Eigen::MatrixXcd& y) {
    const Eigen::Index m = x.rows();
    for (Eigen::Index i = 0; i < m; ++i) {
        y.row(i) = d[static_cast<std::size_t>(i)] * x.row(i);
        if (i > 0) y.row(i) += e[static_cast<std::size_t>(i - 1)] * x.row(i - 1);
        if (i + 1 < m) y.row(i) += e[static_cast<std::size_t>(i)] * x.row(i + 1);
    }
}

struct Rk4Workspace {
    Eigen::MatrixXcd k1, k2, k3, k4, tmp, hx;
};

// RHS on the (m+1) sector matrix with H given as tridiagonal data on the
// excitation block (index 0 of rho is |G>, H|G> = 0).
void rhs_structured(const std::vector<double>& d, const std::vector<double>& e,
                    double gamma, const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out,
                    Eigen::MatrixXcd& scratch) {
    const Eigen::Index m1 = rho.rows();
    const Eigen::Index m = m1 - 1;
    out.setZero(m1, m1);
    // -i H rho (excitation rows only)
    scratch.resize(m, m1);
    tridiag_left(d, e, rho.bottomRows(m), scratch);
    out.bottomRows(m) = cd(0.0, -1.0) * scratch;
    // +i rho H  == (-i H rho^+)^+
    scratch.resize(m, m1);
    tridiag_left(d, e, rho.adjoint().eval().bottomRows(m), scratch);
    out.rightCols(m) += (cd(0.0, -1.0) * scratch).adjoint();
    if (gamma != 0.0) {
        out(0, 0) += gamma * rho(1, 1);
        out.row(1) -= 0.5 * gamma * rho.row(1);
        out.col(1) -= 0.5 * gamma * rho.col(1);
    }
}

double spectral_radius_bound(const std::vector<double>& d, const std::vector<double>& e,
                             double delta) {
    double b = 0.0;
    const std::size_t m = d.size();
    for (std::size_t i = 0; i < m; ++i) {
        double row = std::abs(d[i] + (i == 0 ? delta : 0.0));
        if (i > 0) row += std::abs(e[i - 1]);
        if (i + 1 < m) row += std::abs(e[i]);
        b = std::max(b, row);
    }
    return b;
}

}  // namespace

std::vector<TimedDensity> propagate_lindblad(const krylov::KrylovChain& chain,
                                             const protocol::DetuningSchedule& schedule,
                                             double gamma, const DensityMatrix& rho0,
                                             long n_periods, int samples_per_period,
                                             const IntegratorConfig& cfg) {
    const Eigen::Index m = static_cast<Eigen::Index>(chain.m);
    if (rho0.rho.rows() != m + 1 || rho0.rho.cols() != m + 1)
        throw InvalidArgument("density matrix dimension does not match chain");
    if (gamma < 0.0) throw InvalidArgument("gamma must be >= 0");
    const auto plan = plan_period(schedule, samples_per_period);
    const bool coupled = !is_free(schedule);

    std::vector<TimedDensity> out;
    out.reserve(static_cast<std::size_t>(n_periods) * samples_per_period + 1);
    DensityMatrix rho = rho0;
    rho.symmetrize();
    out.push_back({0.0, rho});

    if (cfg.method == IntegratorConfig::Method::SegmentExact) {
        PropagatorCache cache(chain, gamma, coupled);
        for (long k = 0; k < n_periods; ++k) {
            const double t_base = schedule.period * static_cast<double>(k);
            for (const auto& gap : plan.gaps) {
                const Eigen::MatrixXcd& e = cache.get(gap.duration, gap.delta).u;
                const double tr_before = rho.rho.block(1, 1, m, m).trace().real();
                rho.rho.block(1, 1, m, m) =
                    e * rho.rho.block(1, 1, m, m) * e.adjoint();
                rho.rho.block(1, 0, m, 1) = e * rho.rho.block(1, 0, m, 1);
                rho.rho.block(0, 1, 1, m) = rho.rho.block(1, 0, m, 1).adjoint();
                rho.rho(0, 0) +=
                    tr_before - rho.rho.block(1, 1, m, m).trace().real();
                if (gap.emit_after) {
                    rho.symmetrize();
                    out.push_back({t_base + gap.offset, rho});
                }
            }
        }
        return out;
    }

    // fixed-step RK4
    std::vector<double> dvec = chain.alpha;
    std::vector<double> evec = chain.beta;
    if (!coupled && !evec.empty()) evec[0] = 0.0;
    const double min_seg = schedule.min_duration();
    if (cfg.step > min_seg / 10.0)
        throw StepTooLarge("RK4 step exceeds shortest segment / 10");

    Rk4Workspace ws;
    Eigen::MatrixXcd scratch;
    for (long k = 0; k < n_periods; ++k) {
        const double t_base = schedule.period * static_cast<double>(k);
        for (const auto& gap : plan.gaps) {
            std::vector<double> dseg = dvec;
            dseg[0] += gap.delta;
            double h = cfg.step;
            if (h <= 0.0) {
                const double lam =
                    spectral_radius_bound(dvec, evec, gap.delta) + gamma + 1e-12;
                h = std::min(min_seg / 50.0, 0.05 / lam);
            }
            const long nsteps = std::max<long>(1, static_cast<long>(std::ceil(gap.duration / h)));
            const double hh = gap.duration / static_cast<double>(nsteps);
            for (long s = 0; s < nsteps; ++s) {
                rhs_structured(dseg, evec, gamma, rho.rho, ws.k1, scratch);
                ws.tmp = rho.rho + 0.5 * hh * ws.k1;
                rhs_structured(dseg, evec, gamma, ws.tmp, ws.k2, scratch);
                ws.tmp = rho.rho + 0.5 * hh * ws.k2;
                rhs_structured(dseg, evec, gamma, ws.tmp, ws.k3, scratch);
                ws.tmp = rho.rho + hh * ws.k3;
                rhs_structured(dseg, evec, gamma, ws.tmp, ws.k4, scratch);
                rho.rho += (hh / 6.0) * (ws.k1 + 2.0 * ws.k2 + 2.0 * ws.k3 + ws.k4);
                rho.symmetrize();
            }
            if (gap.emit_after) out.push_back({t_base + gap.offset, rho});
        }
    }
    return out;
}

DensityMatrix ReducedState::to_density() const {
    const Eigen::Index m = ex.size();
    DensityMatrix d;
    d.rho = Eigen::MatrixXcd::Zero(m + 1, m + 1);
    d.rho(0, 0) = p_g;
    d.rho.block(1, 1, m, m) = ex * ex.adjoint();
    d.rho.block(1, 0, m, 1) = ex * std::conj(g_amp);
    d.rho.block(0, 1, 1, m) = g_amp * ex.adjoint();
    return d;
}

std::vector<TimedReduced> propagate_reduced(const krylov::KrylovChain& chain,
                                            const protocol::DetuningSchedule& schedule,
                                            double gamma, const SectorState& psi0,
                                            long n_periods, int samples_per_period,
                                            PropagatorCache* shared_cache) {
    if (psi0.ex.size() != static_cast<Eigen::Index>(chain.m))
        throw InvalidArgument("state dimension does not match chain");
    if (std::abs(psi0.norm2() - 1.0) > 1e-10)
        throw UnsupportedState("reduced propagation needs a normalized pure state");
    PropagatorCache local(chain, gamma, !is_free(schedule));
    PropagatorCache& cache = shared_cache ? *shared_cache : local;
    const auto plan = plan_period(schedule, samples_per_period);

    ReducedState st;
    st.g_amp = psi0.g_amp;
    st.ex = psi0.ex;
    st.p_g = std::norm(psi0.g_amp);

    std::vector<TimedReduced> out;
    out.reserve(static_cast<std::size_t>(n_periods) * samples_per_period + 1);
    out.push_back({0.0, st});
    for (long k = 0; k < n_periods; ++k) {
        const double t_base = schedule.period * static_cast<double>(k);
        for (const auto& gap : plan.gaps) {
            const double before = st.ex.squaredNorm();
            st.ex = cache.get(gap.duration, gap.delta).u * st.ex;
            st.p_g += before - st.ex.squaredNorm();  // decay feeds only |G>
            if (gap.emit_after) out.push_back({t_base + gap.offset, st});
        }
    }
    return out;
}

FidelityTrace FidelityTrace::stroboscopic() const {
    FidelityTrace s;
    s.period = period;
    s.label = label;
    if (period <= 0.0) throw InvalidArgument("trace has no period");
    const double tol = 1e-9 * period;
    for (std::size_t i = 0; i < time.size(); ++i) {
        if (std::abs(std::remainder(time[i], period)) < tol) {
            s.time.push_back(time[i]);
            s.f_bright.push_back(f_bright[i]);
            s.f_target.push_back(f_target[i]);
            s.p_g.push_back(p_g[i]);
            s.p_photon.push_back(p_photon[i]);
            s.p_dark.push_back(p_dark[i]);
        }
    }
    return s;
}

FidelityTrace bright_trace(const krylov::KrylovChain& chain,
                           const protocol::DetuningSchedule& schedule, double gamma,
                           long n_periods, int samples_per_period) {
    const auto run = propagate_reduced(chain, schedule, gamma,
                                       SectorState::bright(chain.m), n_periods,
                                       samples_per_period);
    FidelityTrace tr;
    tr.period = schedule.period;
    for (const auto& [t, st] : run) {
        tr.time.push_back(t);
        const double fb = std::norm(st.ex[1]);
        tr.f_bright.push_back(fb);
        tr.f_target.push_back(fb);
        tr.p_g.push_back(st.p_g);
        tr.p_photon.push_back(std::norm(st.ex[0]));
        double dark = 0.0;
        for (Eigen::Index p = 2; p < st.ex.size(); ++p) dark += std::norm(st.ex[p]);
        tr.p_dark.push_back(dark);
    }
    return tr;
}

}  // namespace spinvault::evolve
