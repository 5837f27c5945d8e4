// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code = number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "spinvault/ensemble.hpp"
#include "spinvault/evolve.hpp"
#include "spinvault/floquet.hpp"
#include "spinvault/krylov.hpp"
#include "spinvault/optimize.hpp"
#include "spinvault/protocol.hpp"
#include "spinvault/qubit.hpp"

using namespace spinvault;
using std::numbers::pi;
using cd = std::complex<double>;

namespace {

int g_failures = 0;

void report(int idx, bool pass, const std::string& what) {
    std::printf("%s criterion %2d: %s\n", pass ? "PASS" : "FAIL", idx, what.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

ensemble::EnsembleMoments mom(double g_eff, double sigma) {
    ensemble::EnsembleMoments m;
    m.g_eff = g_eff;
    m.sigma = sigma;
    return m;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- criterion 1
void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto spec = ensemble::gaussian_grid(0.0, 1.0, 50.0, 10000);
    const auto moments = ensemble::compute_moments(spec);
    const auto chain = krylov::lanczos_chain(spec, 16);
    bool ok = chain.m == 16;
    const double beta0_err = std::abs(chain.beta[0] - moments.g_eff) / moments.g_eff;
    ok = ok && beta0_err < 1e-12;
    double worst = 0.0;
    for (std::size_t p = 1; p <= 8; ++p) {
        const double ratio = chain.beta[p] / std::sqrt(double(p));
        worst = std::max(worst, std::abs(ratio - 1.0));
        ok = ok && ratio >= 0.95 && ratio <= 1.05;
    }
    const double dt = elapsed_s(t0);
    ok = ok && dt < 10.0;
    report(1, ok,
           "Lanczos chain on N=1e4 Gaussian ensemble: |beta0/g_eff-1|=" + fmt(beta0_err) +
               ", max |beta_p/(sqrt(p) sigma)-1| (p<=8) = " + fmt(worst) +
               ", runtime " + fmt(dt) + " s");
}

// ---------------------------------------------------------------- criterion 2
void criterion_2() {
    const auto spec = ensemble::sample_explicit(0.0, 1.0, 50.0, 10000, 1);
    const auto chain = krylov::lanczos_chain(spec, 64);
    const auto full = krylov::full_space_hamiltonian(spec, 0.0);
    std::vector<double> times;
    for (int i = 0; i <= 100; ++i) times.push_back(5.0 * i / 100.0);
    const auto a_chain = krylov::chain_survival_amplitude(chain, 0.0, times);
    const auto a_full = krylov::full_survival_amplitude(full, times);
    double max_err = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i)
        max_err = std::max(max_err, std::abs(a_chain[i] - a_full[i]));
    report(2, max_err < 1e-3,
           "truncated chain (m=64) vs full 10001-dim propagation, max |da| = " +
               fmt(max_err) + " (< 1e-3)");
}

// ---------------------------------------------------------------- criterion 3
void criterion_3() {
    const double g = 50.0;
    const auto chain = krylov::gaussian_chain(mom(g, 0.0), 8);
    bool ok = true;
    double worst = 0.0;

    const auto unmod = evolve::propagate_unitary(chain, protocol::unmodulated(pi / g * 10),
                                                 evolve::SectorState::bright(8), 10, 20);
    for (const auto& [t, st] : unmod) {
        const double expect = std::cos(g * t) * std::cos(g * t);
        worst = std::max(worst, std::abs(std::norm(st.ex[1]) - expect));
    }
    ok = ok && worst < 1e-8;

    // deep dispersive off-window: the finite-detuning residual (2g/Delta)^2
    // must sit below the 1e-8 exactness tolerance
    const auto sched = protocol::paper_protocol(0.1 * 2.0 * pi, pi / g, 1e6 * g);
    const auto strobe = evolve::propagate_unitary(chain, sched,
                                                  evolve::SectorState::bright(8), 100, 1);
    double worst_revival = 0.0;
    for (const auto& [t, st] : strobe)
        worst_revival = std::max(worst_revival, std::abs(std::norm(st.ex[1]) - 1.0));
    ok = ok && worst_revival < 1e-8;
    report(3, ok,
           "homogeneous exactness: |F - cos^2(gt)| <= " + fmt(worst) +
               ", |F(nT)-1| <= " + fmt(worst_revival) + " for n<=100");
}

// ---------------------------------------------------------------- criterion 4
void criterion_4() {
    const double g = 32.0;
    const auto chain = krylov::gaussian_chain(mom(g, 1.0), 32);
    const double ton = (pi / 4.0) / g, t0 = 0.3;
    const auto e1 = floquet::magnus_error(chain, protocol::paper_protocol(t0, ton, 1.0));
    const auto e2 =
        floquet::magnus_error(chain, protocol::paper_protocol(t0 / 2, ton / 2, 1.0));
    const double r0 = e1.err0 / e2.err0;
    const double r1 = e1.err1 / e2.err1;
    const bool ok = r0 >= 3.0 && r0 <= 5.0 && r1 >= 6.0 && r1 <= 10.0;
    report(4, ok,
           "Magnus halving: err0 ratio " + fmt(r0) + " in [3,5], err1 ratio " + fmt(r1) +
               " in [6,10]");
}

// ---------------------------------------------------------------- criterion 5
void criterion_5() {
    const double g = 32.0, tpi = pi / g, Ts = 2.0 * pi;
    const auto chain = krylov::gaussian_chain(mom(g, 1.0), 128);
    const double delta = 400.0 * g;
    optimize::GridSpec grid;
    const double step = 0.05 * tpi;
    for (double x = 0.1; x <= 4.0 + 1e-9; x += 0.05) grid.t_on_values.push_back(x * tpi);
    grid.t_0_values = {0.1 * Ts};

    grid.objective = {optimize::Objective::Type::FloquetF1, 1, 0.0};
    const auto floq = optimize::grid_search(chain, 0.0, delta, grid);
    bool ok = true;
    std::string detail;
    for (int mm = 1; mm <= 3; ++mm) {
        double best_loc = -1.0;
        for (std::size_t j = 1; j + 1 < grid.t_on_values.size(); ++j) {
            const double v = floq.surface(0, static_cast<Eigen::Index>(j));
            if (v >= floq.surface(0, static_cast<Eigen::Index>(j - 1)) &&
                v >= floq.surface(0, static_cast<Eigen::Index>(j + 1))) {
                if (best_loc < 0.0 || std::abs(grid.t_on_values[j] - mm * tpi) <
                                          std::abs(best_loc - mm * tpi))
                    best_loc = grid.t_on_values[j];
            }
        }
        const double off = std::abs(best_loc - mm * tpi);
        ok = ok && best_loc > 0.0 && off <= step + 1e-12;
        detail += "m=" + std::to_string(mm) + " offset " + fmt(off / tpi) + " tpi; ";
    }

    grid.objective = {optimize::Objective::Type::LindbladFn, 5, 0.0};
    const auto me = optimize::grid_search(chain, 1.0, delta, grid);
    const bool picks_m1 = std::abs(me.best_t_on - tpi) <= 0.5 * step;
    ok = ok && picks_m1;
    report(5, ok,
           "t_on grid at g=32s: Floquet maxima " + detail + "dissipative argmax t_on/tpi = " +
               fmt(me.best_t_on / tpi));
}

// ---------------------------------------------------------------- criterion 6
void criterion_6() {
    const double g = 50.0, tpi = pi / g, Ts = 2.0 * pi;
    const auto chain = krylov::gaussian_chain(mom(g, 1.0), 128);
    optimize::GridSpec grid;
    grid.t_on_values = {tpi};
    for (int i = 0; i < 60; ++i)
        grid.t_0_values.push_back((0.01 + (1.0 - 0.01) * i / 59.0) * Ts);
    grid.objective = {optimize::Objective::Type::LindbladFixedHorizon, 5,
                      5.0 * (0.1 * Ts + tpi)};
    const auto res = optimize::grid_search(chain, 1.0, 400.0 * g, grid);
    const double frac = res.best_t_0 / Ts;
    report(6, frac >= 0.07 && frac <= 0.13,
           "t_0 grid at g=50s (equal-horizon dissipative objective): best t_0 = " +
               fmt(frac) + " T_sigma (in [0.07, 0.13]), F = " + fmt(res.best_fidelity));
}

// ---------------------------------------------------------------- criterion 7
void criterion_7() {
    const auto t_begin = std::chrono::steady_clock::now();
    const double g = 50.0, gamma = 1.0, tpi = pi / g, Ts = 2.0 * pi;
    const double t0 = 0.1 * Ts, delta = 400.0 * g;
    const std::size_t m = 128;
    const auto chain = krylov::gaussian_chain(mom(g, 1.0), m);
    const auto sched = protocol::paper_protocol(t0, tpi, delta);

    const auto trace = evolve::bright_trace(chain, sched, gamma, 10, 20);
    const double f7_reduced = trace.stroboscopic().f_bright.at(7);

    const auto full = evolve::propagate_lindblad(
        chain, sched, gamma,
        evolve::DensityMatrix::from_sector(evolve::SectorState::bright(m)), 7, 1);
    const double f7_full = full.back().rho.rho(2, 2).real();

    bool ok = f7_reduced >= 0.75 && f7_reduced <= 0.85;
    ok = ok && std::abs(f7_full - f7_reduced) < 1e-9;

    // free and unmodulated references drop below 1/2 by t = 2T
    const auto free_tr =
        evolve::bright_trace(chain, protocol::free_spins(sched.period), gamma, 2, 20);
    const auto unmod_tr =
        evolve::bright_trace(chain, protocol::unmodulated(sched.period), gamma, 2, 20);
    double free_min = 1.0, unmod_min = 1.0;
    for (double f : free_tr.f_bright) free_min = std::min(free_min, f);
    for (double f : unmod_tr.f_bright) unmod_min = std::min(unmod_min, f);
    ok = ok && free_min < 0.5 && unmod_min < 0.5;
    const double dt = elapsed_s(t_begin);
    ok = ok && dt < 60.0;
    report(7, ok,
           "modulated F(7T) = " + fmt(f7_reduced) + " (full Lindblad " + fmt(f7_full) +
               ", band 0.80 +- 0.05); min F by 2T: free " + fmt(free_min) + ", unmodulated " +
               fmt(unmod_min) + "; runtime " + fmt(dt) + " s");
}

// ---------------------------------------------------------------- criterion 8
void criterion_8() {
    const double g = 50.0, gamma = 1.0, tpi = pi / g, Ts = 2.0 * pi;
    const auto chain = krylov::gaussian_chain(mom(g, 1.0), 128);
    const auto sched = protocol::paper_protocol(0.1 * Ts, tpi, 400.0 * g);
    const auto trace = evolve::bright_trace(chain, sched, gamma, 40, 1);
    const auto fit = optimize::fit_lifetime(trace);
    const double tau_T = fit.tau / sched.period;
    const double factor = optimize::improvement_factor(fit.tau, 1.0, gamma);
    const bool ok = tau_T >= 24.0 && tau_T <= 44.0 && factor >= 10.0;
    report(8, ok,
           "lifetime tau = " + fmt(tau_T) + " T (band [24,44]), residual " +
               fmt(fit.residual) + ", improvement factor " + fmt(factor) + " (>= 10)");
}

// ---------------------------------------------------------------- criterion 9
void criterion_9() {
    const double g = 50.0, gamma = 1.0, tpi = pi / g, Ts = 2.0 * pi;
    const auto chain = krylov::gaussian_chain(mom(g, 1.0), 128);
    const auto sched = protocol::paper_protocol(0.1 * Ts, tpi, 400.0 * g);
    const auto suite = qubit::pauli_suite(chain, sched, gamma, 10, 1);

    bool ok = true;
    double zminus_dev = 0.0;
    for (double f : suite.at("z-").modulated.f_target)
        zminus_dev = std::max(zminus_dev, std::abs(f - 1.0));
    ok = ok && zminus_dev < 1e-10;

    double xy_gap = 0.0;
    const auto& x = suite.at("x+").modulated.f_target;
    const auto& y = suite.at("y+").modulated.f_target;
    for (std::size_t i = 0; i < x.size(); ++i)
        xy_gap = std::max(xy_gap, std::abs(x[i] - y[i]));
    ok = ok && xy_gap < 1e-3;

    const auto& zp = suite.at("z+").modulated.f_target;
    double super_margin = 1.0;
    for (const auto* label : {"x+", "x-", "y+", "y-"}) {
        const auto& f = suite.at(label).modulated.f_target;
        for (std::size_t n = 0; n < f.size(); ++n)
            super_margin = std::min(super_margin, f[n] - zp[n]);
    }
    ok = ok && super_margin >= -1e-6;
    report(9, ok,
           "Pauli suite: |F(z-) - 1| <= " + fmt(zminus_dev) + ", max |Fx-Fy| = " +
               fmt(xy_gap) + ", min (F_super - F_z+) = " + fmt(super_margin));
}

// --------------------------------------------------------------- criterion 10
double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a - b);
    return 0.5 * svd.singularValues().sum();
}

void criterion_10() {
    std::uint64_t ctr = 0;
    auto u01 = [&ctr](std::uint64_t seed) {
        return ensemble::detail::uniform_at(seed, ctr++);
    };
    const std::uint64_t seed = 20260810;
    bool ok = true;
    double worst_trace = 0.0, worst_herm = 0.0, worst_pos = 0.0, worst_dist = 0.0,
           worst_pg = 0.0, worst_rk4 = 0.0;
    int rk4_checked = 0;

    for (int cfg = 0; cfg < 200 && ok; ++cfg) {
        const double g = 5.0 + 95.0 * u01(seed);
        const double gamma = 2.0 * u01(seed);
        const std::size_t m = 4 + static_cast<std::size_t>(u01(seed) * 12.99);
        const auto chain = krylov::gaussian_chain(mom(g, 1.0), m);

        protocol::DetuningSchedule sched;
        if (u01(seed) < 0.7) {
            const double t0 = 0.1 + 1.4 * u01(seed);
            const double ton = (0.2 + 1.8 * u01(seed)) * pi / g;
            sched = protocol::paper_protocol(t0, ton, 30.0 * g * u01(seed));
        } else {
            std::vector<protocol::Segment> segs;
            const int ns = 2 + static_cast<int>(u01(seed) * 2.99);
            for (int s = 0; s < ns; ++s)
                segs.push_back({0.05 + 0.55 * u01(seed), 60.0 * (u01(seed) - 0.5)});
            sched = protocol::custom(segs);
        }

        // random pure state on {G} + sector
        evolve::SectorState psi0;
        psi0.ex = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(m));
        psi0.g_amp = cd(u01(seed) - 0.5, u01(seed) - 0.5);
        for (Eigen::Index i = 0; i < psi0.ex.size(); ++i)
            psi0.ex[i] = cd(u01(seed) - 0.5, u01(seed) - 0.5);
        const double nrm = std::sqrt(psi0.norm2());
        psi0.g_amp /= nrm;
        psi0.ex /= nrm;

        const auto red = evolve::propagate_reduced(chain, sched, gamma, psi0, 2, 8);
        const auto full = evolve::propagate_lindblad(
            chain, sched, gamma, evolve::DensityMatrix::from_sector(psi0), 2, 8);

        double prev_pg = -1.0;
        for (std::size_t i = 0; i < full.size(); ++i) {
            const auto& rho = full[i].rho;
            worst_trace = std::max(worst_trace, std::abs(rho.trace() - 1.0));
            worst_herm = std::max(worst_herm,
                                  (rho.rho - rho.rho.adjoint()).cwiseAbs().maxCoeff());
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.rho,
                                                               Eigen::EigenvaluesOnly);
            worst_pos = std::max(worst_pos, -es.eigenvalues().minCoeff());
            if (gamma > 0.0) {
                const double pg = rho.rho(0, 0).real();
                worst_pg = std::max(worst_pg, prev_pg - pg);
                prev_pg = pg;
            }
            worst_dist = std::max(worst_dist,
                                  trace_distance(red[i].state.to_density().rho, rho.rho));
        }

        if (cfg % 20 == 0 && sched.max_abs_delta() + g < 400.0) {
            evolve::IntegratorConfig rk4;
            rk4.method = evolve::IntegratorConfig::Method::Rk4Fixed;
            const auto rk = evolve::propagate_lindblad(
                chain, sched, gamma, evolve::DensityMatrix::from_sector(psi0), 1, 2, rk4);
            const auto ex = evolve::propagate_lindblad(
                chain, sched, gamma, evolve::DensityMatrix::from_sector(psi0), 1, 2);
            worst_rk4 = std::max(
                worst_rk4, (rk.back().rho.rho - ex.back().rho.rho).cwiseAbs().maxCoeff());
            ++rk4_checked;
        }

        ok = ok && worst_trace < 1e-8 && worst_herm < 1e-10 && worst_pos < 1e-8 &&
             worst_pg < 1e-12 && worst_dist < 1e-7;
    }
    ok = ok && worst_rk4 < 1e-5 && rk4_checked > 0;
    report(10, ok,
           "physicality over 200 random configs: trace " + fmt(worst_trace) + ", herm " +
               fmt(worst_herm) + ", negativity " + fmt(worst_pos) + ", p_G backstep " +
               fmt(worst_pg) + ", reduced-vs-full " + fmt(worst_dist) + ", RK4 gap " +
               fmt(worst_rk4) + " (" + std::to_string(rk4_checked) + " RK4 runs)");
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (g_failures == 0) std::printf("all acceptance criteria passed\n");
    else std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures;
}
