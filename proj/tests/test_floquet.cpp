#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "spinvault/evolve.hpp"
#include "spinvault/floquet.hpp"
#include "support/oracles.hpp"

using namespace spinvault;
using std::numbers::pi;
using cd = std::complex<double>;

namespace {
ensemble::EnsembleMoments mom(double g_eff, double sigma) {
    ensemble::EnsembleMoments m;
    m.g_eff = g_eff;
    m.sigma = sigma;
    return m;
}
}  // namespace

TEST_CASE("h0 carries the duty-cycled coupling") {
    const double g = 50.0;
    const double t0 = 0.1 * 2.0 * pi, ton = pi / g;
    const auto chain = krylov::gaussian_chain(mom(g, 1.0), 3);
    const auto sched = protocol::paper_protocol(t0, ton, 400.0 * g);
    const auto h0 = floquet::floquet_h0(chain, sched);
    CHECK(h0(0, 1).real() == doctest::Approx(g * ton / (t0 + ton)).epsilon(1e-14));
    CHECK(h0(1, 2).real() == doctest::Approx(1.0));
    CHECK((h0 - h0.adjoint()).cwiseAbs().maxCoeff() < 1e-15);

    // t0 -> 0 restores the always-on coupling
    const auto tiny = protocol::paper_protocol(1e-12, ton, 400.0 * g);
    CHECK(floquet::floquet_h0(chain, tiny)(0, 1).real() == doctest::Approx(g).epsilon(1e-9));

    // homogeneous case: two-level block with eigenvalues +- g t_on / T
    const auto c2 = krylov::gaussian_chain(mom(g, 0.0), 2);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(floquet::floquet_h0(c2, sched));
    CHECK(es.eigenvalues()[0] == doctest::Approx(-g * ton / sched.period).epsilon(1e-12));
    CHECK(es.eigenvalues()[1] == doctest::Approx(g * ton / sched.period).epsilon(1e-12));

    CHECK_THROWS_AS(floquet::floquet_h0(chain, protocol::unmodulated(1.0)),
                    UnsupportedKind);
}

TEST_CASE("h1 closed form and Hermitian sy02 pattern") {
    const double g = 32.0;
    const double t0 = 0.1 * 2.0 * pi, ton = pi / g;
    const auto chain = krylov::gaussian_chain(mom(g, 1.0), 5);
    const auto sched = protocol::paper_protocol(t0, ton, 400.0 * g);
    const auto h1 = floquet::floquet_h1(chain, sched);
    const double T = sched.period;
    const double coeff = g * 1.0 * ton * ton / (8.0 * T * T);
    CHECK(h1(0, 2) == cd(0.0, -coeff));
    CHECK(h1(2, 0) == cd(0.0, coeff));
    CHECK(h1.cwiseAbs().sum() == doctest::Approx(2.0 * coeff));  // single entry pair
    CHECK((h1 - h1.adjoint()).cwiseAbs().maxCoeff() == 0.0);

    // homogeneous ensembles have no first-order correction
    const auto c0 = krylov::gaussian_chain(mom(g, 0.0), 5);
    CHECK(floquet::floquet_h1(c0, sched).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("quadrature oracle for the switched first-order term") {
    const double g = 14.0, sigma = 1.0, t0 = 0.5, ton = 0.21;
    const auto chain = krylov::gaussian_chain(mom(g, sigma), 6);
    const auto sched = protocol::paper_protocol(t0, ton, 400.0 * g);
    const double T = t0 + ton;

    // centered pulse: the double integral vanishes identically
    const double d_centered = oracles::switching_double_integral(g, t0, ton, t0 / 2);
    CHECK(std::abs(d_centered) < 1e-6);

    // pulse-aligned frame: D = -g t0 t_on, term = sigma D / (2T^2) * sy02
    // (sy02 has entries (0,2) = -i, (2,0) = +i, so the coefficient reads off
    // the (2,0) imaginary part)
    const double d_start = oracles::switching_double_integral(g, t0, ton, 0.0);
    CHECK(d_start == doctest::Approx(-g * t0 * ton).epsilon(1e-4));
    const auto h1m = floquet::magnus_first_order(chain, sched);
    const double expect = sigma * (-g * t0 * ton) / (2.0 * T * T);
    CHECK(h1m(2, 0) == cd(0.0, expect));
    CHECK(h1m(0, 2) == cd(0.0, -expect));
    CHECK((h1m - h1m.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    const double quad_coeff = sigma * d_start / (2.0 * T * T);
    // midpoint rule on the discontinuous switching profile resolves ~3e-6
    CHECK(std::abs(h1m(2, 0).imag() - quad_coeff) < 3e-6);

    // the published closed form solves a different bookkeeping; record the gap
    const auto h1_published = floquet::floquet_h1(chain, sched);
    CHECK(std::abs(h1_published(0, 2).imag()) ==
          doctest::Approx(g * sigma * ton * ton / (8.0 * T * T)));
    CHECK(std::abs(h1_published(0, 2) - h1m(0, 2)) > 1e-2);
}

TEST_CASE("stroboscopic fidelity basics") {
    const double g = 50.0;
    const auto chain = krylov::gaussian_chain(mom(g, 1.0), 24);
    const auto sched = protocol::paper_protocol(0.1 * 2.0 * pi, pi / g, 400.0 * g);
    const auto f = floquet::floquet_effective(chain, sched);
    CHECK(floquet::stroboscopic_fidelity(f.h_eff, f.period, 0) == doctest::Approx(1.0));

    // homogeneous pi pulse: protected at every stroboscopic time
    const auto c0 = krylov::gaussian_chain(mom(g, 0.0), 2);
    const auto f0 = floquet::floquet_effective(c0, sched);
    CHECK(floquet::stroboscopic_fidelity(f0.h_eff, f0.period, 1) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(floquet::stroboscopic_fidelity(f0.h_eff, f0.period, 17) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // eigendecomposition vs repeated multiplication
    const Eigen::MatrixXcd u = floquet::hermitian_propagator(f.h_eff, f.period);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(24);
    psi[1] = 1.0;
    for (int n = 1; n <= 6; ++n) {
        psi = u * psi;
        CHECK(std::abs(floquet::stroboscopic_fidelity(f.h_eff, f.period, n) -
                       std::norm(psi[1])) < 1e-10);
    }
}

TEST_CASE("F1 plateau holds through t0 = 0.1 T_sigma and collapses beyond") {
    const double g = 50.0;
    const auto chain = krylov::gaussian_chain(mom(g, 1.0), 64);
    const double Ts = 2.0 * pi;
    auto f1 = [&](double frac) {
        const auto sched = protocol::paper_protocol(frac * Ts, pi / g, 400.0 * g);
        const auto f = floquet::floquet_effective(chain, sched);
        return floquet::stroboscopic_fidelity(f.h_eff, f.period, 1);
    };
    for (double frac : {0.02, 0.05, 0.08, 0.1}) CHECK(f1(frac) > 0.97);
    CHECK(f1(0.2) < 0.85);
}

TEST_CASE("large-detuning consistency of the h0 coupling entry") {
    const double g = 50.0, t0 = 0.1 * 2.0 * pi, ton = pi / g;
    for (double delta : {20.0 * g, 100.0 * g}) {
        const auto sched = protocol::paper_protocol(t0, ton, delta);
        const auto chain = krylov::gaussian_chain(mom(g, 1.0), 3);
        const double entry = floquet::floquet_h0(chain, sched)(0, 1).real();
        const double exact = std::abs(protocol::phase_integral(sched)) * g / sched.period;
        CHECK(std::abs(entry - exact) <= (2.0 / delta) * g / sched.period + 1e-12);
    }
}

TEST_CASE("magnus error vanishes for a homogeneous ensemble") {
    const double g = 25.0;
    const auto chain = krylov::gaussian_chain(mom(g, 0.0), 8);
    const auto sched = protocol::paper_protocol(0.4, pi / g, 400.0 * g);
    const auto err = floquet::magnus_error(chain, sched);
    CHECK(err.err0 < 1e-10);
    CHECK(err.err1 < 1e-10);
}

TEST_CASE("halving both durations shows the expansion orders") {
    const double g = 32.0, sigma = 1.0;
    const auto chain = krylov::gaussian_chain(mom(g, sigma), 32);
    const double ton0 = (pi / 4.0) / g, t00 = 0.3;
    const auto e1 = floquet::magnus_error(chain, protocol::paper_protocol(t00, ton0, 1.0));
    const auto e2 =
        floquet::magnus_error(chain, protocol::paper_protocol(t00 / 2, ton0 / 2, 1.0));
    CHECK(e1.err0 / e2.err0 > 3.0);
    CHECK(e1.err0 / e2.err0 < 5.0);
    CHECK(e1.err1 / e2.err1 > 6.0);
    CHECK(e1.err1 / e2.err1 < 10.0);
}

TEST_CASE("first order improves on zeroth at the working point") {
    const double g = 50.0;
    const auto chain = krylov::gaussian_chain(mom(g, 1.0), 32);
    const auto sched = protocol::paper_protocol(0.1 * 2.0 * pi, pi / g, 400.0 * g);
    const auto err = floquet::magnus_error(chain, sched);
    CHECK(err.err1 < err.err0);
}

TEST_CASE("stroboscopic dynamics approaches the effective-Hamiltonian prediction as T^3") {
    // per-period fidelity gap between the exact switched propagator and
    // exp(-i h_eff T), evaluated via evolve on a deeply dispersive schedule
    const double g = 20.0, sigma = 1.0;
    const std::size_t m = 24;
    const auto chain = krylov::gaussian_chain(mom(g, sigma), m);
    auto gap = [&](double scale) {
        const double ton = scale * (pi / 4.0) / g, t0 = scale * 0.4;
        const auto sched = protocol::paper_protocol(t0, ton, 2e5);
        const auto run = evolve::propagate_unitary(chain, sched,
                                                   evolve::SectorState::bright(m), 1, 1);
        const auto f = floquet::floquet_effective(chain, sched);
        const double f_exact = std::norm(run.back().state.ex[1]);
        const double f_pred = floquet::stroboscopic_fidelity(f.h0, f.period, 1);
        return std::abs(f_exact - f_pred);
    };
    const double gap1 = gap(1.0), gap2 = gap(0.5);
    CHECK(gap2 < gap1 / 3.0);  // at least quadratic shrink per halving
}

TEST_CASE("floquet JSON dump carries the three operators") {
    const auto chain = krylov::gaussian_chain(mom(10.0, 1.0), 4);
    const auto sched = protocol::paper_protocol(0.3, pi / 10.0, 4000.0);
    const auto f = floquet::floquet_effective(chain, sched);
    const auto dump = f.to_json();
    CHECK(dump.find("h_eff") != std::string::npos);
    CHECK(dump.find("period") != std::string::npos);
}
