#include "spinvault/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

namespace spinvault::krylov {

using std::complex;
using cd = complex<double>;

std::string KrylovChain::to_json() const {
    nlohmann::json j;
    j["m"] = m;
    j["alpha"] = alpha;
    j["beta"] = beta;
    j["origin"] = origin == Origin::AnalyticGaussian ? "AnalyticGaussian" : "Lanczos";
    return j.dump();
}

KrylovChain KrylovChain::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    KrylovChain c;
    c.m = j.at("m").get<std::size_t>();
    c.alpha = j.at("alpha").get<std::vector<double>>();
    c.beta = j.at("beta").get<std::vector<double>>();
    const std::string o = j.at("origin").get<std::string>();
    if (o == "AnalyticGaussian") c.origin = Origin::AnalyticGaussian;
    else if (o == "Lanczos") c.origin = Origin::Lanczos;
    else throw ParseError("unknown chain origin '" + o + "'");
    if (c.alpha.size() != c.m || c.beta.size() + 1 != c.m)
        throw ParseError("inconsistent chain dimensions in JSON");
    return c;
}

KrylovChain gaussian_chain(const ensemble::EnsembleMoments& moments, std::size_t m) {
    if (m < 2) throw TruncationTooSmall("chain needs m >= 2");
    if (moments.sigma < 0.0) throw InvalidArgument("sigma must be >= 0");
    KrylovChain c;
    c.m = m;
    c.origin = Origin::AnalyticGaussian;
    c.alpha.assign(m, 0.0);
    c.beta.resize(m - 1);
    c.beta[0] = moments.g_eff;
    for (std::size_t p = 1; p + 1 < m; ++p)
        c.beta[p] = std::sqrt(static_cast<double>(p)) * moments.sigma;
    return c;
}

FullSpaceHamiltonian full_space_hamiltonian(const ensemble::EnsembleSpec& spec,
                                            double delta) {
    if (spec.kind != ensemble::Kind::Explicit)
        throw NotExplicit("full-space Hamiltonian needs an explicit spin list");
    spec.validate();
    const auto mom = ensemble::compute_moments(spec);
    const std::size_t n = spec.spins.size();
    FullSpaceHamiltonian h;
    h.dim = n + 1;
    h.diag.resize(n + 1);
    h.coupling.resize(n);
    h.bright.resize(n);
    h.diag[0] = delta;
    for (std::size_t j = 0; j < n; ++j) {
        h.diag[j + 1] = spec.spins[j].omega - mom.omega_bar;
        h.coupling[j] = spec.spins[j].g;
        h.bright[j] = spec.spins[j].g / mom.g_eff;
    }
    return h;
}

void FullSpaceHamiltonian::apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
    out.resize(static_cast<Eigen::Index>(dim));
    cd acc = diag[0] * in[0];
    for (std::size_t j = 0; j < coupling.size(); ++j) acc += coupling[j] * in[j + 1];
    out[0] = acc;
    for (std::size_t j = 0; j < coupling.size(); ++j)
        out[j + 1] = diag[j + 1] * in[j + 1] + coupling[j] * in[0];
}

std::pair<double, double> FullSpaceHamiltonian::spectral_bounds() const {
    double lo = diag[0], hi = diag[0];
    for (double d : diag) { lo = std::min(lo, d); hi = std::max(hi, d); }
    double g2 = 0.0;
    for (double g : coupling) g2 += g * g;
    const double geff = std::sqrt(g2);
    // the coupling block has operator norm g_eff; widen a touch for safety
    return {lo - geff - 1e-9 * (std::abs(lo) + geff + 1.0),
            hi + geff + 1e-9 * (std::abs(hi) + geff + 1.0)};
}

KrylovChain lanczos_chain(const ensemble::EnsembleSpec& spec, std::size_t m) {
    if (m < 2) throw TruncationTooSmall("chain needs m >= 2");
    if (spec.kind != ensemble::Kind::Explicit)
        throw NotExplicit("lanczos_chain needs an explicit spin list");
    const auto mom = ensemble::compute_moments(spec);
    const auto h = full_space_hamiltonian(spec, 0.0);
    const double breakdown_tol =
        1e-12 * (mom.sigma > 0.0 ? mom.sigma : mom.g_eff);

    const Eigen::Index n = static_cast<Eigen::Index>(h.dim);
    const std::size_t m_cap = std::min<std::size_t>(m, h.dim);
    Eigen::MatrixXd basis(n, static_cast<Eigen::Index>(m_cap));
    KrylovChain c;
    c.origin = Origin::Lanczos;

    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    v[0] = 1.0;  // photon state
    basis.col(0) = v;

    auto hmul = [&h](const Eigen::VectorXd& x) {
        Eigen::VectorXd y(x.size());
        double acc = h.diag[0] * x[0];
        for (std::size_t j = 0; j < h.coupling.size(); ++j) acc += h.coupling[j] * x[j + 1];
        y[0] = acc;
        for (std::size_t j = 0; j < h.coupling.size(); ++j)
            y[j + 1] = h.diag[j + 1] * x[j + 1] + h.coupling[j] * x[0];
        return y;
    };

    Eigen::VectorXd w = hmul(v);
    double a = v.dot(w);
    c.alpha.push_back(a);
    w -= a * v;
    for (std::size_t p = 1; p < m_cap; ++p) {
        // full reorthogonalization, two passes
        const auto built = basis.leftCols(static_cast<Eigen::Index>(p));
        w -= built * (built.transpose() * w);
        w -= built * (built.transpose() * w);
        const double b = w.norm();
        if (b < breakdown_tol) break;  // Krylov space exhausted
        c.beta.push_back(b);
        v = w / b;
        basis.col(static_cast<Eigen::Index>(p)) = v;
        w = hmul(v);
        a = v.dot(w);
        c.alpha.push_back(a);
        w -= a * v + c.beta.back() * basis.col(static_cast<Eigen::Index>(p - 1));
    }
    c.m = c.alpha.size();
    if (c.m < 2)
        throw TruncationTooSmall("Krylov space exhausted before the bright state");
    return c;
}

namespace {

Eigen::MatrixXd chain_matrix(const KrylovChain& chain, double delta) {
    const Eigen::Index m = static_cast<Eigen::Index>(chain.m);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) h(i, i) = chain.alpha[static_cast<std::size_t>(i)];
    h(0, 0) += delta;
    for (Eigen::Index i = 0; i + 1 < m; ++i) {
        h(i, i + 1) = chain.beta[static_cast<std::size_t>(i)];
        h(i + 1, i) = chain.beta[static_cast<std::size_t>(i)];
    }
    return h;
}

}  // namespace

std::vector<cd> chain_survival_amplitude(const KrylovChain& chain, double delta,
                                         std::span<const double> times) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(chain_matrix(chain, delta));
    const Eigen::VectorXd& lam = es.eigenvalues();
    const Eigen::VectorXd weights = es.eigenvectors().row(1).transpose();  // <Phi_1|mode>
    std::vector<cd> out;
    out.reserve(times.size());
    for (double t : times) {
        cd a = 0.0;
        for (Eigen::Index k = 0; k < lam.size(); ++k)
            a += weights[k] * weights[k] * std::exp(cd(0.0, -lam[k] * t));
        out.push_back(a);
    }
    return out;
}

std::vector<cd> full_survival_amplitude(const FullSpaceHamiltonian& h,
                                        std::span<const double> times) {
    const auto [lo, hi] = h.spectral_bounds();
    const double center = 0.5 * (lo + hi);
    const double radius = 0.5 * (hi - lo);
    const Eigen::Index n = static_cast<Eigen::Index>(h.dim);

    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n);
    for (std::size_t j = 0; j < h.bright.size(); ++j) psi[static_cast<Eigen::Index>(j) + 1] = h.bright[j];
    Eigen::VectorXcd bright0 = psi;

    std::vector<double> ts(times.begin(), times.end());
    std::vector<cd> out(ts.size());

    // step from one requested time to the next; each step is a fresh
    // Chebyshev expansion of exp(-i H dt)
    double t_now = 0.0;
    Eigen::VectorXcd t0v(n), t1v(n), t2v(n), acc(n), scaled(n);
    for (std::size_t idx = 0; idx < ts.size(); ++idx) {
        const double dt = ts[idx] - t_now;
        if (dt < 0.0) throw InvalidArgument("times must be non-decreasing");
        if (dt > 0.0) {
            const double z = radius * dt;
            const int kmax = static_cast<int>(std::ceil(z + 40.0 + 12.0 * std::log1p(z)));
            const cd phase = std::exp(cd(0.0, -center * dt));
            // exp(-iHt) = e^{-ic t} [J_0(z) + 2 sum_k (-i)^k J_k(z) T_k((H-c)/r)]
            t0v = psi;
            acc = t0v * (std::cyl_bessel_j(0, z) * phase);
            // T_1 = H~ psi
            h.apply(psi, t1v);
            t1v = (t1v - center * psi) / radius;
            cd ik(0.0, -1.0);
            acc += t1v * (2.0 * std::cyl_bessel_j(1, z) * phase * ik);
            for (int k = 2; k <= kmax; ++k) {
                h.apply(t1v, t2v);
                t2v = 2.0 * (t2v - center * t1v) / radius - t0v;
                t0v.swap(t1v);
                t1v.swap(t2v);
                ik *= cd(0.0, -1.0);
                const double jk = std::cyl_bessel_j(k, z);
                acc += t1v * (2.0 * jk * phase * ik);
                if (k > static_cast<int>(z) && std::abs(jk) < 1e-15) break;
            }
            psi = acc;
            t_now = ts[idx];
        }
        out[idx] = bright0.dot(psi);  // conjugate-linear in the first argument
    }
    return out;
}

}  // namespace spinvault::krylov
