#include "spinvault/ensemble.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace spinvault::ensemble {

void EnsembleSpec::validate() const {
    if (kind == Kind::Explicit) {
        if (spins.empty()) throw EmptyEnsemble("explicit ensemble has no spins");
        for (const auto& s : spins)
            if (!(s.g > 0.0))
                throw NonPositiveCoupling("spin coupling must be > 0, got " +
                                          std::to_string(s.g));
        if (n_spins != spins.size())
            throw InvalidArgument("n_spins does not match spin list length");
    } else {
        if (!(g_eff > 0.0)) throw NonPositiveCoupling("g_eff must be > 0");
        if (width < 0.0) throw InvalidArgument("width must be >= 0");
        if (n_spins < 1) throw InvalidCount("parametric spec needs n_spins >= 1");
    }
}

EnsembleMoments compute_moments(const EnsembleSpec& spec) {
    spec.validate();
    EnsembleMoments m;
    if (spec.kind == Kind::GaussianParametric) {
        m.omega_bar = spec.mean;
        m.g_eff = spec.g_eff;
        m.sigma = spec.width;
    } else {
        double w2_sum = 0.0, w2_omega = 0.0;
        for (const auto& s : spec.spins) {
            w2_sum += s.g * s.g;
            w2_omega += s.g * s.g * s.omega;
        }
        m.g_eff = std::sqrt(w2_sum);
        m.omega_bar = w2_omega / w2_sum;
        double var = 0.0;  // second pass for the centered moment
        for (const auto& s : spec.spins) {
            const double d = s.omega - m.omega_bar;
            var += s.g * s.g * d * d;
        }
        m.sigma = std::sqrt(var) / m.g_eff;
    }
    m.t_pi = std::numbers::pi / m.g_eff;
    m.t_sigma = m.sigma > 0.0 ? 2.0 * std::numbers::pi / m.sigma
                              : std::numeric_limits<double>::infinity();
    return m;
}

namespace detail {

std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t i) {
    std::uint64_t z = seed + (i + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double uniform_at(std::uint64_t seed, std::uint64_t i) {
    // 53 high bits, centered on the lattice: u in (0,1) strictly.
    return (static_cast<double>(splitmix64_at(seed, i) >> 11) + 0.5) * 0x1.0p-53;
}

double inverse_normal_cdf(double p) {
    // Wichura (1988), algorithm AS241, PPND16.
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("inverse_normal_cdf needs p in (0,1)");
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                     6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                   1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
                 1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
               (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                     3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                   5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
                 4.2313330701600911252e+1) * r + 1.0);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                    2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                  3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
                4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
              (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                    1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                  6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
                2.05319162663775882187e+0) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                  2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
                5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
              (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                    1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                  1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r + 1.0);
    }
    return q < 0.0 ? -val : val;
}

}  // namespace detail

EnsembleSpec sample_explicit(double mean, double width, double g_eff,
                             std::size_t n, std::uint64_t seed) {
    if (n < 1) throw InvalidCount("sample_explicit needs n >= 1");
    if (width < 0.0) throw InvalidArgument("width must be >= 0");
    if (!(g_eff > 0.0)) throw NonPositiveCoupling("g_eff must be > 0");

    EnsembleSpec spec;
    spec.kind = Kind::Explicit;
    spec.n_spins = n;
    spec.rng_seed = seed;
    spec.spins.reserve(n);
    const double g = g_eff / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double omega =
            width == 0.0
                ? mean
                : mean + width * detail::inverse_normal_cdf(detail::uniform_at(seed, i));
        spec.spins.push_back({omega, g});
    }
    return spec;
}

EnsembleSpec gaussian_grid(double mean, double width, double g_eff,
                           std::size_t n, double span_sigmas) {
    if (n < 1) throw InvalidCount("gaussian_grid needs n >= 1");
    if (width < 0.0) throw InvalidArgument("width must be >= 0");
    if (!(g_eff > 0.0)) throw NonPositiveCoupling("g_eff must be > 0");

    EnsembleSpec spec;
    spec.kind = Kind::Explicit;
    spec.n_spins = n;
    spec.spins.reserve(n);
    if (n == 1 || width == 0.0) {
        const double g = g_eff / std::sqrt(static_cast<double>(n));
        for (std::size_t i = 0; i < n; ++i) spec.spins.push_back({mean, g});
        return spec;
    }
    std::vector<double> x(n), w(n);
    double w_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = -span_sigmas + 2.0 * span_sigmas * static_cast<double>(i) /
                                  static_cast<double>(n - 1);
        w[i] = std::exp(-0.5 * x[i] * x[i]);
        w_sum += w[i];
    }
    for (std::size_t i = 0; i < n; ++i)
        spec.spins.push_back({mean + width * x[i], g_eff * std::sqrt(w[i] / w_sum)});
    return spec;
}

EnsembleSpec load_spins_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open spin CSV: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty spin CSV: " + path.string());
    // allow the trace-style comment line before the header
    if (!line.empty() && line[0] == '#') std::getline(in, line);
    if (line != "omega,g")
        throw ParseError("spin CSV header must be 'omega,g', got '" + line + "'");
    EnsembleSpec spec;
    spec.kind = Kind::Explicit;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        double omega, g;
        char comma;
        if (!(ss >> omega >> comma >> g) || comma != ',')
            throw ParseError("bad spin CSV line " + std::to_string(lineno));
        spec.spins.push_back({omega, g});
    }
    spec.n_spins = spec.spins.size();
    spec.validate();
    return spec;
}

void save_spins_csv(const std::filesystem::path& path, const EnsembleSpec& spec) {
    if (spec.kind != Kind::Explicit) throw NotExplicit("only explicit specs serialize to CSV");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw OutputUnwritable("cannot write " + path.string());
    out << "omega,g\n";
    out.precision(17);
    for (const auto& s : spec.spins) out << s.omega << ',' << s.g << '\n';
}

}  // namespace spinvault::ensemble
