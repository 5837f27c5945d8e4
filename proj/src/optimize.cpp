#include "spinvault/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "spinvault/floquet.hpp"
#include "spinvault/protocol.hpp"

namespace spinvault::optimize {

void GridSpec::validate() const {
    if (t_on_values.empty() || t_0_values.empty())
        throw EmptyGrid("grid needs at least one t_on and one t_0 value");
    auto check = [](const std::vector<double>& v, const char* name) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!(v[i] > 0.0))
                throw InvalidArgument(std::string(name) + " values must be > 0");
            if (i > 0 && !(v[i] > v[i - 1]))
                throw InvalidArgument(std::string(name) + " values must ascend strictly");
        }
    };
    check(t_on_values, "t_on");
    check(t_0_values, "t_0");
    if (objective.type == Objective::Type::FloquetFn ||
        objective.type == Objective::Type::LindbladFn) {
        if (objective.n < 1) throw InvalidArgument("objective needs n >= 1");
    }
    if (objective.type == Objective::Type::LindbladFixedHorizon &&
        !(objective.horizon > 0.0))
        throw InvalidArgument("fixed-horizon objective needs horizon > 0");
}

namespace {

double evaluate_cell(const krylov::KrylovChain& chain, double gamma, double delta,
                     const Objective& obj, double t0, double t_on) {
    const auto schedule = protocol::paper_protocol(t0, t_on, delta);
    switch (obj.type) {
        case Objective::Type::FloquetF1:
        case Objective::Type::FloquetFn: {
            const auto f = floquet::floquet_effective(chain, schedule);
            const long n = obj.type == Objective::Type::FloquetF1 ? 1 : obj.n;
            return floquet::stroboscopic_fidelity(f.h_eff, f.period, n);
        }
        case Objective::Type::LindbladFn:
        case Objective::Type::LindbladFixedHorizon: {
            long n = obj.n;
            if (obj.type == Objective::Type::LindbladFixedHorizon)
                n = std::max<long>(1, std::lround(obj.horizon / schedule.period));
            const auto run = evolve::propagate_reduced(
                chain, schedule, gamma, evolve::SectorState::bright(chain.m), n, 1);
            return std::norm(run.back().state.ex[1]);
        }
    }
    throw InvalidArgument("unknown objective");
}

}  // namespace

OptimizationResult grid_search(const krylov::KrylovChain& chain, double gamma,
                               double delta, const GridSpec& grid,
                               unsigned n_threads) {
    grid.validate();
    const std::size_t n0 = grid.t_0_values.size();
    const std::size_t n1 = grid.t_on_values.size();
    OptimizationResult res;
    res.surface.resize(static_cast<Eigen::Index>(n0), static_cast<Eigen::Index>(n1));

    if (n_threads == 0) n_threads = std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(n0 * n1));

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string error_message;
    std::mutex error_mu;
    auto worker = [&]() {
        for (;;) {
            const std::size_t cell = next.fetch_add(1);
            if (cell >= n0 * n1 || failed.load()) return;
            const std::size_t i = cell / n1, j = cell % n1;
            try {
                res.surface(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    evaluate_cell(chain, gamma, delta, grid.objective,
                                  grid.t_0_values[i], grid.t_on_values[j]);
            } catch (const std::exception& e) {
                std::lock_guard lock(error_mu);
                failed = true;
                error_message = e.what();
            }
        }
    };
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failed) throw NumericalFailure("grid cell failed: " + error_message);

    // deterministic reduction, row-major; strict > keeps the first (smallest
    // t_0, then smallest t_on) on ties
    double best = -std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n0; ++i)
        for (std::size_t j = 0; j < n1; ++j) {
            const double v =
                res.surface(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (v > best) { best = v; bi = i; bj = j; }
        }
    res.best_fidelity = best;
    res.best_t_0 = grid.t_0_values[bi];
    res.best_t_on = grid.t_on_values[bj];
    return res;
}

LifetimeFit fit_lifetime(const evolve::FidelityTrace& trace) {
    std::vector<double> t, y;
    bool all_unit = true;
    std::size_t total = 0;
    for (std::size_t i = 0; i < trace.time.size(); ++i) {
        if (trace.time[i] <= 0.0) continue;  // t = 0 carries no decay information
        const double f = trace.f_target.empty() ? trace.f_bright[i] : trace.f_target[i];
        if (!(f > 0.0) || f > 1.0 + 1e-12)
            throw InvalidArgument("fit_lifetime needs fidelities in (0, 1]");
        ++total;
        if (f < 1.0 - 1e-12) all_unit = false;
        if (f > 0.05) {
            t.push_back(trace.time[i]);
            y.push_back(std::log(f));
        }
    }
    if (total < 8) throw InsufficientData("lifetime fit needs >= 8 stroboscopic samples");
    if (all_unit)
        return {std::numeric_limits<double>::infinity(), 1.0, 0.0};
    if (t.size() < 2) throw InsufficientData("fewer than 2 samples above the 0.05 floor");

    // least squares for y = log A - t / tau
    const double n = static_cast<double>(t.size());
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        st += t[i]; sy += y[i]; stt += t[i] * t[i]; sty += t[i] * y[i];
    }
    const double det = n * stt - st * st;
    if (det == 0.0) throw InsufficientData("degenerate time grid");
    const double slope = (n * sty - st * sy) / det;
    const double intercept = (sy - slope * st) / n;
    if (!(slope < 0.0))
        throw NonDecayingTrace("best-fit lifetime is not positive (slope " +
                               std::to_string(slope) + ")");
    LifetimeFit fit;
    fit.tau = -1.0 / slope;
    fit.amplitude = std::exp(intercept);
    double ss = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = std::exp(y[i]) - fit.amplitude * std::exp(-t[i] / fit.tau);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

double improvement_factor(double tau, double sigma, double gamma) {
    if (sigma < 0.0 || gamma < 0.0) throw InvalidArgument("rates must be >= 0");
    if (sigma == 0.0 && gamma == 0.0)
        throw BothRatesZero("improvement factor needs sigma > 0 or gamma > 0");
    double reference = 0.0;  // max over the finite loss timescales
    if (sigma > 0.0) reference = std::max(reference, 1.0 / sigma);
    if (gamma > 0.0) reference = std::max(reference, 1.0 / gamma);
    return tau / reference;
}

}  // namespace spinvault::optimize
