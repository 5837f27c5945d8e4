#include "spinvault/experiments.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "spinvault/ensemble.hpp"
#include "spinvault/evolve.hpp"
#include "spinvault/floquet.hpp"
#include "spinvault/io.hpp"
#include "spinvault/krylov.hpp"
#include "spinvault/optimize.hpp"
#include "spinvault/protocol.hpp"
#include "spinvault/qubit.hpp"

namespace spinvault::experiments {

namespace {

using config::Experiment;
using config::RunConfig;
using nlohmann::json;

krylov::KrylovChain make_chain(const RunConfig& c) {
    ensemble::EnsembleMoments mom;
    mom.g_eff = c.g_eff_over_sigma;
    mom.sigma = 1.0;
    return krylov::gaussian_chain(mom, static_cast<std::size_t>(c.m));
}

json fit_json(const evolve::FidelityTrace& trace) {
    json out;
    try {
        const auto fit = optimize::fit_lifetime(trace.stroboscopic());
        out["tau"] = std::isinf(fit.tau) ? json("inf") : json(fit.tau);
        out["tau_over_period"] =
            std::isinf(fit.tau) ? json("inf") : json(fit.tau / trace.period);
        out["amplitude"] = fit.amplitude;
        out["residual"] = fit.residual;
    } catch (const Error& e) {
        out["error"] = e.category();
        out["message"] = e.what();
    }
    return out;
}

json run_free(const RunConfig& c, const std::filesystem::path& dir) {
    const auto chain = make_chain(c);
    const auto schedule = protocol::free_spins(c.period());
    auto trace = evolve::bright_trace(chain, schedule, 0.0, c.n_periods,
                                      static_cast<int>(c.samples_per_period));
    trace.label = "free";
    io::write_trace_csv(dir / "trace_free.csv", trace);
    json r;
    r["trace"] = "trace_free.csv";
    r["final_f_bright"] = trace.f_bright.back();
    r["lifetime_fit"] = fit_json(trace);
    return r;
}

json run_unmodulated(const RunConfig& c, const std::filesystem::path& dir) {
    const auto chain = make_chain(c);
    const auto schedule = protocol::unmodulated(c.period());
    auto trace = evolve::bright_trace(chain, schedule, c.gamma_over_sigma, c.n_periods,
                                      static_cast<int>(c.samples_per_period));
    trace.label = "unmodulated";
    io::write_trace_csv(dir / "trace_unmodulated.csv", trace);
    json r;
    r["trace"] = "trace_unmodulated.csv";
    r["final_f_bright"] = trace.f_bright.back();
    r["lifetime_fit"] = fit_json(trace);
    return r;
}

json run_modulated(const RunConfig& c, const std::filesystem::path& dir) {
    const auto chain = make_chain(c);
    const auto schedule =
        protocol::paper_protocol(c.t0(), c.t_on(), c.delta_over_sigma);
    auto trace = evolve::bright_trace(chain, schedule, c.gamma_over_sigma, c.n_periods,
                                      static_cast<int>(c.samples_per_period));
    trace.label = "modulated";
    io::write_trace_csv(dir / "trace_modulated.csv", trace);
    json r;
    r["trace"] = "trace_modulated.csv";
    r["final_f_bright"] = trace.f_bright.back();
    if (c.n_periods >= 7) {
        const auto strobe = trace.stroboscopic();
        r["f_bright_at_7T"] = strobe.f_bright.at(7);
    }
    r["lifetime_fit"] = fit_json(trace);
    try {
        const auto fit = optimize::fit_lifetime(trace.stroboscopic());
        if (!std::isinf(fit.tau))
            r["improvement_factor"] =
                optimize::improvement_factor(fit.tau, 1.0, c.gamma_over_sigma);
    } catch (const Error&) {
        // no decaying fit, factor omitted
    }
    return r;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

json run_grid_ton(const RunConfig& c, const std::filesystem::path& dir,
                  unsigned n_threads) {
    const auto chain = make_chain(c);
    optimize::GridSpec grid;
    for (double x = 0.1; x <= 4.0 + 1e-9; x += 0.05)
        grid.t_on_values.push_back(x * c.t_pi());
    grid.t_0_values = {c.t0()};

    json r;
    grid.objective = {optimize::Objective::Type::FloquetF1, 1, 0.0};
    const auto floq =
        optimize::grid_search(chain, 0.0, c.delta_over_sigma, grid, n_threads);
    io::write_surface_csv(dir / "grid_ton_floquet.csv", grid.t_on_values,
                          grid.t_0_values, floq.surface);
    r["floquet"] = {{"surface", "grid_ton_floquet.csv"},
                    {"best_t_on_over_tpi", floq.best_t_on / c.t_pi()},
                    {"best_fidelity", floq.best_fidelity}};

    grid.objective = {optimize::Objective::Type::LindbladFn, 5, 0.0};
    const auto me = optimize::grid_search(chain, c.gamma_over_sigma,
                                          c.delta_over_sigma, grid, n_threads);
    io::write_surface_csv(dir / "grid_ton_lindblad.csv", grid.t_on_values,
                          grid.t_0_values, me.surface);
    r["lindblad_n5"] = {{"surface", "grid_ton_lindblad.csv"},
                        {"best_t_on_over_tpi", me.best_t_on / c.t_pi()},
                        {"best_fidelity", me.best_fidelity}};
    return r;
}

json run_grid_t0(const RunConfig& c, const std::filesystem::path& dir,
                 unsigned n_threads) {
    const auto chain = make_chain(c);
    optimize::GridSpec grid;
    grid.t_on_values = {c.t_on()};
    for (double f : linspace(0.01, 1.0, 60)) grid.t_0_values.push_back(f * c.t_sigma());

    json r;
    grid.objective = {optimize::Objective::Type::FloquetF1, 1, 0.0};
    const auto floq =
        optimize::grid_search(chain, 0.0, c.delta_over_sigma, grid, n_threads);
    io::write_surface_csv(dir / "grid_t0_floquet.csv", grid.t_on_values,
                          grid.t_0_values, floq.surface);
    r["floquet"] = {{"surface", "grid_t0_floquet.csv"},
                    {"best_t0_over_Tsigma", floq.best_t_0 / c.t_sigma()},
                    {"best_fidelity", floq.best_fidelity}};

    // equal-total-time dissipative comparison: five periods of the reference
    // protocol t_0 = 0.1 T_sigma
    const double horizon = 5.0 * (0.1 * c.t_sigma() + c.t_on());
    grid.objective = {optimize::Objective::Type::LindbladFixedHorizon, 5, horizon};
    const auto me = optimize::grid_search(chain, c.gamma_over_sigma,
                                          c.delta_over_sigma, grid, n_threads);
    io::write_surface_csv(dir / "grid_t0_lindblad.csv", grid.t_on_values,
                          grid.t_0_values, me.surface);
    r["lindblad_fixed_horizon"] = {{"surface", "grid_t0_lindblad.csv"},
                                   {"horizon", horizon},
                                   {"best_t0_over_Tsigma", me.best_t_0 / c.t_sigma()},
                                   {"best_fidelity", me.best_fidelity}};
    return r;
}

json run_pauli(const RunConfig& c, const std::filesystem::path& dir) {
    const auto chain = make_chain(c);
    const auto schedule =
        protocol::paper_protocol(c.t0(), c.t_on(), c.delta_over_sigma);
    const auto suite =
        qubit::pauli_suite(chain, schedule, c.gamma_over_sigma, c.n_periods,
                           static_cast<int>(c.samples_per_period));
    json r;
    for (const auto& [label, traces] : suite) {
        std::string file = "pauli_" + label + ".csv";
        for (auto& ch : file)  // shell-safe names: z+ -> zp, z- -> zm
            if (ch == '+') ch = 'p'; else if (ch == '-') ch = 'm';
        io::write_pauli_csv(dir / file, traces.modulated, traces.unmodulated);
        json entry;
        entry["csv"] = file;
        entry["lifetime_fit_modulated"] = fit_json(traces.modulated);
        r[label] = entry;
    }
    return r;
}

json run_oracle_check(const RunConfig& c, const std::filesystem::path& dir) {
    const auto spec = ensemble::sample_explicit(
        0.0, 1.0, c.g_eff_over_sigma, static_cast<std::size_t>(c.n_spins), c.seed);
    const auto chain = krylov::lanczos_chain(spec, static_cast<std::size_t>(c.m));
    const auto full = krylov::full_space_hamiltonian(spec, 0.0);
    const auto times = linspace(0.0, 5.0, 101);
    const auto a_chain = krylov::chain_survival_amplitude(chain, 0.0, times);
    const auto a_full = krylov::full_survival_amplitude(full, times);
    double max_err = 0.0;
    io::CsvWriter w(dir / "oracle_check.csv",
                    {"time", "re_chain", "im_chain", "re_full", "im_full", "abs_diff"});
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double d = std::abs(a_chain[i] - a_full[i]);
        max_err = std::max(max_err, d);
        w.row({times[i], a_chain[i].real(), a_chain[i].imag(), a_full[i].real(),
               a_full[i].imag(), d});
    }
    w.close();
    json r;
    r["csv"] = "oracle_check.csv";
    r["n_spins"] = c.n_spins;
    r["chain_m"] = chain.m;
    r["max_abs_amplitude_error"] = max_err;
    return r;
}

}  // namespace

ExitReport run(const RunConfig& c, unsigned n_threads) {
    const auto t_begin = std::chrono::steady_clock::now();
    json report;
    report["config"] = json::parse(c.to_json());
    report["derived"] = {{"t_pi", c.t_pi()},
                         {"T_sigma", c.t_sigma()},
                         {"t_on", c.t_on()},
                         {"t_0", c.t0()},
                         {"period", c.period()}};
    ExitReport out;
    try {
        std::error_code ec;
        std::filesystem::create_directories(c.output_dir, ec);
        {  // fail early if the directory cannot take files
            std::ofstream probe(c.output_dir / ".spinvault_probe", std::ios::binary);
            if (!probe) throw OutputUnwritable("cannot write into " + c.output_dir.string());
        }
        std::filesystem::remove(c.output_dir / ".spinvault_probe", ec);

        json results;
        switch (c.experiment) {
            case Experiment::FreeDynamics: results = run_free(c, c.output_dir); break;
            case Experiment::Unmodulated: results = run_unmodulated(c, c.output_dir); break;
            case Experiment::Modulated: results = run_modulated(c, c.output_dir); break;
            case Experiment::GridTon: results = run_grid_ton(c, c.output_dir, n_threads); break;
            case Experiment::GridT0: results = run_grid_t0(c, c.output_dir, n_threads); break;
            case Experiment::PauliSuite: results = run_pauli(c, c.output_dir); break;
            case Experiment::OracleCheck: results = run_oracle_check(c, c.output_dir); break;
        }
        report["results"] = results;
        out.exit_code = 0;
    } catch (const Error& e) {
        report["error"] = {{"category", e.category()}, {"message", e.what()}};
        const std::string& cat = e.category();
        if (cat == "OutputUnwritable") out.exit_code = 3;
        else if (cat == "ConfigInvalid" || cat == "ParseError" || cat == "UnknownKey" ||
                 cat == "MissingRequired") out.exit_code = 2;
        else out.exit_code = 4;
    } catch (const std::exception& e) {
        report["error"] = {{"category", "NumericalFailure"}, {"message", e.what()}};
        out.exit_code = 4;
    }
    const auto t_end = std::chrono::steady_clock::now();
    report["wall_clock_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t_end - t_begin).count();
    out.report_json = report.dump(2);
    if (out.exit_code == 0 || out.exit_code == 4) {
        std::ofstream rep(c.output_dir / "report.json", std::ios::binary);
        if (rep) rep << out.report_json << '\n';
    }
    return out;
}

}  // namespace spinvault::experiments
