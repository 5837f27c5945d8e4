#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spinvault/config.hpp"
#include "spinvault/experiments.hpp"

namespace {

unsigned resolve_threads(unsigned cli_threads) {
    if (cli_threads > 0) return cli_threads;
    if (const char* env = std::getenv("SPINVAULT_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return 0;  // hardware concurrency
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spinvault - qubit storage in an inhomogeneous spin ensemble"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    unsigned threads = 0;

    auto* run = app.add_subcommand("run", "execute the configured experiment");
    run->add_option("--config", config_path, "JSON config file")->required();
    run->add_option("--out", out_dir, "output directory (overrides config)");
    run->add_option("--threads", threads, "worker threads for grid experiments");

    auto* validate = app.add_subcommand("validate", "parse and echo the resolved config");
    validate->add_option("--config", config_path, "JSON config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        auto cfg = spinvault::config::load_config(config_path);
        if (validate->parsed()) {
            std::cout << cfg.to_json() << '\n';
            return 0;
        }
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        const auto report = spinvault::experiments::run(cfg, resolve_threads(threads));
        std::cout << report.report_json << '\n';
        return report.exit_code;
    } catch (const spinvault::Error& e) {
        std::cerr << "{\"error\":{\"category\":\"" << e.category() << "\",\"message\":\""
                  << e.what() << "\"}}\n";
        const std::string& cat = e.category();
        if (cat == "OutputUnwritable") return 3;
        if (cat == "ConfigInvalid" || cat == "ParseError" || cat == "UnknownKey" ||
            cat == "MissingRequired") return 2;
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\":{\"category\":\"NumericalFailure\",\"message\":\""
                  << e.what() << "\"}}\n";
        return 4;
    }
}
