#include "spinvault/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

namespace spinvault::config {

Experiment experiment_from_string(const std::string& name) {
    if (name == "FreeDynamics") return Experiment::FreeDynamics;
    if (name == "Unmodulated") return Experiment::Unmodulated;
    if (name == "Modulated") return Experiment::Modulated;
    if (name == "GridTon") return Experiment::GridTon;
    if (name == "GridT0") return Experiment::GridT0;
    if (name == "PauliSuite") return Experiment::PauliSuite;
    if (name == "OracleCheck") return Experiment::OracleCheck;
    throw ConfigInvalid("unknown experiment '" + name + "'");
}

std::string to_string(Experiment e) {
    switch (e) {
        case Experiment::FreeDynamics: return "FreeDynamics";
        case Experiment::Unmodulated: return "Unmodulated";
        case Experiment::Modulated: return "Modulated";
        case Experiment::GridTon: return "GridTon";
        case Experiment::GridT0: return "GridT0";
        case Experiment::PauliSuite: return "PauliSuite";
        case Experiment::OracleCheck: return "OracleCheck";
    }
    return "?";
}

double RunConfig::t_pi() const { return std::numbers::pi / g_eff_over_sigma; }
double RunConfig::t_sigma() const { return 2.0 * std::numbers::pi; }
double RunConfig::t_on() const { return t_on_over_tpi * t_pi(); }
double RunConfig::t0() const { return t0_over_Tsigma * t_sigma(); }
double RunConfig::period() const { return t0() + t_on(); }

std::string RunConfig::to_json() const {
    nlohmann::json j;
    j["experiment"] = to_string(experiment);
    j["g_eff_over_sigma"] = g_eff_over_sigma;
    j["gamma_over_sigma"] = gamma_over_sigma;
    j["delta_over_sigma"] = delta_over_sigma;
    j["m"] = m;
    j["t_on_over_tpi"] = t_on_over_tpi;
    j["t0_over_Tsigma"] = t0_over_Tsigma;
    j["n_periods"] = n_periods;
    j["samples_per_period"] = samples_per_period;
    j["n_spins"] = n_spins;
    j["seed"] = seed;
    j["output_dir"] = output_dir.string();
    return j.dump(2);
}

namespace {

const std::set<std::string> kKnownKeys = {
    "experiment",      "g_eff_over_sigma", "gamma_over_sigma",
    "delta_over_sigma", "m",               "t_on_over_tpi",
    "t0_over_Tsigma",  "n_periods",        "samples_per_period",
    "n_spins",         "seed",             "output_dir",
};

double require_number(const nlohmann::json& j, const std::string& key) {
    if (!j.at(key).is_number())
        throw ConfigInvalid("key '" + key + "' must be a number");
    return j.at(key).get<double>();
}

long require_integer(const nlohmann::json& j, const std::string& key) {
    if (!j.at(key).is_number_integer())
        throw ConfigInvalid("key '" + key + "' must be an integer");
    return j.at(key).get<long>();
}

}  // namespace

RunConfig validate_config(const std::string& raw) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("config is not valid JSON at byte " + std::to_string(e.byte) +
                         ": " + e.what());
    }
    if (!j.is_object()) throw ParseError("config must be a flat JSON object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!kKnownKeys.contains(key))
            throw UnknownKey("unknown config key '" + key + "'");
    }

    RunConfig c;
    if (!j.contains("experiment")) throw MissingRequired("experiment");
    if (!j.at("experiment").is_string())
        throw ConfigInvalid("key 'experiment' must be a string");
    c.experiment = experiment_from_string(j.at("experiment").get<std::string>());

    if (!j.contains("g_eff_over_sigma")) throw MissingRequired("g_eff_over_sigma");
    c.g_eff_over_sigma = require_number(j, "g_eff_over_sigma");
    if (!(c.g_eff_over_sigma > 0.0))
        throw ConfigInvalid("g_eff_over_sigma must be > 0");

    if (j.contains("gamma_over_sigma")) c.gamma_over_sigma = require_number(j, "gamma_over_sigma");
    if (c.gamma_over_sigma < 0.0) throw ConfigInvalid("gamma_over_sigma must be >= 0");

    c.delta_over_sigma = 400.0 * c.g_eff_over_sigma;
    if (j.contains("delta_over_sigma")) c.delta_over_sigma = require_number(j, "delta_over_sigma");
    if (c.delta_over_sigma < 0.0) throw ConfigInvalid("delta_over_sigma must be >= 0");

    if (j.contains("m")) c.m = require_integer(j, "m");
    if (c.m < 2) throw ConfigInvalid("m must be >= 2");

    if (j.contains("t_on_over_tpi")) c.t_on_over_tpi = require_number(j, "t_on_over_tpi");
    if (!(c.t_on_over_tpi > 0.0)) throw ConfigInvalid("t_on_over_tpi must be > 0");

    if (j.contains("t0_over_Tsigma")) c.t0_over_Tsigma = require_number(j, "t0_over_Tsigma");
    if (!(c.t0_over_Tsigma > 0.0)) throw ConfigInvalid("t0_over_Tsigma must be > 0");

    if (j.contains("n_periods")) c.n_periods = require_integer(j, "n_periods");
    if (c.n_periods < 1) throw ConfigInvalid("n_periods must be >= 1");

    if (j.contains("samples_per_period"))
        c.samples_per_period = require_integer(j, "samples_per_period");
    if (c.samples_per_period < 1) throw ConfigInvalid("samples_per_period must be >= 1");

    if (j.contains("n_spins")) c.n_spins = require_integer(j, "n_spins");
    if (c.n_spins < 1) throw ConfigInvalid("n_spins must be >= 1");

    if (j.contains("seed")) {
        if (!j.at("seed").is_number_integer())
            throw ConfigInvalid("key 'seed' must be an integer");
        c.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("output_dir")) {
        if (!j.at("output_dir").is_string())
            throw ConfigInvalid("key 'output_dir' must be a string");
        c.output_dir = j.at("output_dir").get<std::string>();
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigInvalid("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return validate_config(ss.str());
}

}  // namespace spinvault::config
