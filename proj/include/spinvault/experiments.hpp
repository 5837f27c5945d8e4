#pragma once

#include <string>

#include "spinvault/config.hpp"

namespace spinvault::experiments {

struct ExitReport {
    int exit_code = 0;            // 0 ok, 2 config, 3 output, 4 numerical
    std::string report_json;      // resolved config + results, or the error
};

// Executes the configured experiment, writes its CSV traces and report.json
// into config.output_dir, and returns the report. Never throws; failures are
// encoded in the exit code and report.
ExitReport run(const config::RunConfig& config, unsigned n_threads = 0);

}  // namespace spinvault::experiments
