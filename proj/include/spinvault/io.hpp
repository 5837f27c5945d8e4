#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "spinvault/evolve.hpp"
#include "spinvault/optimize.hpp"

namespace spinvault::io {

// All CSV output follows one byte-exact contract: first line "# spinvault v1",
// second line the comma-separated column names, LF endings, floats rendered
// in shortest round-trip decimal form (std::to_chars). Identical data gives
// identical bytes on any conforming build.

std::string format_double(double v);

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);
    void close();

private:
    std::string buffer_;
    std::filesystem::path path_;
    std::size_t n_cols_;
    bool closed_ = false;
};

void write_trace_csv(const std::filesystem::path& path, const evolve::FidelityTrace& trace);

void write_surface_csv(const std::filesystem::path& path,
                       const std::vector<double>& t_on_values,
                       const std::vector<double>& t_0_values,
                       const Eigen::MatrixXd& surface);

void write_pauli_csv(const std::filesystem::path& path,
                     const evolve::FidelityTrace& modulated,
                     const evolve::FidelityTrace& unmodulated);

}  // namespace spinvault::io
