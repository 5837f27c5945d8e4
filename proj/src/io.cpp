#include "spinvault/io.hpp"

#include <charconv>
#include <fstream>

#include "spinvault/errors.hpp"

namespace spinvault::io {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& columns)
    : path_(path), n_cols_(columns.size()) {
    buffer_ = "# spinvault v1\n";
    for (std::size_t i = 0; i < columns.size(); ++i) {
        buffer_ += columns[i];
        buffer_ += (i + 1 < columns.size()) ? ',' : '\n';
    }
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != n_cols_) throw InvalidArgument("CSV row arity mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        buffer_ += format_double(values[i]);
        buffer_ += (i + 1 < values.size()) ? ',' : '\n';
    }
}

void CsvWriter::close() {
    if (closed_) return;
    std::ofstream out(path_, std::ios::binary);
    if (!out) throw OutputUnwritable("cannot write " + path_.string());
    out.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
    if (!out) throw OutputUnwritable("write failed: " + path_.string());
    closed_ = true;
}

void write_trace_csv(const std::filesystem::path& path,
                     const evolve::FidelityTrace& trace) {
    CsvWriter w(path, {"time", "f_bright", "f_target", "p_G", "p_photon", "p_dark"});
    for (std::size_t i = 0; i < trace.time.size(); ++i)
        w.row({trace.time[i], trace.f_bright[i], trace.f_target[i], trace.p_g[i],
               trace.p_photon[i], trace.p_dark[i]});
    w.close();
}

void write_surface_csv(const std::filesystem::path& path,
                       const std::vector<double>& t_on_values,
                       const std::vector<double>& t_0_values,
                       const Eigen::MatrixXd& surface) {
    CsvWriter w(path, {"t_on", "t_0", "fidelity"});
    for (std::size_t i = 0; i < t_0_values.size(); ++i)
        for (std::size_t j = 0; j < t_on_values.size(); ++j)
            w.row({t_on_values[j], t_0_values[i],
                   surface(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
    w.close();
}

void write_pauli_csv(const std::filesystem::path& path,
                     const evolve::FidelityTrace& modulated,
                     const evolve::FidelityTrace& unmodulated) {
    if (modulated.time.size() != unmodulated.time.size())
        throw InvalidArgument("pauli traces have mismatched sampling");
    CsvWriter w(path, {"time", "fidelity_modulated", "fidelity_unmodulated"});
    for (std::size_t i = 0; i < modulated.time.size(); ++i)
        w.row({modulated.time[i], modulated.f_target[i], unmodulated.f_target[i]});
    w.close();
}

}  // namespace spinvault::io
