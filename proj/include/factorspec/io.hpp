#pragma once

// File formats.  CSV files carry `# key=value` header comments echoing the
// full run configuration (seed and tool version included) ahead of a fixed
// column header; JSON reports embed the same map as a "config" object.
// Reals are written with 17 significant digits so round-trips are exact.

#include "factorspec/ensemble.hpp"
#include "factorspec/inversion.hpp"
#include "factorspec/spacing.hpp"
#include "factorspec/spectrum.hpp"
#include "factorspec/trap.hpp"
#include "factorspec/util.hpp"
#include "factorspec/version.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace fspec {

using RunConfig = std::vector<std::pair<std::string, std::string>>;

inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline RunConfig base_config(const std::string& command) {
    return {{"tool", "factorspec"}, {"version", kVersion}, {"command", command}};
}

namespace detail {

inline void write_config_comments(std::ostream& out, const RunConfig& config) {
    for (const auto& [key, value] : config) out << "# " << key << "=" << value << "\n";
}

inline nlohmann::json config_json(const RunConfig& config) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [key, value] : config) j[key] = value;
    return j;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open for writing: " + path);
    return out;
}

inline std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open: " + path);
    return in;
}

// next non-comment line; false at EOF
inline bool next_data_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        const std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    }
    return false;
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream iss(line);
    while (std::getline(iss, field, ',')) out.push_back(field);
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// EnergyRecord CSV: N,x,y,j,E,p,q

inline void write_energy_csv(const std::string& path, const std::vector<EnergyRecord>& records,
                             const RunConfig& config) {
    auto out = detail::open_out(path);
    detail::write_config_comments(out, config);
    out << "N,x,y,j,E,p,q\n";
    for (const auto& rec : records) {
        out << to_string(rec.sp.n) << ',' << to_string(rec.sp.x) << ',' << to_string(rec.sp.y)
            << ',' << rec.j << ',' << format_real(rec.e) << ',' << format_real(rec.p) << ','
            << format_real(rec.q) << "\n";
    }
}

// Re-imports the same CSV (or externally generated moduli in that format).
// pi(x) and pi(y) are reconstructed exactly from j(q -+ p).
inline std::vector<EnergyRecord> read_energy_csv(const std::string& path) {
    auto in = detail::open_in(path);
    std::string line;
    if (!detail::next_data_line(in, line) || line != "N,x,y,j,E,p,q")
        throw ValidationError(path + ": expected header N,x,y,j,E,p,q");
    std::vector<EnergyRecord> records;
    std::size_t lineno = 1;
    while (detail::next_data_line(in, line)) {
        ++lineno;
        const auto fields = detail::split_csv(line);
        if (fields.size() != 7)
            throw ValidationError(path + ": malformed row " + std::to_string(lineno));
        EnergyRecord rec;
        try {
            rec.sp.n = parse_wide(fields[0]);
            rec.sp.x = parse_wide(fields[1]);
            rec.sp.y = parse_wide(fields[2]);
            rec.j = std::stoull(fields[3]);
            rec.e = std::stod(fields[4]);
            rec.p = std::stod(fields[5]);
            rec.q = std::stod(fields[6]);
        } catch (const std::exception&) {
            throw ValidationError(path + ": unparsable field at row " + std::to_string(lineno));
        }
        rec.sp.n_bits = bit_length(rec.sp.n);
        rec.h = std::sqrt(to_double(rec.sp.n));
        rec.pi_x = static_cast<std::uint64_t>(std::llround(rec.j * (rec.q - rec.p)));
        rec.pi_y = static_cast<std::uint64_t>(std::llround(rec.j * (rec.q + rec.p)));
        if (rec.sp.x * rec.sp.y != rec.sp.n)
            throw ValidationError(path + ": N != x*y at row " + std::to_string(lineno));
        if (rec.sp.x > rec.sp.y)
            throw ValidationError(path + ": x > y at row " + std::to_string(lineno));
        records.push_back(std::move(rec));
    }
    return records;
}

// ---------------------------------------------------------------------------
// SimulatorSpectrum JSON: {n_bits, lines: [{k, l, E, weight, g}]}

inline void write_spectrum_json(const std::string& path, const SimulatorSpectrum& spec,
                                const RunConfig& config) {
    nlohmann::json j;
    j["config"] = detail::config_json(config);
    j["n_bits"] = spec.n_bits;
    j["lines"] = nlohmann::json::array();
    for (const auto& line : spec.lines) {
        j["lines"].push_back({{"k", line.k},
                              {"l", line.l},
                              {"E", format_real(line.e)},
                              {"weight", format_real(line.weight)},
                              {"g", format_real(line.g)}});
    }
    auto out = detail::open_out(path);
    out << j.dump(1) << "\n";
}

inline SimulatorSpectrum read_spectrum_json(const std::string& path) {
    auto in = detail::open_in(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path + ": bad JSON (" + e.what() + ")");
    }
    if (!j.contains("n_bits") || !j.contains("lines"))
        throw ValidationError(path + ": spectrum JSON needs n_bits and lines");
    SimulatorSpectrum spec;
    try {
        spec.n_bits = j["n_bits"].get<unsigned>();
        spec.h = spectrum_h(spec.n_bits);
        spec.q0 = std::pow(spec.h, 1.0 / 3.0) / std::log(spec.h);
        for (const auto& item : j["lines"]) {
            SpectrumLine line;
            line.k = item.at("k").get<int>();
            line.l = item.at("l").get<int>();
            line.e = std::stod(item.at("E").get<std::string>());
            line.weight = std::stod(item.at("weight").get<std::string>());
            line.g = std::stod(item.at("g").get<std::string>());
            spec.lines.push_back(line);
        }
    } catch (const std::exception& e) {
        throw ValidationError(path + ": bad spectrum JSON (" + e.what() + ")");
    }
    return spec;
}

// ---------------------------------------------------------------------------
// SpacingSample CSV: i,ell,s

inline void write_spacing_csv(const std::string& path, const SpacingSample& sample,
                              const RunConfig& config) {
    auto out = detail::open_out(path);
    detail::write_config_comments(out, config);
    out << "i,ell,s\n";
    for (std::size_t r = 0; r < sample.s.size(); ++r)
        out << sample.idx[r] << ',' << sample.ell[r] << ',' << format_real(sample.s[r]) << "\n";
}

inline SpacingSample read_spacing_csv(const std::string& path) {
    auto in = detail::open_in(path);
    std::string line;
    if (!detail::next_data_line(in, line) || line != "i,ell,s")
        throw ValidationError(path + ": expected header i,ell,s");
    SpacingSample sample;
    std::size_t lineno = 1;
    while (detail::next_data_line(in, line)) {
        ++lineno;
        const auto fields = detail::split_csv(line);
        if (fields.size() != 3)
            throw ValidationError(path + ": malformed row " + std::to_string(lineno));
        try {
            sample.idx.push_back(std::stoull(fields[0]));
            sample.ell.push_back(std::stoi(fields[1]));
            sample.s.push_back(std::stod(fields[2]));
        } catch (const std::exception&) {
            throw ValidationError(path + ": unparsable field at row " + std::to_string(lineno));
        }
    }
    return sample;
}

// ---------------------------------------------------------------------------
// FitReport JSON

inline void write_fit_json(const std::string& path, const FitReport& report,
                           const RunConfig& config) {
    nlohmann::json j;
    j["config"] = detail::config_json(config);
    auto model = [](const ModelFit& fit) {
        return nlohmann::json{{"log_likelihood", fit.log_likelihood},
                              {"ks", fit.ks},
                              {"chi2", fit.chi2}};
    };
    j["gue"] = model(report.gue);
    j["goe"] = model(report.goe);
    j["poisson"] = model(report.poisson);
    j["best_model"] = model_name(report.best_model);
    auto out = detail::open_out(path);
    out << j.dump(1) << "\n";
}

inline void write_histogram_csv(const std::string& path, const FitReport& report,
                                const RunConfig& config) {
    auto out = detail::open_out(path);
    detail::write_config_comments(out, config);
    out << "bin_low,bin_high,count\n";
    for (std::size_t b = 0; b < report.bin_counts.size(); ++b)
        out << format_real(report.bin_edges[b]) << ',' << format_real(report.bin_edges[b + 1])
            << ',' << report.bin_counts[b] << "\n";
}

// ---------------------------------------------------------------------------
// KDE curve CSV, with the asymptotic density normalized on the same support

inline void write_kde_csv(const std::string& path, const KdeCurve& curve,
                          const std::vector<double>& pe_density, const RunConfig& config) {
    if (pe_density.size() != curve.grid.size())
        throw ValidationError("kde csv: density column size mismatch");
    auto out = detail::open_out(path);
    detail::write_config_comments(out, config);
    out << "grid,kde_density,pe_density\n";
    for (std::size_t i = 0; i < curve.grid.size(); ++i)
        out << format_real(curve.grid[i]) << ',' << format_real(curve.density[i]) << ','
            << format_real(pe_density[i]) << "\n";
}

// ---------------------------------------------------------------------------
// Inversion report JSON

inline void write_invert_json(const std::string& path, const InvertReport& report,
                              const RunConfig& config) {
    nlohmann::json j;
    j["config"] = detail::config_json(config);
    j["N"] = to_string(report.n);
    j["n_bits"] = report.n_bits;
    j["success"] = report.success;
    if (report.success) {
        j["x"] = to_string(report.x);
        j["y"] = to_string(report.y);
    }
    j["steps"] = report.steps;
    j["levels_tried"] = report.levels_tried;
    j["gamma_ratio"] = report.gamma_ratio;
    auto out = detail::open_out(path);
    out << j.dump(1) << "\n";
}

// ---------------------------------------------------------------------------
// Trap exports

inline void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                                 const RunConfig& config) {
    auto out = detail::open_out(path);
    detail::write_config_comments(out, config);
    out << "t,xi,zeta\n";
    for (std::size_t i = 0; i < traj.t.size(); ++i)
        out << format_real(traj.t[i]) << ',' << format_real(traj.xi[i]) << ','
            << format_real(traj.zeta[i]) << "\n";
}

inline void write_mathieu_csv(const std::string& path, const MathieuSolution& sol,
                              const RunConfig& config) {
    auto out = detail::open_out(path);
    detail::write_config_comments(out, config);
    out << "tau,rho,rho_dot\n";
    for (std::size_t i = 0; i < sol.tau_grid.size(); ++i)
        out << format_real(sol.tau_grid[i]) << ',' << format_real(sol.rho[i]) << ','
            << format_real(sol.rho_dot[i]) << "\n";
}

inline void write_scan_csv(const std::string& path, const std::vector<ScanCell>& cells,
                           const RunConfig& config) {
    auto out = detail::open_out(path);
    detail::write_config_comments(out, config);
    out << "mu,phi,stable,growth_rate\n";
    for (const auto& cell : cells)
        out << format_real(cell.mu) << ',' << format_real(cell.phi) << ',' << (cell.stable ? 1 : 0)
            << ',' << format_real(cell.growth_rate) << "\n";
}

}  // namespace fspec
