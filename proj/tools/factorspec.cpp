// factorspec: batch CLI over the toolkit.  Subcommands cover semiprime
// ensemble sampling, spectrum construction and scaling, unfolding and model
// fitting, kernel density export, spectrum-inversion factoring, and the trap
// simulations.  Every output file embeds the run configuration (seed and
// version included); reruns with the same flags are byte-identical at any
// --threads value.
//
// Exit codes: 0 success, 2 usage, 3 input validation, 4 resource budget.

#include "factorspec/ensemble.hpp"
#include "factorspec/inversion.hpp"
#include "factorspec/io.hpp"
#include "factorspec/primes.hpp"
#include "factorspec/riemann.hpp"
#include "factorspec/spacing.hpp"
#include "factorspec/spectrum.hpp"
#include "factorspec/trap.hpp"
#include "factorspec/version.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

namespace {

using namespace fspec;

// JSON config files: top-level scalars are global options, objects hold the
// options of one subcommand.  Command-line flags override config values.
class JsonConfig : public CLI::Config {
  public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}\n"; }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json j;
        try {
            input >> j;
        } catch (const nlohmann::json::exception& e) {
            throw CLI::ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) throw CLI::ConfigError("config root must be a JSON object");
        std::vector<CLI::ConfigItem> items;
        auto scalar = [](const nlohmann::json& v) -> std::string {
            if (v.is_string()) return v.get<std::string>();
            if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
            return v.dump();
        };
        // depth-first walk; object nesting mirrors subcommand nesting
        std::function<void(const nlohmann::json&, std::vector<std::string>)> walk =
            [&](const nlohmann::json& node, std::vector<std::string> parents) {
                for (const auto& [key, value] : node.items()) {
                    if (value.is_object()) {
                        auto deeper = parents;
                        deeper.push_back(key);
                        walk(value, deeper);
                    } else {
                        CLI::ConfigItem item;
                        item.parents = parents;
                        item.name = key;
                        item.inputs = {scalar(value)};
                        items.push_back(item);
                    }
                }
            };
        walk(j, {});
        return items;
    }
};

std::string u64str(std::uint64_t v) { return std::to_string(v); }

unsigned records_bits(const std::vector<EnergyRecord>& records) {
    if (records.empty()) throw ValidationError("no records in input");
    unsigned bits = records.front().sp.n_bits;
    for (const auto& rec : records) bits = std::max(bits, rec.sp.n_bits);
    return bits;
}

void cmd_gen(unsigned bits, std::size_t count, std::uint64_t seed, unsigned threads,
             const std::string& out) {
    if (bits > 52) throw BudgetError("gen: bits > 52 exceeds the sieve budget");
    if (count == 0) throw ValidationError("gen: count must be positive");
    const auto samples = sample_extended_ensemble(bits, count, seed, threads);
    PrimeCounter counter(PiMode::sieve, (1ull << (bits / 2)) + 8);
    std::vector<EnergyRecord> records(samples.size());
    parallel_for(samples.size(), threads,
                 [&](std::size_t i) { records[i] = make_energy_record(samples[i].x, samples[i].y, counter); });

    RunConfig config = base_config("gen");
    config.emplace_back("bits", u64str(bits));
    config.emplace_back("count", u64str(count));
    config.emplace_back("seed", u64str(seed));
    write_energy_csv(out, records, config);

    std::uint64_t j_lo = ~0ull, j_hi = 0;
    double e_lo = 1e308, e_hi = -1e308;
    for (const auto& rec : records) {
        j_lo = std::min(j_lo, rec.j);
        j_hi = std::max(j_hi, rec.j);
        e_lo = std::min(e_lo, rec.e);
        e_hi = std::max(e_hi, rec.e);
    }
    std::printf("wrote %zu records to %s\n", records.size(), out.c_str());
    std::printf("j range [%llu, %llu], E range [%s, %s]\n", (unsigned long long)j_lo,
                (unsigned long long)j_hi, format_real(e_lo).c_str(), format_real(e_hi).c_str());
}

void cmd_spectrum(unsigned bits, int k_max, const std::string& out) {
    const auto spec = build_spectrum(bits, k_max);
    RunConfig config = base_config("spectrum");
    config.emplace_back("bits", u64str(bits));
    config.emplace_back("k_max", u64str(k_max));
    write_spectrum_json(out, spec, config);
    std::printf("wrote %zu lines (n=%u) to %s\n", spec.lines.size(), spec.n_bits, out.c_str());
}

void cmd_scale(const std::string& in, unsigned target_bits, const std::string& out) {
    const auto spec = read_spectrum_json(in);
    const auto scaled = scale_spectrum(spec, target_bits);
    RunConfig config = base_config("scale");
    config.emplace_back("input", in);
    config.emplace_back("source_bits", u64str(spec.n_bits));
    config.emplace_back("bits", u64str(target_bits));
    write_spectrum_json(out, scaled, config);
    std::printf("scaled %u -> %u bits, %zu lines, %s\n", spec.n_bits, target_bits,
                scaled.lines.size(), out.c_str());
}

void cmd_unfold(const std::string& records_path, int window, int ell_min, int ell_max,
                std::uint64_t seed, const std::string& stencil, const std::string& out) {
    const auto records = read_energy_csv(records_path);
    const unsigned bits = records_bits(records);
    const auto series = build_series(records, bits);
    const StencilMode mode =
        stencil == "literal" ? StencilMode::literal : StencilMode::span_normalized;
    const auto sample = unfold(series, window, ell_min, ell_max, seed, mode);

    RunConfig config = base_config("unfold");
    config.emplace_back("records", records_path);
    config.emplace_back("bits", u64str(bits));
    config.emplace_back("L", u64str(window));
    config.emplace_back("ell_min", u64str(ell_min));
    config.emplace_back("ell_max", u64str(ell_max));
    config.emplace_back("seed", u64str(seed));
    config.emplace_back("stencil", stencil);
    write_spacing_csv(out, sample, config);
    std::printf("wrote %zu spacings to %s (mean %s)\n", sample.s.size(), out.c_str(),
                format_real(mean(sample.s)).c_str());
}

void cmd_fit(const std::string& spacings_path, int bins, const std::string& out,
             const std::string& hist_out) {
    const auto sample = read_spacing_csv(spacings_path);
    const auto report = fit_spacings(sample, bins);
    RunConfig config = base_config("fit");
    config.emplace_back("spacings", spacings_path);
    config.emplace_back("bins", u64str(bins));
    write_fit_json(out, report, config);
    if (!hist_out.empty()) write_histogram_csv(hist_out, report, config);
    std::printf("best model %s  (KS: GUE %.5f, GOE %.5f, Poisson %.5f)\n",
                model_name(report.best_model), report.gue.ks, report.goe.ks, report.poisson.ks);
}

void cmd_kde(const std::string& records_path, double bandwidth, const std::string& out) {
    const auto records = read_energy_csv(records_path);
    const unsigned bits = records_bits(records);
    std::vector<double> values;
    values.reserve(records.size());
    for (const auto& rec : records) values.push_back(rec.e - 1.0);
    const auto curve = kde(values, bandwidth);

    // asymptotic density on the same support, normalized by trapezoid
    const double h = spectrum_h(bits);
    std::vector<double> pe(curve.grid.size(), 0.0);
    for (std::size_t i = 0; i < curve.grid.size(); ++i)
        if (curve.grid[i] > 1e-12) pe[i] = p_energy_density(1.0 + curve.grid[i], h);
    double mass = 0;
    for (std::size_t i = 1; i < pe.size(); ++i)
        mass += 0.5 * (pe[i] + pe[i - 1]) * (curve.grid[i] - curve.grid[i - 1]);
    if (mass > 0)
        for (auto& v : pe) v /= mass;

    RunConfig config = base_config("kde");
    config.emplace_back("records", records_path);
    config.emplace_back("bits", u64str(bits));
    config.emplace_back("bandwidth", bandwidth > 0 ? format_real(bandwidth) : "auto");
    write_kde_csv(out, curve, pe, config);
    std::printf("wrote %zu grid points to %s (bandwidth %s)\n", curve.grid.size(), out.c_str(),
                format_real(curve.bandwidth).c_str());
}

void cmd_invert(const std::string& n_str, const std::string& spectrum_path,
                const std::string& levels_str, std::size_t truncation, const std::string& zeros_path,
                bool exact_pi, std::size_t grid_points, std::uint64_t window_cap,
                std::size_t max_candidates, const std::string& out) {
    const Wide n = parse_wide(n_str);
    InversionConfig cfg;
    cfg.T = truncation;
    cfg.grid_points = grid_points;
    cfg.window_cap = window_cap;
    cfg.use_exact_pi = exact_pi;
    cfg.max_candidates = max_candidates;
    if (!levels_str.empty()) {
        std::istringstream iss(levels_str);
        std::string tok;
        while (std::getline(iss, tok, ',')) {
            try {
                cfg.levels.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw ValidationError("invert: unparsable level '" + tok + "'");
            }
        }
    }

    SimulatorSpectrum spec;
    if (!spectrum_path.empty()) {
        spec = read_spectrum_json(spectrum_path);
        spec = scale_spectrum(spec, bit_length(n));
    } else if (cfg.levels.empty()) {
        throw ValidationError("invert: need --spectrum or --levels");
    }

    ZetaZeroTable table;
    if (!exact_pi) {
        if (zeros_path.empty()) throw ValidationError("invert: varsigma route needs --zeros");
        table = load_zeros(zeros_path);
    }

    auto [factors, report] = invert_spectrum(n, spec, cfg, exact_pi ? nullptr : &table);
    RunConfig config = base_config("invert");
    config.emplace_back("N", n_str);
    config.emplace_back("spectrum", spectrum_path.empty() ? "-" : spectrum_path);
    config.emplace_back("levels", levels_str.empty() ? "-" : levels_str);
    config.emplace_back("T", u64str(truncation));
    config.emplace_back("zeros", zeros_path.empty() ? "-" : zeros_path);
    config.emplace_back("exact_pi", exact_pi ? "1" : "0");
    config.emplace_back("grid_points", u64str(grid_points));
    config.emplace_back("window_cap", u64str(window_cap));
    write_invert_json(out, report, config);
    if (report.success)
        std::printf("factored %s = %s * %s in %llu steps (%zu levels, gamma ratio %.4f)\n",
                    n_str.c_str(), to_string(report.x).c_str(), to_string(report.y).c_str(),
                    (unsigned long long)report.steps, report.levels_tried, report.gamma_ratio);
    else
        std::printf("no factor found for %s (%llu steps over %zu levels)\n", n_str.c_str(),
                    (unsigned long long)report.steps, report.levels_tried);
}

struct TrapFlags {
    double m = 1, e = 1, b_field = 8, omega_z = 2, lambda = 0, omega_lambda = 0.1;
    bool lock = false;
    TrapParams build() const {
        TrapParams p = derive_params(m, e, b_field, omega_z, lambda, omega_lambda);
        return lock ? stroboscopic_lock(p) : p;
    }
    void fill(RunConfig& config) const {
        config.emplace_back("m", format_real(m));
        config.emplace_back("e", format_real(e));
        config.emplace_back("B", format_real(b_field));
        config.emplace_back("omega_z", format_real(omega_z));
        config.emplace_back("lambda", format_real(lambda));
        config.emplace_back("omega_lambda", format_real(omega_lambda));
        config.emplace_back("lock", lock ? "1" : "0");
    }
};

void cmd_trap_modes(const TrapFlags& flags) {
    const TrapParams p = flags.build();
    std::printf("Omega=%s  Phi=%s  omega-=%s  omega+=%s\n", format_real(p.omega_c).c_str(),
                format_real(p.phi_angle).c_str(), format_real(p.omega_minus).c_str(),
                format_real(p.omega_plus).c_str());
    std::printf("omega_hat^2=%s  a=%s  mu=%s  phi_m=%s\n", format_real(p.omega_hat_sq).c_str(),
                format_real(p.a).c_str(), format_real(p.mu).c_str(), format_real(p.phi_m).c_str());
    const auto modes = mode_frequencies(p);
    if (!modes) {
        std::printf("modes: unstable parameters (no real frequencies)\n");
        return;
    }
    std::printf("lambda+=%s  lambda-=%s  c+=%s  c-=%s\n", format_real(modes->lambda_plus).c_str(),
                format_real(modes->lambda_minus).c_str(), format_real(modes->c_plus).c_str(),
                format_real(modes->c_minus).c_str());
}

void cmd_trap_integrate(const TrapFlags& flags, double xi0, double zeta0, double vxi0,
                        double vzeta0, double dt, std::size_t steps, std::size_t sample_every,
                        const std::string& out) {
    const TrapParams p = flags.build();
    const auto traj = integrate_rotating_frame(p, xi0, zeta0, vxi0, vzeta0, dt, steps, sample_every);
    RunConfig config = base_config("trap-integrate");
    flags.fill(config);
    config.emplace_back("xi0", format_real(xi0));
    config.emplace_back("zeta0", format_real(zeta0));
    config.emplace_back("vxi0", format_real(vxi0));
    config.emplace_back("vzeta0", format_real(vzeta0));
    config.emplace_back("dt", format_real(dt));
    config.emplace_back("steps", u64str(steps));
    config.emplace_back("sample_every", u64str(sample_every));
    write_trajectory_csv(out, traj, config);
    std::printf("wrote %zu samples to %s\n", traj.t.size(), out.c_str());
}

void cmd_trap_mathieu(double mu, double phi, double periods, double rho0, double vrho0,
                      double dtau, const std::string& out) {
    const auto sol = integrate_mathieu(mu, phi, periods * M_PI, rho0, vrho0, dtau);
    RunConfig config = base_config("trap-mathieu");
    config.emplace_back("mu", format_real(mu));
    config.emplace_back("phi", format_real(phi));
    config.emplace_back("periods", format_real(periods));
    config.emplace_back("rho0", format_real(rho0));
    config.emplace_back("vrho0", format_real(vrho0));
    config.emplace_back("dtau", format_real(dtau));
    write_mathieu_csv(out, sol, config);
    std::printf("%s (growth rate %s), %zu samples -> %s\n", sol.stable ? "stable" : "unstable",
                format_real(sol.growth_rate).c_str(), sol.tau_grid.size(), out.c_str());
}

void cmd_trap_scan(const std::string& mu_list_str, double phi_min, double phi_max,
                   std::size_t phi_steps, unsigned threads, const std::string& out,
                   const std::string& bands_out) {
    std::vector<double> mu_list;
    {
        std::istringstream iss(mu_list_str);
        std::string tok;
        while (std::getline(iss, tok, ',')) {
            try {
                mu_list.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw ValidationError("trap scan: unparsable mu '" + tok + "'");
            }
        }
    }
    if (mu_list.empty()) throw ValidationError("trap scan: empty mu list");
    if (phi_steps < 2 || !(phi_max > phi_min)) throw ValidationError("trap scan: bad phi grid");
    std::vector<double> phi_grid(phi_steps);
    for (std::size_t i = 0; i < phi_steps; ++i)
        phi_grid[i] = phi_min + (phi_max - phi_min) * static_cast<double>(i) / (phi_steps - 1);

    const auto cells = scan_cells(mu_list, phi_grid, threads);
    RunConfig config = base_config("trap-scan");
    config.emplace_back("mu", mu_list_str);
    config.emplace_back("phi_min", format_real(phi_min));
    config.emplace_back("phi_max", format_real(phi_max));
    config.emplace_back("phi_steps", u64str(phi_steps));
    write_scan_csv(out, cells, config);
    std::printf("wrote %zu cells to %s\n", cells.size(), out.c_str());

    if (!bands_out.empty()) {
        nlohmann::json j;
        j["config"] = nlohmann::json::object();
        for (const auto& [k, v] : config) j["config"][k] = v;
        j["bands"] = nlohmann::json::array();
        for (double mu : mu_list) {
            const auto band = stability_band(mu, phi_min, phi_max);
            if (band)
                j["bands"].push_back({{"mu", mu},
                                      {"phi_low", band->phi_low},
                                      {"phi_high", band->phi_high},
                                      {"phi_center", band->phi_center()}});
        }
        std::ofstream bf(bands_out);
        if (!bf) throw ValidationError("cannot open for writing: " + bands_out);
        bf << j.dump(1) << "\n";
        std::printf("wrote %zu bands to %s\n", j["bands"].size(), bands_out.c_str());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical toolkit for prime-counting statistics, semiprime ensembles,\n"
                 "semiclassical spectra, spectrum-inversion factoring and trap dynamics"};
    app.set_version_flag("--version", std::string("factorspec ") + fspec::kVersion);
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON config file; flags override");

    unsigned threads = 1;
    app.add_option("--threads", threads, "worker threads for batch work")->capture_default_str();

    auto even_bits = CLI::Validator(
        [](std::string& s) {
            const long v = std::strtol(s.c_str(), nullptr, 10);
            if (v < 6 || v % 2 != 0) return std::string("bit size must be even and >= 6");
            return std::string();
        },
        "EVEN_BITS");

    // gen
    unsigned gen_bits = 40;
    std::size_t gen_count = 1000;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "sample semiprime energy records to CSV");
    gen->configurable();
    gen->add_option("--bits", gen_bits, "modulus bit size")->check(even_bits)->capture_default_str();
    gen->add_option("--count", gen_count, "number of records")->capture_default_str();
    gen->add_option("--seed", gen_seed, "master seed")->capture_default_str();
    gen->add_option("--out", gen_out, "output CSV")->required();

    // spectrum
    unsigned sp_bits = 40;
    int sp_kmax = 200;
    std::string sp_out;
    auto* spectrum = app.add_subcommand("spectrum", "build a simulator spectrum (JSON)");
    spectrum->configurable();
    spectrum->add_option("--bits", sp_bits)->check(even_bits)->capture_default_str();
    spectrum->add_option("--k-max", sp_kmax)->capture_default_str();
    spectrum->add_option("--out", sp_out)->required();

    // scale
    std::string sc_in, sc_out;
    unsigned sc_bits = 80;
    auto* scale = app.add_subcommand("scale", "rescale a spectrum to another bit size");
    scale->configurable();
    scale->add_option("--spectrum", sc_in)->required();
    scale->add_option("--bits", sc_bits)->required();
    scale->add_option("--out", sc_out)->required();

    // unfold
    std::string uf_records, uf_out, uf_stencil = "span";
    int uf_window = 1000, uf_ell_min = 1, uf_ell_max = 6;
    std::uint64_t uf_seed = 1;
    auto* unfold_cmd = app.add_subcommand("unfold", "unfolded nearest-level spacings from records");
    unfold_cmd->configurable();
    unfold_cmd->add_option("--records", uf_records)->required();
    unfold_cmd->add_option("--L", uf_window)->capture_default_str();
    unfold_cmd->add_option("--ell-min", uf_ell_min)->capture_default_str();
    unfold_cmd->add_option("--ell-max", uf_ell_max)->capture_default_str();
    unfold_cmd->add_option("--seed", uf_seed)->capture_default_str();
    unfold_cmd->add_option("--stencil", uf_stencil, "span | literal")
        ->check(CLI::IsMember({"span", "literal"}))
        ->capture_default_str();
    unfold_cmd->add_option("--out", uf_out)->required();

    // fit
    std::string fit_in, fit_out, fit_hist;
    int fit_bins = 80;
    auto* fit = app.add_subcommand("fit", "fit spacing sample against GUE/GOE/Poisson");
    fit->configurable();
    fit->add_option("--spacings", fit_in)->required();
    fit->add_option("--bins", fit_bins)->capture_default_str();
    fit->add_option("--out", fit_out, "fit report JSON")->required();
    fit->add_option("--hist", fit_hist, "histogram CSV");

    // kde
    std::string kde_records, kde_out;
    double kde_bw = 0;
    auto* kde_cmd = app.add_subcommand("kde", "Gaussian KDE of (E-1) with the asymptotic overlay");
    kde_cmd->configurable();
    kde_cmd->add_option("--records", kde_records)->required();
    kde_cmd->add_option("--bandwidth", kde_bw, "0 = Silverman")->capture_default_str();
    kde_cmd->add_option("--out", kde_out)->required();

    // invert
    std::string inv_n, inv_spectrum, inv_levels, inv_zeros, inv_out;
    std::size_t inv_T = 1000, inv_grid = 512, inv_maxcand = 256;
    std::uint64_t inv_cap = 1u << 16;
    bool inv_exact = false;
    auto* invert = app.add_subcommand("invert", "factor by spectrum inversion");
    invert->configurable();
    invert->add_option("--n", inv_n, "modulus (decimal)")->required();
    invert->add_option("--spectrum", inv_spectrum, "spectrum JSON (scaled to N's size)");
    invert->add_option("--levels", inv_levels, "comma-separated target levels");
    invert->add_option("--T", inv_T)->capture_default_str();
    invert->add_option("--zeros", inv_zeros, "zero table (varsigma route)");
    invert->add_flag("--exact-pi", inv_exact, "use exact prime counting");
    invert->add_option("--grid-points", inv_grid)->capture_default_str();
    invert->add_option("--window-cap", inv_cap)->capture_default_str();
    invert->add_option("--max-candidates", inv_maxcand)->capture_default_str();
    invert->add_option("--out", inv_out)->required();

    // trap
    auto* trap = app.add_subcommand("trap", "trap dynamics");
    trap->configurable();
    trap->require_subcommand(1);
    TrapFlags tf;
    auto add_trap_params = [&](CLI::App* cmd) {
        cmd->add_option("--mass", tf.m)->capture_default_str();
        cmd->add_option("--charge", tf.e)->capture_default_str();
        cmd->add_option("--B", tf.b_field)->capture_default_str();
        cmd->add_option("--omega-z", tf.omega_z)->capture_default_str();
        cmd->add_option("--lambda", tf.lambda)->capture_default_str();
        cmd->add_option("--omega-lambda", tf.omega_lambda)->capture_default_str();
        cmd->add_flag("--lock", tf.lock, "apply the stroboscopic lock");
    };

    auto* modes = trap->add_subcommand("modes", "print derived frequencies and normal modes");
    modes->configurable();
    add_trap_params(modes);

    double ti_xi0 = 1, ti_zeta0 = 0, ti_vxi0 = 0, ti_vzeta0 = 0, ti_dt = 1e-3;
    std::size_t ti_steps = 100000, ti_sample = 1;
    std::string ti_out;
    auto* integrate = trap->add_subcommand("integrate", "integrate the rotating-frame system");
    integrate->configurable();
    add_trap_params(integrate);
    integrate->add_option("--xi0", ti_xi0)->capture_default_str();
    integrate->add_option("--zeta0", ti_zeta0)->capture_default_str();
    integrate->add_option("--vxi0", ti_vxi0)->capture_default_str();
    integrate->add_option("--vzeta0", ti_vzeta0)->capture_default_str();
    integrate->add_option("--dt", ti_dt)->capture_default_str();
    integrate->add_option("--steps", ti_steps)->capture_default_str();
    integrate->add_option("--sample-every", ti_sample)->capture_default_str();
    integrate->add_option("--out", ti_out)->required();

    double ma_mu = 4, ma_phi = 2, ma_periods = 50, ma_rho0 = 1, ma_vrho0 = 0, ma_dtau = 1e-3;
    std::string ma_out;
    auto* mathieu = trap->add_subcommand("mathieu", "integrate the radial breathing equation");
    mathieu->configurable();
    mathieu->add_option("--mu", ma_mu)->capture_default_str();
    mathieu->add_option("--phi", ma_phi)->capture_default_str();
    mathieu->add_option("--periods", ma_periods)->capture_default_str();
    mathieu->add_option("--rho0", ma_rho0)->capture_default_str();
    mathieu->add_option("--vrho0", ma_vrho0)->capture_default_str();
    mathieu->add_option("--dtau", ma_dtau)->capture_default_str();
    mathieu->add_option("--out", ma_out)->required();

    std::string scan_mu = "4,16,64", scan_out, scan_bands;
    double scan_phi_min = 0, scan_phi_max = 8;
    std::size_t scan_phi_steps = 33;
    auto* scan = trap->add_subcommand("scan", "stability map over (mu, phi)");
    scan->configurable();
    scan->add_option("--mu", scan_mu, "comma-separated mu values")->capture_default_str();
    scan->add_option("--phi-min", scan_phi_min)->capture_default_str();
    scan->add_option("--phi-max", scan_phi_max)->capture_default_str();
    scan->add_option("--phi-steps", scan_phi_steps)->capture_default_str();
    scan->add_option("--out", scan_out)->required();
    scan->add_option("--bands", scan_bands, "band table JSON (Floquet bisection)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed()) cmd_gen(gen_bits, gen_count, gen_seed, threads, gen_out);
        if (spectrum->parsed()) cmd_spectrum(sp_bits, sp_kmax, sp_out);
        if (scale->parsed()) cmd_scale(sc_in, sc_bits, sc_out);
        if (unfold_cmd->parsed())
            cmd_unfold(uf_records, uf_window, uf_ell_min, uf_ell_max, uf_seed, uf_stencil, uf_out);
        if (fit->parsed()) cmd_fit(fit_in, fit_bins, fit_out, fit_hist);
        if (kde_cmd->parsed()) cmd_kde(kde_records, kde_bw, kde_out);
        if (invert->parsed())
            cmd_invert(inv_n, inv_spectrum, inv_levels, inv_T, inv_zeros, inv_exact, inv_grid,
                       inv_cap, inv_maxcand, inv_out);
        if (trap->parsed()) {
            if (modes->parsed()) cmd_trap_modes(tf);
            if (integrate->parsed())
                cmd_trap_integrate(tf, ti_xi0, ti_zeta0, ti_vxi0, ti_vzeta0, ti_dt, ti_steps,
                                   ti_sample, ti_out);
            if (mathieu->parsed())
                cmd_trap_mathieu(ma_mu, ma_phi, ma_periods, ma_rho0, ma_vrho0, ma_dtau, ma_out);
            if (scan->parsed())
                cmd_trap_scan(scan_mu, scan_phi_min, scan_phi_max, scan_phi_steps, threads,
                              scan_out, scan_bands);
        }
    } catch (const fspec::BudgetError& e) {
        std::fprintf(stderr, "resource budget: %s\n", e.what());
        return 4;
    } catch (const fspec::ValidationError& e) {
        std::fprintf(stderr, "input validation: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
