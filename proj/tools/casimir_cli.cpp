// casimir: parameter sweeps of thermal Casimir observables as CSV or JSON.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "casimir/errors.hpp"
#include "casimir/sweep.hpp"

namespace {

using casimir::cli::Command;
using casimir::cli::RunConfig;

constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCompute = 3;

void add_common_options(CLI::App& sub, RunConfig& cfg, std::string& gap_range, bool& log_spacing,
                        std::string& format) {
    auto& m = cfg.material;
    sub.add_option("--model", m.model, "drude | plasma | ideal | table")->capture_default_str();
    sub.add_option("--omega-p", m.omega_p_ev, "plasma frequency in eV")->capture_default_str();
    sub.add_option("--nu", m.nu_ev, "relaxation frequency in eV (default 0.035, or 0.0356 at 300 K with bg)");
    sub.add_option("--nu-model", m.nu_model, "constant | bg (Bloch-Grueneisen)")->capture_default_str();
    sub.add_option("--theta-d", m.theta_d_k, "Debye temperature in K for --nu-model bg")->capture_default_str();
    sub.add_option("--table", m.table_path, "CSV of zeta_rad_per_s,epsilon for --model table");
    sub.add_option("--zero-mode", m.zero_mode, "drude_like | plasma_like, required with --model table");
    sub.add_option("--gap", cfg.gap_um, "single gap in micrometres");
    sub.add_option("--gap-range", gap_range, "lo:hi:n in micrometres");
    sub.add_flag("--log-spacing", log_spacing, "log-spaced --gap-range");
    sub.add_option("--temp", cfg.temperatures_k, "temperature in K (repeatable)");
    sub.add_option("--radius", cfg.radius_um, "sphere radius in micrometres");
    sub.add_option("--rel-tol", cfg.rel_tol, "relative tolerance")->capture_default_str();
    sub.add_option("--format", format, "csv | json")->capture_default_str();
    sub.add_option("--out", cfg.out_path, "output file (default stdout)");
    sub.add_option("--threads", cfg.threads, "worker threads for rows")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thermal Casimir pressure, free energy and sphere-plate force sweeps"};
    app.set_version_flag("--version", casimir::cli::kToolVersion);
    app.require_subcommand(1);

    RunConfig cfg;
    std::string gap_range;
    bool log_spacing = false;
    std::string format = "csv";

    const std::pair<const char*, const char*> commands[] = {
        {"pressure", "magnitude of the plate pressure in Pa"},
        {"diff", "pressure and free-energy differences between two temperatures"},
        {"modes", "per-Matsubara-mode share of the pressure in percent"},
        {"sphere-plate", "proximity-force sphere-plate force difference"},
        {"lowtemp", "low-temperature T^2 fit of the free energy"},
        {"impedance-check", "surface-impedance TE reflection versus Fresnel"},
    };
    for (const auto& [name, help] : commands) {
        add_common_options(*app.add_subcommand(name, help), cfg, gap_range, log_spacing, format);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        cfg.command = casimir::cli::parse_command(app.get_subcommands().front()->get_name());
        if (!gap_range.empty()) cfg.gap_range = casimir::cli::parse_gap_range(gap_range, log_spacing);
        if (format == "csv") {
            cfg.format = casimir::cli::OutputFormat::Csv;
        } else if (format == "json") {
            cfg.format = casimir::cli::OutputFormat::Json;
        } else {
            throw casimir::ConfigError("--format: expected csv|json, got '" + format + "'");
        }

        const auto output = casimir::cli::run(cfg);
        const std::string text = cfg.format == casimir::cli::OutputFormat::Json ? casimir::cli::to_json(output)
                                                                                : casimir::cli::to_csv(output);
        if (cfg.out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream file(cfg.out_path, std::ios::binary);
            if (!file) throw casimir::ConfigError("--out: cannot open '" + cfg.out_path + "'");
            file << text;
        }
        return 0;
    } catch (const casimir::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const casimir::UnsupportedModelError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const casimir::ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return kExitCompute;
    } catch (const casimir::FitError& e) {
        std::cerr << "fit error: " << e.what() << "\n";
        return kExitCompute;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOther;
    }
}
