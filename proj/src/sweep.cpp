#include "casimir/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "casimir/errors.hpp"
#include "casimir/geometry.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/thermal.hpp"
#include "casimir/units.hpp"

namespace casimir::cli {

namespace {

[[noreturn]] void rethrow_with_context(const std::exception_ptr& error, const std::string& context) {
    try {
        std::rethrow_exception(error);
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(context + ": " + e.what(), e.estimate(), e.error());
    } catch (const FitError& e) {
        throw FitError(context + ": " + e.what(), e.residual());
    } catch (const ConfigError& e) {
        throw ConfigError(context + ": " + e.what());
    } catch (const UnsupportedModelError& e) {
        throw UnsupportedModelError(context + ": " + e.what());
    } catch (const DomainError& e) {
        throw DomainError(context + ": " + e.what());
    } catch (const RangeError& e) {
        throw RangeError(context + ": " + e.what());
    } catch (const std::exception& e) {
        throw std::runtime_error(context + ": " + e.what());
    }
}

// Evaluates row_fn for every key on `threads` workers. Rows come back in key
// order regardless of scheduling; the first failing row (in key order) is
// rethrown with its key attached.
template <class RowFn>
std::vector<std::vector<double>> compute_rows(const std::vector<double>& keys, int threads, const char* key_label,
                                              RowFn&& row_fn) {
    std::vector<std::vector<double>> rows(keys.size());
    std::vector<std::exception_ptr> errors(keys.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next++; i < keys.size(); i = next++) {
            try {
                rows[i] = row_fn(keys[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    const int n_workers = std::max(1, std::min<int>(threads, static_cast<int>(keys.size())));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_workers);
        for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    }

    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (errors[i]) rethrow_with_context(errors[i], std::string("row ") + key_label + "=" + format_double(keys[i]));
        for (double v : rows[i]) {
            if (!std::isfinite(v)) {
                throw std::runtime_error(std::string("row ") + key_label + "=" + format_double(keys[i]) +
                                         ": non-finite value");
            }
        }
    }
    return rows;
}

std::string temperature_label(double t) { return format_double(t) + "K"; }

std::vector<std::pair<std::string, std::string>> base_meta(const RunConfig& cfg) {
    const auto& k = constants();
    std::vector<std::pair<std::string, std::string>> meta = {
        {"tool", std::string("casimir ") + kToolVersion},
        {"command", command_name(cfg.command)},
        {"constants", k.version},
        {"hbar_J_s", format_double(k.hbar)},
        {"c_m_s", format_double(k.c)},
        {"k_B_J_K", format_double(k.k_B)},
        {"eV_J", format_double(k.eV)},
        {"model", cfg.material.model},
    };
    const auto& m = cfg.material;
    if (m.model == "drude" || m.model == "plasma") meta.emplace_back("omega_p_eV", format_double(m.omega_p_ev));
    if (m.model == "drude") {
        const auto model = build_model(m);
        const auto& params = std::get<Drude>(model).params;
        meta.emplace_back("nu_model", m.nu_model);
        meta.emplace_back("nu_eV", format_double(params.nu_ref_ev()));
        if (m.nu_model == "bg") {
            meta.emplace_back("theta_D_K", format_double(m.theta_d_k));
            meta.emplace_back("nu_ref_T_K", "300");
        }
    }
    if (m.model == "table") {
        meta.emplace_back("table", m.table_path);
        meta.emplace_back("zero_mode", m.zero_mode);
    }
    std::string temps;
    for (double t : cfg.temperatures()) temps += (temps.empty() ? "" : ";") + format_double(t);
    if (cfg.command != Command::ImpedanceCheck || !temps.empty()) meta.emplace_back("temperatures_K", temps);
    meta.emplace_back("rel_tol", format_double(cfg.rel_tol));
    return meta;
}

QuadratureSettings quadrature_for(const RunConfig& cfg) {
    QuadratureSettings q;
    q.rel_tol = cfg.rel_tol;
    return q;
}

void require_temperature_count(const RunConfig& cfg, std::size_t count) {
    if (cfg.temperatures().size() != count) {
        throw ConfigError("--temp: command '" + command_name(cfg.command) + "' takes exactly " +
                          std::to_string(count) + " temperature(s)");
    }
}

}  // namespace

Command parse_command(const std::string& name) {
    if (name == "pressure") return Command::Pressure;
    if (name == "diff") return Command::Diff;
    if (name == "modes") return Command::Modes;
    if (name == "sphere-plate") return Command::SpherePlate;
    if (name == "lowtemp") return Command::LowTemp;
    if (name == "impedance-check") return Command::ImpedanceCheck;
    throw ConfigError("unknown command '" + name + "'");
}

std::string command_name(Command command) {
    switch (command) {
        case Command::Pressure: return "pressure";
        case Command::Diff: return "diff";
        case Command::Modes: return "modes";
        case Command::SpherePlate: return "sphere-plate";
        case Command::LowTemp: return "lowtemp";
        case Command::ImpedanceCheck: return "impedance-check";
    }
    return "unknown";
}

GapRange parse_gap_range(const std::string& text, bool log_spacing) {
    const auto first = text.find(':');
    const auto second = first == std::string::npos ? std::string::npos : text.find(':', first + 1);
    if (second == std::string::npos || text.find(':', second + 1) != std::string::npos) {
        throw ConfigError("--gap-range: expected lo:hi:n, got '" + text + "'");
    }
    GapRange range{};
    range.log_spacing = log_spacing;
    auto parse = [&](std::string_view part, auto& out, const char* name) {
        const auto* end = part.data() + part.size();
        auto [ptr, ec] = std::from_chars(part.data(), end, out);
        if (ec != std::errc{} || ptr != end) {
            throw ConfigError(std::string("--gap-range: cannot parse ") + name + " in '" + text + "'");
        }
    };
    const std::string_view view(text);
    parse(view.substr(0, first), range.lo_um, "lo");
    parse(view.substr(first + 1, second - first - 1), range.hi_um, "hi");
    parse(view.substr(second + 1), range.count, "n");
    return range;
}

void RunConfig::validate() const {
    const auto& m = material;
    if (m.model != "drude" && m.model != "plasma" && m.model != "ideal" && m.model != "table") {
        throw ConfigError("--model: unknown model '" + m.model + "' (expected drude|plasma|ideal|table)");
    }
    if (!(m.omega_p_ev > 0.0)) throw ConfigError("--omega-p: must be positive");
    if (m.nu_ev && !(*m.nu_ev > 0.0)) throw ConfigError("--nu: must be positive");
    if (m.nu_model != "constant" && m.nu_model != "bg") {
        throw ConfigError("--nu-model: expected constant|bg, got '" + m.nu_model + "'");
    }
    if (!(m.theta_d_k > 0.0)) throw ConfigError("--theta-d: must be positive");
    if (m.model == "table") {
        if (m.table_path.empty()) throw ConfigError("--table: required with --model table");
        if (m.zero_mode != "drude_like" && m.zero_mode != "plasma_like") {
            throw ConfigError("--zero-mode: required with --model table (drude_like|plasma_like)");
        }
    }

    if (command != Command::ImpedanceCheck) {
        if (gap_um && gap_range) throw ConfigError("--gap and --gap-range are mutually exclusive");
        if (!gap_um && !gap_range) throw ConfigError("--gap or --gap-range is required");
    }
    if (gap_um && !(*gap_um > 0.0)) throw ConfigError("--gap: must be positive");
    if (gap_range) {
        const auto& r = *gap_range;
        if (r.count < 1) throw ConfigError("--gap-range: empty range (n must be >= 1)");
        if (!(r.lo_um > 0.0)) throw ConfigError("--gap-range: lo must be positive");
        if (!(r.hi_um >= r.lo_um)) throw ConfigError("--gap-range: range must be ascending (lo <= hi)");
        if (r.count > 1 && !(r.hi_um > r.lo_um)) throw ConfigError("--gap-range: lo == hi needs n == 1");
    }
    for (double t : temperatures_k) {
        if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("--temp: temperatures must be positive");
    }
    if (radius_um && !(*radius_um > 0.0)) throw ConfigError("--radius: must be positive");
    if (!(rel_tol > 0.0 && rel_tol <= 1e-4)) throw ConfigError("--rel-tol: must lie in (0, 1e-4]");
    if (threads < 1) throw ConfigError("--threads: must be at least 1");
}

std::vector<double> RunConfig::gaps_um() const {
    if (gap_um) return {*gap_um};
    if (!gap_range) return {};
    const auto& r = *gap_range;
    std::vector<double> out(r.count);
    for (int i = 0; i < r.count; ++i) {
        if (r.count == 1) {
            out[i] = r.lo_um;
        } else if (r.log_spacing) {
            out[i] = r.lo_um * std::pow(r.hi_um / r.lo_um, static_cast<double>(i) / (r.count - 1));
        } else {
            out[i] = r.lo_um + (r.hi_um - r.lo_um) * i / (r.count - 1);
        }
    }
    out.back() = r.hi_um;
    return out;
}

std::vector<double> RunConfig::temperatures() const {
    if (!temperatures_k.empty()) return temperatures_k;
    switch (command) {
        case Command::Diff:
        case Command::SpherePlate: return {300.0, 350.0};
        case Command::LowTemp: return {};
        default: return {300.0};
    }
}

MaterialModel build_model(const MaterialSpec& spec) {
    try {
        if (spec.model == "drude") {
            RelaxationModel relaxation = ConstantRelaxation{spec.nu_ev.value_or(0.035)};
            if (spec.nu_model == "bg") relaxation = BlochGruneisen{spec.theta_d_k, spec.nu_ev.value_or(0.0356), 300.0};
            return Drude{DrudeParams(spec.omega_p_ev, relaxation)};
        }
        if (spec.model == "plasma") return Plasma(spec.omega_p_ev);
        if (spec.model == "ideal") return Ideal{};
        if (spec.model == "table") {
            const auto cls = spec.zero_mode == "plasma_like" ? ZeroModeClass::PlasmaLike : ZeroModeClass::DrudeLike;
            return Tabulated{PermittivityTable::from_csv_file(spec.table_path), cls};
        }
    } catch (const DomainError& e) {
        throw ConfigError(std::string("material: ") + e.what());
    }
    throw ConfigError("--model: unknown model '" + spec.model + "'");
}

SweepOutput cmd_pressure(const RunConfig& cfg) {
    const auto model = build_model(cfg.material);
    const auto temps = cfg.temperatures();
    const auto quad = quadrature_for(cfg);

    SweepOutput out{base_meta(cfg), {"a_um"}, {}};
    for (double t : temps) {
        out.columns.push_back(temps.size() == 1 ? "pressure_Pa" : "pressure_Pa_" + temperature_label(t));
    }
    out.rows = compute_rows(cfg.gaps_um(), cfg.threads, "a_um", [&](double a_um) {
        std::vector<double> row{a_um};
        for (double t : temps) {
            row.push_back(std::abs(total_pressure(ThermalGapConfig(t, a_um * kMicrometre), model, quad).total));
        }
        return row;
    });
    return out;
}

SweepOutput cmd_diff(const RunConfig& cfg) {
    require_temperature_count(cfg, 2);
    const auto model = build_model(cfg.material);
    const auto temps = cfg.temperatures();
    const double t_low = std::min(temps[0], temps[1]);
    const double t_high = std::max(temps[0], temps[1]);
    const auto quad = quadrature_for(cfg);

    SweepOutput out{base_meta(cfg), {"a_um", "delta_F_mPa", "delta_free_energy_J_m2"}, {}};
    out.meta.emplace_back("convention", "delta = |X(T_low)| - |X(T_high)|");
    out.rows = compute_rows(cfg.gaps_um(), cfg.threads, "a_um", [&](double a_um) {
        const double a = a_um * kMicrometre;
        const auto dp = pressure_difference(a, model, t_high, t_low, quad);
        const auto df = free_energy_difference(a, model, t_high, t_low, quad);
        return std::vector<double>{a_um, dp.delta * 1e3, df.delta};
    });
    return out;
}

SweepOutput cmd_modes(const RunConfig& cfg) {
    require_temperature_count(cfg, 1);
    const auto model = build_model(cfg.material);
    const double t = cfg.temperatures().front();
    const auto quad = quadrature_for(cfg);
    constexpr int kListed = 8;

    SweepOutput out{base_meta(cfg), {"a_um"}, {}};
    for (int m = 0; m < kListed; ++m) out.columns.push_back("frac_m" + std::to_string(m) + "_pct");
    out.columns.push_back("frac_rest_pct");
    out.rows = compute_rows(cfg.gaps_um(), cfg.threads, "a_um", [&](double a_um) {
        const auto result = total_pressure(ThermalGapConfig(t, a_um * kMicrometre), model, quad);
        std::vector<double> row{a_um};
        double rest = 0.0;
        for (int m = 0; m < kListed; ++m) {
            row.push_back(m < result.m_used ? result.per_mode[m].fraction_percent : 0.0);
        }
        for (int m = kListed; m < result.m_used; ++m) rest += result.per_mode[m].fraction_percent;
        row.push_back(rest);
        return row;
    });
    return out;
}

SweepOutput cmd_sphere_plate(const RunConfig& cfg) {
    require_temperature_count(cfg, 2);
    const auto model = build_model(cfg.material);
    const auto temps = cfg.temperatures();
    const double t_low = std::min(temps[0], temps[1]);
    const double t_high = std::max(temps[0], temps[1]);
    const auto quad = quadrature_for(cfg);
    // Without --radius the R-normalized difference is still defined; R only
    // enters the absolute forces.
    const double radius_m = cfg.radius_um.value_or(100.0) * kMicrometre;

    SweepOutput out{base_meta(cfg), {"a_um", "delta_Fps_over_R_N_m"}, {}};
    out.meta.emplace_back("convention", "delta = (F_ps(T_high) - F_ps(T_low)) / R");
    if (cfg.radius_um) {
        out.meta.emplace_back("radius_um", format_double(*cfg.radius_um));
        out.columns.push_back("force_N_" + temperature_label(t_low));
        out.columns.push_back("force_N_" + temperature_label(t_high));
    }
    bool advisory = false;
    for (double a_um : cfg.gaps_um()) advisory = advisory || SpherePlateConfig(radius_m, a_um * kMicrometre).proximity_advisory();
    if (cfg.radius_um && advisory) out.meta.emplace_back("pfa_advisory", "R < 100 a for some rows");

    out.rows = compute_rows(cfg.gaps_um(), cfg.threads, "a_um", [&](double a_um) {
        const SpherePlateConfig sp(radius_m, a_um * kMicrometre);
        std::vector<double> row{a_um, pfa_force_difference(sp, model, t_high, t_low, quad)};
        if (cfg.radius_um) {
            row.push_back(pfa_force(sp, t_low, model, quad));
            row.push_back(pfa_force(sp, t_high, model, quad));
        }
        return row;
    });
    return out;
}

SweepOutput cmd_lowtemp(const RunConfig& cfg) {
    const auto model = build_model(cfg.material);
    const auto temps = cfg.temperatures();
    if (!temps.empty() && temps.size() < 5) throw ConfigError("--temp: lowtemp needs at least 5 temperatures or none");

    SweepOutput out{base_meta(cfg), {"a_um", "F0_J_m2", "coeff_eV", "fit_residual", "fit_T_max_K", "te_intercept"}, {}};
    if (const auto* d = std::get_if<Drude>(&model)) {
        out.meta.emplace_back("drude_T2_coefficient_eV", format_double(drude_quadratic_coefficient_ev(d->params)));
    }
    out.rows = compute_rows(cfg.gaps_um(), cfg.threads, "a_um", [&](double a_um) {
        const double a = a_um * kMicrometre;
        const auto fit = temps.empty() ? lowT_quadratic_fit(a, model) : lowT_quadratic_fit(a, model, temps);
        const double t_max = *std::max_element(fit.temperatures.begin(), fit.temperatures.end());
        const double intercept = te_mode_intercept(a, model, 300.0);
        return std::vector<double>{a_um, fit.F0, fit.coeff_ev, fit.residual, t_max, intercept};
    });
    return out;
}

SweepOutput cmd_impedance_check(const RunConfig& cfg) {
    const auto model = build_model(cfg.material);
    if (std::holds_alternative<Ideal>(model)) throw ConfigError("--model: impedance-check needs a finite permittivity");
    const double t = cfg.temperatures().front();

    constexpr int kGrid = 20;
    std::vector<double> zetas(kGrid);
    for (int i = 0; i < kGrid; ++i) zetas[i] = 1e10 * std::pow(1e6, static_cast<double>(i) / (kGrid - 1));

    SweepOutput out{base_meta(cfg), {"zeta_rad_s", "max_abs_dev_rTE2_minus_B"}, {}};
    if (std::holds_alternative<Drude>(model) || std::holds_alternative<Plasma>(model)) {
        constexpr double kQFixed = 1e17;
        const std::vector<double> sequence = {1e12, 1e11, 1e10, 1e9, 1e8};
        const auto limits = rte_zero_frequency_comparison(model, kQFixed, sequence, t);
        out.meta.emplace_back("zero_freq_q_rad_s", format_double(kQFixed));
        out.meta.emplace_back("zero_freq_zeta_rad_s", format_double(sequence.back()));
        out.meta.emplace_back("rTE2_momentum_dependent_Z", format_double(limits.momentum_dependent));
        out.meta.emplace_back("rTE2_frequency_only_Z", format_double(limits.frequency_only));
    }
    out.rows = compute_rows(zetas, cfg.threads, "zeta", [&](double zeta) {
        const double eps = permittivity(model, zeta, t);
        double worst = 0.0;
        for (int j = 0; j < kGrid; ++j) {
            const double q = zeta * std::pow(1e3, static_cast<double>(j) / (kGrid - 1));
            const double r = rte_from_impedance(zeta, q, eps);
            const double p = q / zeta;
            const double b = reflection_from_variables({p, std::sqrt(eps - 1.0 + p * p)}, eps).B;
            worst = std::max(worst, std::abs(r * r - b));
        }
        return std::vector<double>{zeta, worst};
    });
    return out;
}

SweepOutput run(const RunConfig& cfg) {
    cfg.validate();
    switch (cfg.command) {
        case Command::Pressure: return cmd_pressure(cfg);
        case Command::Diff: return cmd_diff(cfg);
        case Command::Modes: return cmd_modes(cfg);
        case Command::SpherePlate: return cmd_sphere_plate(cfg);
        case Command::LowTemp: return cmd_lowtemp(cfg);
        case Command::ImpedanceCheck: return cmd_impedance_check(cfg);
    }
    throw ConfigError("unknown command");
}

// --- serialization -----------------------------------------------------------

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

std::string to_csv(const SweepOutput& out) {
    std::string text;
    for (const auto& [key, value] : out.meta) text += "# " + key + ": " + value + "\n";
    for (std::size_t i = 0; i < out.columns.size(); ++i) text += (i ? "," : "") + out.columns[i];
    text += "\n";
    for (const auto& row : out.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) text += (i ? "," : "") + format_double(row[i]);
        text += "\n";
    }
    return text;
}

std::string to_json(const SweepOutput& out) {
    nlohmann::ordered_json doc;
    doc["meta"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : out.meta) doc["meta"][key] = value;
    doc["columns"] = out.columns;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : out.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size() && i < out.columns.size(); ++i) obj[out.columns[i]] = row[i];
        doc["rows"].push_back(std::move(obj));
    }
    return doc.dump(2) + "\n";
}

SweepOutput parse_csv(std::istream& in) {
    SweepOutput out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.starts_with("# ")) {
            const auto colon = line.find(": ");
            if (colon == std::string::npos) throw ConfigError("csv line " + std::to_string(line_no) + ": bad metadata");
            out.meta.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string field; std::getline(ss, field, ',');) fields.push_back(field);
        if (out.columns.empty()) {
            out.columns = fields;
            continue;
        }
        if (fields.size() != out.columns.size()) {
            throw ConfigError("csv line " + std::to_string(line_no) + ": expected " +
                              std::to_string(out.columns.size()) + " fields");
        }
        std::vector<double> row;
        for (const auto& f : fields) {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc{} || ptr != f.data() + f.size()) {
                throw ConfigError("csv line " + std::to_string(line_no) + ": cannot parse '" + f + "'");
            }
            row.push_back(v);
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

}  // namespace casimir::cli
