#pragma once

// Gap sweeps behind the command-line tool, and their CSV/JSON serialization.

#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "casimir/dispersion.hpp"

namespace casimir::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Command { Pressure, Diff, Modes, SpherePlate, LowTemp, ImpedanceCheck };
enum class OutputFormat { Csv, Json };

Command parse_command(const std::string& name);
std::string command_name(Command command);

struct MaterialSpec {
    std::string model = "drude";  // drude | plasma | ideal | table
    double omega_p_ev = 9.0;
    std::optional<double> nu_ev;     // default 35 meV, or 35.6 meV with Bloch-Grueneisen
    std::string nu_model = "constant";  // constant | bg
    double theta_d_k = 170.0;
    std::string table_path;
    std::string zero_mode;  // drude_like | plasma_like, required for tables
};

/// Parsed `lo:hi:n` gap range in micrometres.
struct GapRange {
    double lo_um;
    double hi_um;
    int count;
    bool log_spacing = false;
};

GapRange parse_gap_range(const std::string& text, bool log_spacing);

struct RunConfig {
    Command command = Command::Pressure;
    MaterialSpec material;
    std::optional<double> gap_um;
    std::optional<GapRange> gap_range;
    std::vector<double> temperatures_k;  // empty: command default
    std::optional<double> radius_um;
    double rel_tol = 1e-10;
    OutputFormat format = OutputFormat::Csv;
    std::string out_path;  // empty: stdout
    int threads = 1;

    /// Throws ConfigError naming the offending option.
    void validate() const;
    std::vector<double> gaps_um() const;
    std::vector<double> temperatures() const;
};

MaterialModel build_model(const MaterialSpec& spec);

/// Metadata as ordered key/value pairs, one column-name header and finite rows.
struct SweepOutput {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

SweepOutput cmd_pressure(const RunConfig& cfg);
SweepOutput cmd_diff(const RunConfig& cfg);
SweepOutput cmd_modes(const RunConfig& cfg);
SweepOutput cmd_sphere_plate(const RunConfig& cfg);
SweepOutput cmd_lowtemp(const RunConfig& cfg);
SweepOutput cmd_impedance_check(const RunConfig& cfg);

/// Validates cfg and dispatches on cfg.command.
SweepOutput run(const RunConfig& cfg);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

std::string to_csv(const SweepOutput& out);
std::string to_json(const SweepOutput& out);
SweepOutput parse_csv(std::istream& in);

}  // namespace casimir::cli
