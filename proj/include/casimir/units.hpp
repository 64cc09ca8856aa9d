#pragma once

#include <numbers>
#include <string>

namespace casimir {

/// SI physical constants used by every computation in the library.
///
/// The defaults are the exact/recommended CODATA 2018 values. For testing,
/// the environment variable CASIMIR_CONSTANTS_FILE may point to a JSON file
/// with any of the keys "version", "hbar", "c", "k_B", "eV"; it is read
/// once, on first use.
struct PhysicalConstants {
    std::string version = "CODATA-2018";
    double hbar = 1.054571817e-34;  // J s
    double c = 2.99792458e8;        // m/s
    double k_B = 1.380649e-23;      // J/K
    double eV = 1.602176634e-19;    // J

    /// Angular frequency (rad/s) equivalent to one electron-volt, eV/hbar.
    double rad_per_s_per_eV() const { return eV / hbar; }
    double hbar_c() const { return hbar * c; }
};

const PhysicalConstants& constants();

/// Loads a constants override from a JSON file. Missing keys keep the
/// CODATA defaults. Throws ConfigError on malformed input.
PhysicalConstants load_constants_file(const std::string& path);

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kZeta3 = 1.2020569031595942853997;  // Apery's constant

inline double ev_to_rad_per_s(double energy_ev) {
    return energy_ev * constants().rad_per_s_per_eV();
}
inline double rad_per_s_to_ev(double omega) {
    return omega / constants().rad_per_s_per_eV();
}

inline constexpr double kMicrometre = 1e-6;

}  // namespace casimir
