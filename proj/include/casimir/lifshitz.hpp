#pragma once

// Finite-temperature Lifshitz pressure and free energy between two identical
// half-spaces. All integrals run over the dimensionless y = q a with
// q^2 = k_perp^2 + zeta_m^2; mode m >= 1 starts at y = m gamma.

#include <span>
#include <vector>

#include "casimir/dispersion.hpp"

namespace casimir {

struct QuadratureSettings {
    double rel_tol = 1e-10;
    double y_tail = 30.0;  // integrate y over [m gamma, m gamma + y_tail]
    int max_subdivisions = 200;

    void validate() const;
};

/// Temperature and gap, with the derived dimensionless gamma = 2 pi a k_B T / (hbar c)
/// and the Matsubara grid zeta_m = 2 pi m k_B T / hbar.
class ThermalGapConfig {
public:
    ThermalGapConfig(double temperature_k, double gap_m);

    double temperature() const { return temperature_k_; }
    double gap() const { return gap_m_; }
    double gamma() const { return gamma_; }
    /// a T in natural units, a k_B T / (hbar c).
    double a_times_t() const;
    double matsubara(int m) const;

private:
    double temperature_k_;
    double gap_m_;
    double gamma_;
};

/// Squared reflection coefficients: A (TM) and B (TE).
struct ReflectionPair {
    double A;
    double B;
};

struct LifshitzVariables {
    double p;
    double s;
};

/// p = y / (m gamma), s = sqrt(eps - 1 + p^2).
LifshitzVariables lifshitz_variables(double y, int m, const ThermalGapConfig& cfg, double eps);

/// A = ((eps p - s)/(eps p + s))^2, B = ((s - p)/(s + p))^2.
ReflectionPair reflection_from_variables(const LifshitzVariables& v, double eps);
ReflectionPair reflection_pair(double y, int m, const ThermalGapConfig& cfg, double eps);

/// Reflection at zeta = 0, taken analytically per model: Drude and
/// Drude-like tables give (1, 0), plasma keeps a y-dependent TE term, the
/// ideal metal gives (1, 1).
ReflectionPair zero_frequency_reflection(const MaterialModel& model, double y, const ThermalGapConfig& cfg);

/// Contribution of Matsubara mode m to the pressure in Pa, including the
/// half weight of m = 0. Negative means attraction.
double mode_pressure(int m, const ThermalGapConfig& cfg, const MaterialModel& model,
                     const QuadratureSettings& quad = {});

/// Contribution of Matsubara mode m to the free energy per area, J/m^2.
double mode_free_energy(int m, const ThermalGapConfig& cfg, const MaterialModel& model,
                        const QuadratureSettings& quad = {});

struct ModeContribution {
    int m;
    double value;
    double fraction_percent;
};

/// Matsubara sum with its per-mode breakdown.
struct PressureResult {
    double total = 0.0;
    std::vector<ModeContribution> per_mode;
    int m_used = 0;
    bool converged = false;
};

/// Hard cap on the number of Matsubara modes in one sum.
inline constexpr int kMaxMatsubaraModes = 100000;

/// Pressure in Pa, summed over m = 0, 1, ... until two consecutive modes fall
/// below rel_tol of the running total (and m >= 5).
PressureResult total_pressure(const ThermalGapConfig& cfg, const MaterialModel& model,
                              const QuadratureSettings& quad = {});

/// Free energy per area in J/m^2 with per-mode breakdown.
PressureResult free_energy_modes(const ThermalGapConfig& cfg, const MaterialModel& model,
                                 const QuadratureSettings& quad = {});

double free_energy(const ThermalGapConfig& cfg, const MaterialModel& model, const QuadratureSettings& quad = {});

enum class Polarization { TE, TM, Both };

/// f(zeta) = int y ln(1 - R(zeta, y) e^{-2y}) dy over y >= zeta a / c, with R
/// evaluated at continuous zeta. The free energy is
/// (k_B T / (2 pi a^2)) sum'_m f(zeta_m).
double mode_function(double zeta, double gap_m, const MaterialModel& model, double temperature_k,
                     Polarization pol, const QuadratureSettings& quad = {});

/// TE part of mode_function.
double te_mode_function(double zeta, double gap_m, const MaterialModel& model, double temperature_k = 300.0,
                        const QuadratureSettings& quad = {});

/// Least-squares line through te_mode_function sampled on
/// zeta a / c in [w_lo, w_hi], evaluated at zeta = 0.
double te_mode_intercept(double gap_m, const MaterialModel& model, double temperature_k, double w_lo = 0.25,
                         double w_hi = 0.5, int samples = 11, const QuadratureSettings& quad = {});

/// Momentum-dependent surface impedance Z = -zeta / sqrt(zeta^2 (eps - 1) + q^2).
/// q is the magnitude sqrt(k_perp^2 + zeta^2) in frequency units, so q >= zeta.
double surface_impedance(double zeta, double q, double eps);

/// r_TE = -(1 + Z p)/(1 - Z p) with p = q / zeta.
double rte_from_impedance(double zeta, double q, double eps);

struct ZeroFrequencyLimits {
    double momentum_dependent;  // |r_TE|^2 with Z(zeta, k_perp)
    double frequency_only;      // |r_TE|^2 with Z(zeta) = -1/sqrt(eps)
};

/// |r_TE|^2 at the last (smallest) zeta of a decreasing sequence under the
/// two impedance prescriptions. Accepts Drude and plasma models.
ZeroFrequencyLimits rte_zero_frequency_comparison(const MaterialModel& model, double q_fixed,
                                                  std::span<const double> zeta_sequence,
                                                  double temperature_k = 300.0);

}  // namespace casimir
