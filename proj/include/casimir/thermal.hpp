#pragma once

// Temperature-difference observables, the ideal-metal closed form, and the
// low-temperature behaviour of the free energy.

#include <span>
#include <vector>

#include "casimir/lifshitz.hpp"

namespace casimir {

/// Difference of magnitudes, delta = |raw_low| - |raw_high|, where raw_low is
/// the observable at t_low and raw_high at t_high.
struct DifferenceResult {
    double a;
    double t_low;
    double t_high;
    double delta;
    double raw_low;
    double raw_high;
};

/// Pressure difference in Pa between t_high and t_low at gap a. Both
/// temperatures are evaluated on their own Matsubara grid.
DifferenceResult pressure_difference(double gap_m, const MaterialModel& model, double t_high = 350.0,
                                     double t_low = 300.0, const QuadratureSettings& quad = {});

/// Free-energy difference in J/m^2, same convention.
DifferenceResult free_energy_difference(double gap_m, const MaterialModel& model, double t_high = 350.0,
                                        double t_low = 300.0, const QuadratureSettings& quad = {});

/// Gap (m) at which the pressure difference changes sign, by bisection to
/// tolerance_m. Throws BracketError if the ends do not straddle a root.
double sign_change_gap(const MaterialModel& model, double t_high, double t_low, double a_lo, double a_hi,
                       const QuadratureSettings& quad = {}, double tolerance_m = 1e-9);

struct IdealPressure {
    double value;     // Pa
    bool applicable;  // a T < 0.2 in natural units
};

/// -(pi^2 hbar c / (240 a^4)) [1 + (1/3)(2 a T)^4], with a T in natural units.
/// T = 0 is allowed.
IdealPressure ideal_pressure_lowT(double gap_m, double temperature_k);

/// Rough index of the dominant Matsubara mode, round(1 / (2 pi a T)).
int dominant_mode(double gap_m, double temperature_k);

// --- low temperature -------------------------------------------------------

struct LowTemperatureSettings {
    QuadratureSettings inner{1e-14, 30.0, 400};
    /// Cells are summed exactly up to tail_scale times the model's fine
    /// frequency scale; the remainder uses the Euler-Maclaurin tail.
    double tail_scale = 20.0;
    int min_cells = 10;
    /// Largest gamma for which the Euler-Maclaurin tail is trusted.
    double max_gamma = 0.05;
};

/// Dimensionless frequency w = zeta a / c below which the mode function of
/// the model has structure. For Drude with constant nu this is
/// c nu / (omega_p^2 a); otherwise 1.
double fine_frequency_scale(double gap_m, const MaterialModel& model);

/// F at T = 0, (hbar c / (4 pi^2 a^3)) int_0^inf g(w) dw where g is the mode
/// function summed over polarizations.
double zero_temperature_free_energy(double gap_m, const MaterialModel& model,
                                    const LowTemperatureSettings& settings = {});

/// F(T) - F(0) in J/m^2, computed as the trapezoidal error of the Matsubara
/// sum relative to the frequency integral. Exact cell by cell up to the fine
/// scale, Euler-Maclaurin beyond. Requires gamma <= settings.max_gamma.
double thermal_free_energy_shift(double gap_m, double temperature_k, const MaterialModel& model,
                                 const LowTemperatureSettings& settings = {});

/// F(0) + thermal_free_energy_shift: the free energy by the low-temperature
/// route, independent of the direct Matsubara sum.
double free_energy_low_temperature(double gap_m, double temperature_k, const MaterialModel& model,
                                   const LowTemperatureSettings& settings = {});

/// Temperatures placed where F - F0 is quadratic: gamma runs over
/// [0.6, 1] x 0.003 x fine_frequency_scale.
std::vector<double> quadratic_regime_grid(double gap_m, const MaterialModel& model, int points = 6);

struct QuadraticFit {
    double F0;         // J/m^2
    double coeff_ev;   // T^2 coefficient, eV (T measured as k_B T)
    double residual;   // max |fit - data| / (max data - min data)
    std::vector<double> temperatures;
};

inline constexpr double kQuadraticFitResidualLimit = 1e-3;

/// Least-squares F(T) = F0 + c T^2 over the given temperatures (at least 5).
/// Throws FitError if the residual exceeds kQuadraticFitResidualLimit.
QuadraticFit lowT_quadratic_fit(double gap_m, const MaterialModel& model, std::span<const double> temperatures,
                                const LowTemperatureSettings& settings = {});

/// Same, on quadratic_regime_grid(gap_m, model).
QuadraticFit lowT_quadratic_fit(double gap_m, const MaterialModel& model, const LowTemperatureSettings& settings = {});

/// omega_p^2 (2 ln 2 - 1) / (48 nu), in eV.
double drude_quadratic_coefficient_ev(const DrudeParams& params);

}  // namespace casimir
