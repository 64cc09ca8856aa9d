#include "casimir/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "casimir/errors.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/units.hpp"

namespace casimir {

namespace {

void require_positive(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        std::ostringstream msg;
        msg << what << " must be positive and finite (got " << value << ")";
        throw DomainError(msg.str());
    }
}

void require_low_temperature_model(const MaterialModel& model) {
    if (std::holds_alternative<Tabulated>(model)) {
        throw UnsupportedModelError("low-temperature route needs an analytic model, not a table");
    }
    if (const auto* d = std::get_if<Drude>(&model);
        d != nullptr && !std::holds_alternative<ConstantRelaxation>(d->params.relaxation())) {
        throw UnsupportedModelError("low-temperature route needs a temperature-independent relaxation frequency");
    }
}

// Any temperature works for the models accepted above; eps does not depend on it.
constexpr double kReferenceTemperature = 300.0;

// g(w): mode function at zeta = w c / a, both polarizations.
struct ModeFunction {
    double gap_m;
    const MaterialModel& model;
    const QuadratureSettings& quad;

    double operator()(double w) const {
        return mode_function(w * constants().c / gap_m, gap_m, model, kReferenceTemperature, Polarization::Both, quad);
    }
};

double checked_integral(const ModeFunction& g, double lo, double hi, double rel_tol) {
    const auto r = integrate_adaptive(g, lo, hi, rel_tol, 0.0, 400);
    if (!r.converged) {
        std::ostringstream msg;
        msg << "frequency integral over [" << lo << ", " << hi << "] did not converge";
        throw ConvergenceError(msg.str(), r.value, r.abs_error);
    }
    return r.value;
}

double natural_energy_density_scale(double gap_m) {
    // hbar c / (4 pi^2 a^3), J/m^2.
    return constants().hbar_c() / (4.0 * kPi * kPi * gap_m * gap_m * gap_m);
}

// J/m^2 -> eV^3 with hbar = c = k_B = 1.
double to_natural_energy_density(double joule_per_m2) {
    const auto& k = constants();
    const double hbar_c_ev_m = k.hbar_c() / k.eV;
    return joule_per_m2 / k.eV * hbar_c_ev_m * hbar_c_ev_m;
}

double from_natural_energy_density(double ev3) {
    const auto& k = constants();
    const double hbar_c_ev_m = k.hbar_c() / k.eV;
    return ev3 * k.eV / (hbar_c_ev_m * hbar_c_ev_m);
}

}  // namespace

DifferenceResult pressure_difference(double gap_m, const MaterialModel& model, double t_high, double t_low,
                                     const QuadratureSettings& quad) {
    const double raw_low = total_pressure(ThermalGapConfig(t_low, gap_m), model, quad).total;
    const double raw_high = total_pressure(ThermalGapConfig(t_high, gap_m), model, quad).total;
    return {gap_m, t_low, t_high, std::abs(raw_low) - std::abs(raw_high), raw_low, raw_high};
}

DifferenceResult free_energy_difference(double gap_m, const MaterialModel& model, double t_high, double t_low,
                                        const QuadratureSettings& quad) {
    const double raw_low = free_energy(ThermalGapConfig(t_low, gap_m), model, quad);
    const double raw_high = free_energy(ThermalGapConfig(t_high, gap_m), model, quad);
    return {gap_m, t_low, t_high, std::abs(raw_low) - std::abs(raw_high), raw_low, raw_high};
}

double sign_change_gap(const MaterialModel& model, double t_high, double t_low, double a_lo, double a_hi,
                       const QuadratureSettings& quad, double tolerance_m) {
    require_positive(a_lo, "bracket lower gap");
    require_positive(tolerance_m, "bisection tolerance");
    if (!(a_hi > a_lo)) throw BracketError("sign_change_gap: bracket must satisfy a_lo < a_hi");

    auto delta = [&](double a) { return pressure_difference(a, model, t_high, t_low, quad).delta; };
    double f_lo = delta(a_lo);
    const double f_hi = delta(a_hi);
    if (f_lo == 0.0) return a_lo;
    if (f_hi == 0.0) return a_hi;
    if ((f_lo > 0.0) == (f_hi > 0.0)) {
        std::ostringstream msg;
        msg << "no sign change of the pressure difference in [" << a_lo << ", " << a_hi << "] m";
        throw BracketError(msg.str());
    }
    double lo = a_lo;
    double hi = a_hi;
    while (hi - lo > tolerance_m) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = delta(mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

IdealPressure ideal_pressure_lowT(double gap_m, double temperature_k) {
    require_positive(gap_m, "gap width");
    if (!(temperature_k >= 0.0) || !std::isfinite(temperature_k)) throw DomainError("temperature must be >= 0");
    const auto& k = constants();
    const double a_t = gap_m * k.k_B * temperature_k / k.hbar_c();
    const double x = 2.0 * a_t;
    const double a4 = gap_m * gap_m * gap_m * gap_m;
    const double value = -kPi * kPi * k.hbar_c() / (240.0 * a4) * (1.0 + x * x * x * x / 3.0);
    return {value, a_t < 0.2};
}

int dominant_mode(double gap_m, double temperature_k) {
    const ThermalGapConfig cfg(temperature_k, gap_m);
    return static_cast<int>(std::lround(1.0 / (2.0 * kPi * cfg.a_times_t())));
}

// --- low temperature -------------------------------------------------------

double fine_frequency_scale(double gap_m, const MaterialModel& model) {
    require_positive(gap_m, "gap width");
    if (const auto* d = std::get_if<Drude>(&model)) {
        const double wp = d->params.omega_p();
        const double nu = ev_to_rad_per_s(d->params.nu_ref_ev());
        return std::min(1.0, constants().c * nu / (wp * wp * gap_m));
    }
    return 1.0;
}

double zero_temperature_free_energy(double gap_m, const MaterialModel& model, const LowTemperatureSettings& settings) {
    require_low_temperature_model(model);
    const double w_s = fine_frequency_scale(gap_m, model);
    const ModeFunction g{gap_m, model, settings.inner};
    const double tol = 10.0 * settings.inner.rel_tol;

    // Decade panels from 1e-2 w_s up to w = 1, then the exponential tail.
    NeumaierSum total;
    double lo = 0.0;
    double hi = 1e-2 * w_s;
    while (lo < 1.0) {
        hi = std::min(hi, 1.0);
        total += checked_integral(g, lo, hi, tol);
        lo = hi;
        hi *= 10.0;
    }
    total += checked_integral(g, 1.0, 4.0, tol);
    total += checked_integral(g, 4.0, 25.0, tol);
    return natural_energy_density_scale(gap_m) * total.value();
}

double thermal_free_energy_shift(double gap_m, double temperature_k, const MaterialModel& model,
                                 const LowTemperatureSettings& settings) {
    require_low_temperature_model(model);
    const ThermalGapConfig cfg(temperature_k, gap_m);
    const double gamma = cfg.gamma();
    if (gamma > settings.max_gamma) {
        std::ostringstream msg;
        msg << "gamma = " << gamma << " exceeds " << settings.max_gamma
            << "; use the direct Matsubara sum at this temperature";
        throw DomainError(msg.str());
    }
    const double w_s = fine_frequency_scale(gap_m, model);
    const ModeFunction g{gap_m, model, settings.inner};
    const int cells = std::max(settings.min_cells, static_cast<int>(std::ceil(settings.tail_scale * w_s / gamma)));

    // Trapezoid-minus-integral, cell by cell. Each term is a small difference
    // of nearly equal numbers, so summing them avoids the cancellation of
    // subtracting a full Matsubara sum from a full integral.
    NeumaierSum error;
    double g_left = g(0.0);
    for (int m = 0; m < cells; ++m) {
        const double lo = m * gamma;
        const double hi = (m + 1) * gamma;
        const double g_right = g(hi);
        const double exact = checked_integral(g, lo, hi, settings.inner.rel_tol);
        error += 0.5 * gamma * (g_left + g_right) - exact;
        g_left = g_right;
    }

    // Euler-Maclaurin remainder for the cells beyond W: -(gamma^2 / 12) g'(W).
    const double w_tail = cells * gamma;
    const double h = std::min(gamma, 0.1 * w_tail);
    const double derivative =
        (-g(w_tail + 2 * h) + 8 * g(w_tail + h) - 8 * g(w_tail - h) + g(w_tail - 2 * h)) / (12 * h);
    error += -gamma * gamma / 12.0 * derivative;

    return natural_energy_density_scale(gap_m) * error.value();
}

double free_energy_low_temperature(double gap_m, double temperature_k, const MaterialModel& model,
                                   const LowTemperatureSettings& settings) {
    return zero_temperature_free_energy(gap_m, model, settings) +
           thermal_free_energy_shift(gap_m, temperature_k, model, settings);
}

std::vector<double> quadratic_regime_grid(double gap_m, const MaterialModel& model, int points) {
    if (points < 2) throw DomainError("quadratic_regime_grid needs at least 2 points");
    const double w_s = fine_frequency_scale(gap_m, model);
    const double gamma_max = 0.003 * w_s;
    // gamma = 2 pi a k_B T / (hbar c)
    const auto& k = constants();
    const double t_max = gamma_max * k.hbar_c() / (2.0 * kPi * gap_m * k.k_B);
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i) grid[i] = t_max * (0.6 + 0.4 * i / (points - 1));
    return grid;
}

QuadraticFit lowT_quadratic_fit(double gap_m, const MaterialModel& model, std::span<const double> temperatures,
                                const LowTemperatureSettings& settings) {
    if (temperatures.size() < 5) throw DomainError("lowT_quadratic_fit needs at least 5 temperatures");
    require_low_temperature_model(model);
    for (double t : temperatures) require_positive(t, "temperature");

    const auto& k = constants();
    const double t_max = *std::max_element(temperatures.begin(), temperatures.end());
    const bool low_route = ThermalGapConfig(t_max, gap_m).gamma() <= settings.max_gamma;

    // Values are fitted relative to a common offset (F0 on the low-temperature
    // route); the least-squares line commutes with that shift.
    const double offset = low_route ? zero_temperature_free_energy(gap_m, model, settings) : 0.0;
    QuadratureSettings direct = settings.inner;
    direct.rel_tol = 1e-12;

    std::vector<double> xs;
    std::vector<double> ys;
    for (double t : temperatures) {
        const double shifted = low_route ? thermal_free_energy_shift(gap_m, t, model, settings)
                                         : free_energy(ThermalGapConfig(t, gap_m), model, direct);
        const double t_ev = k.k_B * t / k.eV;
        xs.push_back(t_ev * t_ev);
        ys.push_back(to_natural_energy_density(shifted));
    }

    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    if (!(std::abs(denom) > 0.0)) throw FitError("lowT_quadratic_fit: temperatures must not all coincide", INFINITY);
    const double coeff = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - coeff * sx) / n;

    const auto [y_min, y_max] = std::minmax_element(ys.begin(), ys.end());
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) worst = std::max(worst, std::abs(intercept + coeff * xs[i] - ys[i]));
    const double range = *y_max - *y_min;
    const double residual = range > 0.0 ? worst / range : INFINITY;

    QuadraticFit fit{offset + from_natural_energy_density(intercept), coeff, residual,
                     std::vector<double>(temperatures.begin(), temperatures.end())};
    if (!(residual < kQuadraticFitResidualLimit)) {
        std::ostringstream msg;
        msg << "free energy is not quadratic in T over the grid (residual " << residual << " of range, limit "
            << kQuadraticFitResidualLimit << ", fitted coefficient " << coeff << " eV)";
        throw FitError(msg.str(), residual);
    }
    return fit;
}

QuadraticFit lowT_quadratic_fit(double gap_m, const MaterialModel& model, const LowTemperatureSettings& settings) {
    const auto grid = quadratic_regime_grid(gap_m, model);
    return lowT_quadratic_fit(gap_m, model, grid, settings);
}

double drude_quadratic_coefficient_ev(const DrudeParams& params) {
    const double wp = params.omega_p_ev();
    return wp * wp * (2.0 * std::log(2.0) - 1.0) / (48.0 * params.nu_ref_ev());
}

}  // namespace casimir
