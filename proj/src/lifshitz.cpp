#include "casimir/lifshitz.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "casimir/errors.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/units.hpp"

namespace casimir {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// r^2 together with 1 - r^2 computed without cancellation.
struct Reflectivity {
    double r2;
    double complement;
};

struct ModeReflection {
    Reflectivity tm;
    Reflectivity te;
};

constexpr Reflectivity kPerfect{1.0, 0.0};
constexpr Reflectivity kNone{0.0, 1.0};

Reflectivity squared_ratio(double num_big, double num_small) {
    // r = (big - small)/(big + small); 1 - r^2 = 4 big small / (big + small)^2.
    const double sum = num_big + num_small;
    const double r = (num_big - num_small) / sum;
    return {r * r, 4.0 * num_big * num_small / (sum * sum)};
}

// Finite-frequency reflectivities in terms of y and w = zeta a / c, using
// S = sqrt(y^2 + w^2 (eps - 1)) = s w, so p = y / w and s = S / w.
ModeReflection finite_reflection(double y, double w, double eps) {
    const double S = std::sqrt(y * y + w * w * (eps - 1.0));
    return {squared_ratio(eps * y, S), squared_ratio(S, y)};
}

double plasma_reduced_frequency(double omega_p, double gap_m) { return omega_p * gap_m / constants().c; }

ModeReflection zero_frequency(const MaterialModel& model, double y, double gap_m) {
    auto plasma_te = [y](double y_p) {
        const double S = std::sqrt(y * y + y_p * y_p);
        return squared_ratio(S, y);
    };
    return std::visit(
        Overloaded{
            [](const Drude&) { return ModeReflection{kPerfect, kNone}; },
            [&](const Plasma& p) {
                return ModeReflection{kPerfect, plasma_te(plasma_reduced_frequency(ev_to_rad_per_s(p.omega_p_ev), gap_m))};
            },
            [](const Ideal&) { return ModeReflection{kPerfect, kPerfect}; },
            [&](const Tabulated& t) {
                if (t.zero_mode_class == ZeroModeClass::DrudeLike) return ModeReflection{kPerfect, kNone};
                // Plasma-like tables: effective omega_p^2 = zeta^2 (eps - 1) at the lowest node.
                const auto& n = t.table.nodes().front();
                const double wp = n.zeta * std::sqrt(n.eps - 1.0);
                return ModeReflection{kPerfect, plasma_te(plasma_reduced_frequency(wp, gap_m))};
            },
            [](const Vacuum&) { return ModeReflection{kNone, kNone}; },
        },
        model);
}

enum class Observable { Pressure, FreeEnergy };

// e^{-2y} R / (1 - R e^{-2y}), with 1 - R e^{-2y} = (1 - e^{-2y}) + (1 - R) e^{-2y}.
inline double pressure_term(const Reflectivity& r, double x, double one_minus_x) {
    if (r.r2 == 0.0) return 0.0;
    return r.r2 * x / (one_minus_x + r.complement * x);
}

inline double log_term(const Reflectivity& r, double x, double one_minus_x) {
    if (r.r2 == 0.0) return 0.0;
    const double rx = r.r2 * x;
    if (rx < 0.5) return std::log1p(-rx);
    return std::log(one_minus_x + r.complement * x);
}

template <class ReflectionAt>
QuadratureResult integrate_y(Observable obs, Polarization pol, double lo, const QuadratureSettings& quad,
                             ReflectionAt&& reflection_at) {
    const bool want_tm = pol != Polarization::TE;
    const bool want_te = pol != Polarization::TM;
    auto integrand = [&](double y) {
        const ModeReflection r = reflection_at(y);
        const double x = std::exp(-2.0 * y);
        const double one_minus_x = -std::expm1(-2.0 * y);
        double sum = 0.0;
        if (obs == Observable::Pressure) {
            if (want_tm) sum += pressure_term(r.tm, x, one_minus_x);
            if (want_te) sum += pressure_term(r.te, x, one_minus_x);
            return y * y * sum;
        }
        if (want_tm) sum += log_term(r.tm, x, one_minus_x);
        if (want_te) sum += log_term(r.te, x, one_minus_x);
        return y * sum;
    };
    return integrate_adaptive(integrand, lo, lo + quad.y_tail, quad.rel_tol, 0.0, quad.max_subdivisions);
}

// Dimensionless mode integral for Matsubara index m, both polarizations.
double mode_integral(Observable obs, int m, const ThermalGapConfig& cfg, const MaterialModel& model,
                     const QuadratureSettings& quad) {
    if (m < 0) throw DomainError("Matsubara index must be non-negative");
    quad.validate();

    QuadratureResult r;
    if (m == 0) {
        r = integrate_y(obs, Polarization::Both, 0.0, quad,
                        [&](double y) { return zero_frequency(model, y, cfg.gap()); });
    } else {
        const double w = m * cfg.gamma();
        if (std::holds_alternative<Ideal>(model)) {
            r = integrate_y(obs, Polarization::Both, w, quad, [](double) { return ModeReflection{kPerfect, kPerfect}; });
        } else {
            const double eps = permittivity(model, cfg.matsubara(m), cfg.temperature());
            r = integrate_y(obs, Polarization::Both, w, quad, [&](double y) { return finite_reflection(y, w, eps); });
        }
    }
    if (!r.converged) {
        std::ostringstream msg;
        msg << "quadrature for Matsubara mode " << m << " did not converge (estimate " << r.value << ", error "
            << r.abs_error << ")";
        throw ConvergenceError(msg.str(), r.value, r.abs_error);
    }
    return m == 0 ? 0.5 * r.value : r.value;
}

double pressure_prefactor(const ThermalGapConfig& cfg) {
    const double a = cfg.gap();
    return -constants().k_B * cfg.temperature() / (kPi * a * a * a);
}

double free_energy_prefactor(const ThermalGapConfig& cfg) {
    const double a = cfg.gap();
    return constants().k_B * cfg.temperature() / (2.0 * kPi * a * a);
}

template <class ModeFn>
PressureResult matsubara_sum(const QuadratureSettings& quad, ModeFn&& mode) {
    quad.validate();
    PressureResult out;
    NeumaierSum acc;
    int below = 0;
    for (int m = 0;; ++m) {
        if (m >= kMaxMatsubaraModes) {
            throw ConvergenceError("Matsubara sum exceeded " + std::to_string(kMaxMatsubaraModes) + " modes",
                                   acc.value(), std::abs(out.per_mode.back().value));
        }
        const double value = mode(m);
        acc += value;
        out.per_mode.push_back({m, value, 0.0});
        below = std::abs(value) <= quad.rel_tol * std::abs(acc.value()) ? below + 1 : 0;
        if (below >= 2 && m >= 5) break;
    }
    out.total = acc.value();
    out.m_used = static_cast<int>(out.per_mode.size());
    out.converged = true;
    for (auto& c : out.per_mode) c.fraction_percent = out.total != 0.0 ? 100.0 * c.value / out.total : 0.0;
    return out;
}

void require_positive(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        std::ostringstream msg;
        msg << what << " must be positive and finite (got " << value << ")";
        throw DomainError(msg.str());
    }
}

}  // namespace

void QuadratureSettings::validate() const {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-4)) throw DomainError("quadrature rel_tol must lie in (0, 1e-4]");
    if (!(y_tail >= 10.0)) throw DomainError("quadrature y_tail must be at least 10");
    if (max_subdivisions < 1) throw DomainError("quadrature max_subdivisions must be positive");
}

ThermalGapConfig::ThermalGapConfig(double temperature_k, double gap_m) : temperature_k_(temperature_k), gap_m_(gap_m) {
    require_positive(temperature_k_, "temperature");
    require_positive(gap_m_, "gap width");
    gamma_ = 2.0 * kPi * a_times_t();
}

double ThermalGapConfig::a_times_t() const {
    const auto& k = constants();
    return gap_m_ * k.k_B * temperature_k_ / k.hbar_c();
}

double ThermalGapConfig::matsubara(int m) const {
    const auto& k = constants();
    return 2.0 * kPi * m * k.k_B * temperature_k_ / k.hbar;
}

LifshitzVariables lifshitz_variables(double y, int m, const ThermalGapConfig& cfg, double eps) {
    if (m < 1) throw DomainError("lifshitz_variables requires m >= 1");
    if (!(eps >= 1.0)) throw DomainError("permittivity must be at least 1");
    const double w = m * cfg.gamma();
    if (!(y >= w)) {
        std::ostringstream msg;
        msg << "y = " << y << " below the mode threshold m gamma = " << w;
        throw DomainError(msg.str());
    }
    const double p = y / w;
    return {p, std::sqrt(eps - 1.0 + p * p)};
}

ReflectionPair reflection_from_variables(const LifshitzVariables& v, double eps) {
    const double tm = (eps * v.p - v.s) / (eps * v.p + v.s);
    const double te = (v.s - v.p) / (v.s + v.p);
    return {tm * tm, te * te};
}

ReflectionPair reflection_pair(double y, int m, const ThermalGapConfig& cfg, double eps) {
    return reflection_from_variables(lifshitz_variables(y, m, cfg, eps), eps);
}

ReflectionPair zero_frequency_reflection(const MaterialModel& model, double y, const ThermalGapConfig& cfg) {
    if (!(y > 0.0)) throw DomainError("zero_frequency_reflection requires y > 0");
    const auto r = zero_frequency(model, y, cfg.gap());
    return {r.tm.r2, r.te.r2};
}

double mode_pressure(int m, const ThermalGapConfig& cfg, const MaterialModel& model, const QuadratureSettings& quad) {
    return pressure_prefactor(cfg) * mode_integral(Observable::Pressure, m, cfg, model, quad);
}

double mode_free_energy(int m, const ThermalGapConfig& cfg, const MaterialModel& model,
                        const QuadratureSettings& quad) {
    return free_energy_prefactor(cfg) * mode_integral(Observable::FreeEnergy, m, cfg, model, quad);
}

PressureResult total_pressure(const ThermalGapConfig& cfg, const MaterialModel& model,
                              const QuadratureSettings& quad) {
    const double pre = pressure_prefactor(cfg);
    return matsubara_sum(quad, [&](int m) { return pre * mode_integral(Observable::Pressure, m, cfg, model, quad); });
}

PressureResult free_energy_modes(const ThermalGapConfig& cfg, const MaterialModel& model,
                                 const QuadratureSettings& quad) {
    const double pre = free_energy_prefactor(cfg);
    return matsubara_sum(quad, [&](int m) { return pre * mode_integral(Observable::FreeEnergy, m, cfg, model, quad); });
}

double free_energy(const ThermalGapConfig& cfg, const MaterialModel& model, const QuadratureSettings& quad) {
    return free_energy_modes(cfg, model, quad).total;
}

double mode_function(double zeta, double gap_m, const MaterialModel& model, double temperature_k, Polarization pol,
                     const QuadratureSettings& quad) {
    if (!(zeta >= 0.0) || !std::isfinite(zeta)) throw DomainError("mode_function requires zeta >= 0");
    require_positive(gap_m, "gap width");
    require_positive(temperature_k, "temperature");
    quad.validate();

    QuadratureResult r;
    if (zeta == 0.0) {
        r = integrate_y(Observable::FreeEnergy, pol, 0.0, quad, [&](double y) { return zero_frequency(model, y, gap_m); });
    } else {
        const double w = zeta * gap_m / constants().c;
        if (std::holds_alternative<Ideal>(model)) {
            r = integrate_y(Observable::FreeEnergy, pol, w, quad,
                            [](double) { return ModeReflection{kPerfect, kPerfect}; });
        } else {
            const double eps = permittivity(model, zeta, temperature_k);
            r = integrate_y(Observable::FreeEnergy, pol, w, quad, [&](double y) { return finite_reflection(y, w, eps); });
        }
    }
    if (!r.converged) {
        std::ostringstream msg;
        msg << "mode function quadrature at zeta = " << zeta << " did not converge";
        throw ConvergenceError(msg.str(), r.value, r.abs_error);
    }
    return r.value;
}

double te_mode_function(double zeta, double gap_m, const MaterialModel& model, double temperature_k,
                        const QuadratureSettings& quad) {
    return mode_function(zeta, gap_m, model, temperature_k, Polarization::TE, quad);
}

double te_mode_intercept(double gap_m, const MaterialModel& model, double temperature_k, double w_lo, double w_hi,
                         int samples, const QuadratureSettings& quad) {
    if (samples < 2 || !(w_hi > w_lo) || !(w_lo > 0.0)) throw DomainError("te_mode_intercept needs 0 < w_lo < w_hi");
    const double c = constants().c;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double w = w_lo + (w_hi - w_lo) * i / (samples - 1);
        const double f = te_mode_function(w * c / gap_m, gap_m, model, temperature_k, quad);
        sx += w;
        sy += f;
        sxx += w * w;
        sxy += w * f;
    }
    const double n = samples;
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return (sy - slope * sx) / n;
}

double surface_impedance(double zeta, double q, double eps) {
    require_positive(zeta, "zeta");
    if (!(q >= zeta)) throw DomainError("surface_impedance requires q >= zeta (q^2 = k_perp^2 + zeta^2)");
    if (!(eps >= 1.0)) throw DomainError("permittivity must be at least 1");
    return -zeta / std::sqrt(zeta * zeta * (eps - 1.0) + q * q);
}

double rte_from_impedance(double zeta, double q, double eps) {
    const double z = surface_impedance(zeta, q, eps);
    const double zp = z * (q / zeta);
    return -(1.0 + zp) / (1.0 - zp);
}

ZeroFrequencyLimits rte_zero_frequency_comparison(const MaterialModel& model, double q_fixed,
                                                  std::span<const double> zeta_sequence, double temperature_k) {
    if (!std::holds_alternative<Drude>(model) && !std::holds_alternative<Plasma>(model)) {
        throw UnsupportedModelError("rte_zero_frequency_comparison requires a Drude or plasma model");
    }
    if (zeta_sequence.empty()) throw DomainError("zeta sequence is empty");
    for (std::size_t i = 0; i < zeta_sequence.size(); ++i) {
        require_positive(zeta_sequence[i], "zeta");
        if (i > 0 && !(zeta_sequence[i] < zeta_sequence[i - 1])) throw DomainError("zeta sequence must decrease");
    }

    ZeroFrequencyLimits out{};
    for (double zeta : zeta_sequence) {
        const double eps = permittivity(model, zeta, temperature_k);
        const double r_k = rte_from_impedance(zeta, q_fixed, eps);
        // Frequency-only impedance: Z taken at normal incidence (q = zeta).
        const double z_freq = -1.0 / std::sqrt(eps);
        const double zp = z_freq * (q_fixed / zeta);
        const double r_w = -(1.0 + zp) / (1.0 - zp);
        out = {r_k * r_k, r_w * r_w};
    }
    return out;
}

}  // namespace casimir
