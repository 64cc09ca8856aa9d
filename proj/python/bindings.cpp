// Python bindings for the thermal Casimir library. Lengths in metres,
// temperatures in kelvin, material parameters in eV, results in SI.

#include <optional>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "casimir/dispersion.hpp"
#include "casimir/errors.hpp"
#include "casimir/geometry.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/thermal.hpp"
#include "casimir/units.hpp"

namespace py = pybind11;
using namespace casimir;

namespace {

/// Opaque handle so that Python never sees the variant directly.
struct Material {
    MaterialModel model;
};

QuadratureSettings quad(double rel_tol) {
    QuadratureSettings q;
    q.rel_tol = rel_tol;
    return q;
}

py::dict difference_dict(const DifferenceResult& d) {
    py::dict out;
    out["a"] = d.a;
    out["t_low"] = d.t_low;
    out["t_high"] = d.t_high;
    out["delta"] = d.delta;
    out["raw_low"] = d.raw_low;
    out["raw_high"] = d.raw_high;
    return out;
}

py::dict sum_dict(const PressureResult& r) {
    py::list fractions;
    for (const auto& mc : r.per_mode) fractions.append(mc.fraction_percent);
    py::dict out;
    out["total"] = r.total;
    out["m_used"] = r.m_used;
    out["converged"] = r.converged;
    out["fraction_percent"] = fractions;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Finite-temperature Casimir pressure, free energy and sphere-plate force";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<RangeError>(m, "RangeError", PyExc_ValueError);
    py::register_exception<UnsupportedModelError>(m, "UnsupportedModelError", PyExc_ValueError);
    py::register_exception<BracketError>(m, "BracketError", PyExc_ValueError);
    py::register_exception<FitError>(m, "FitError", PyExc_RuntimeError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    py::class_<Material>(m, "Material")
        .def_property_readonly("name", [](const Material& mat) { return model_name(mat.model); })
        .def("__repr__", [](const Material& mat) { return "<Material " + model_name(mat.model) + ">"; });

    m.def(
        "drude",
        [](double omega_p_ev, double nu_ev) { return Material{Drude{DrudeParams(omega_p_ev, ConstantRelaxation{nu_ev})}}; },
        py::arg("omega_p_ev") = 9.0, py::arg("nu_ev") = 0.035, "Drude metal with constant relaxation (gold by default).");
    m.def(
        "drude_bloch_gruneisen",
        [](double omega_p_ev, double theta_debye_k, double nu_ref_ev, double t_ref_k) {
            return Material{Drude{DrudeParams(omega_p_ev, BlochGruneisen{theta_debye_k, nu_ref_ev, t_ref_k})}};
        },
        py::arg("omega_p_ev") = 9.0, py::arg("theta_debye_k") = 170.0, py::arg("nu_ref_ev") = 0.0356,
        py::arg("t_ref_k") = 300.0);
    m.def("plasma", [](double omega_p_ev) { return Material{Plasma(omega_p_ev)}; }, py::arg("omega_p_ev") = 9.0);
    m.def("ideal", [] { return Material{Ideal{}}; });
    m.def(
        "tabulated",
        [](const std::string& path, const std::string& zero_mode) {
            if (zero_mode != "drude_like" && zero_mode != "plasma_like") {
                throw ConfigError("zero_mode must be 'drude_like' or 'plasma_like'");
            }
            const auto cls = zero_mode == "plasma_like" ? ZeroModeClass::PlasmaLike : ZeroModeClass::DrudeLike;
            return Material{Tabulated{PermittivityTable::from_csv_file(path), cls}};
        },
        py::arg("path"), py::arg("zero_mode"));

    m.def("constants_version", [] { return constants().version; });
    m.def("matsubara_frequency", [](int m_index, double t) { return ThermalGapConfig(t, 1.0).matsubara(m_index); },
          py::arg("m"), py::arg("temperature_k"));
    m.def("permittivity", [](const Material& mat, double zeta, double t) { return permittivity(mat.model, zeta, t); },
          py::arg("material"), py::arg("zeta"), py::arg("temperature_k") = 300.0);
    m.def("nu_bloch_gruneisen",
          [](double t, double theta, double nu_ref, double t_ref) {
              return nu_bloch_gruneisen(t, BlochGruneisen{theta, nu_ref, t_ref});
          },
          py::arg("temperature_k"), py::arg("theta_debye_k") = 170.0, py::arg("nu_ref_ev") = 0.0356,
          py::arg("t_ref_k") = 300.0);
    m.def("zero_mode_product", [](const Material& mat) { return zero_mode_product(mat.model); }, py::arg("material"));

    const auto release = py::call_guard<py::gil_scoped_release>();
    m.def(
        "mode_pressure",
        [](int m_index, double a, double t, const Material& mat, double rel_tol) {
            return mode_pressure(m_index, ThermalGapConfig(t, a), mat.model, quad(rel_tol));
        },
        py::arg("m"), py::arg("gap_m"), py::arg("temperature_k"), py::arg("material"), py::arg("rel_tol") = 1e-10,
        release);
    m.def(
        "total_pressure",
        [](double a, double t, const Material& mat, double rel_tol) {
            PressureResult r;
            {
                py::gil_scoped_release unlocked;
                r = total_pressure(ThermalGapConfig(t, a), mat.model, quad(rel_tol));
            }
            return sum_dict(r);
        },
        py::arg("gap_m"), py::arg("temperature_k"), py::arg("material"), py::arg("rel_tol") = 1e-10,
        "Pressure in Pa (negative = attraction) with per-mode fractions in percent.");
    m.def(
        "free_energy",
        [](double a, double t, const Material& mat, double rel_tol) {
            return free_energy(ThermalGapConfig(t, a), mat.model, quad(rel_tol));
        },
        py::arg("gap_m"), py::arg("temperature_k"), py::arg("material"), py::arg("rel_tol") = 1e-10, release);
    m.def(
        "pressure_difference",
        [](double a, const Material& mat, double t_high, double t_low) {
            DifferenceResult d;
            {
                py::gil_scoped_release unlocked;
                d = pressure_difference(a, mat.model, t_high, t_low);
            }
            return difference_dict(d);
        },
        py::arg("gap_m"), py::arg("material"), py::arg("t_high") = 350.0, py::arg("t_low") = 300.0);
    m.def(
        "free_energy_difference",
        [](double a, const Material& mat, double t_high, double t_low) {
            DifferenceResult d;
            {
                py::gil_scoped_release unlocked;
                d = free_energy_difference(a, mat.model, t_high, t_low);
            }
            return difference_dict(d);
        },
        py::arg("gap_m"), py::arg("material"), py::arg("t_high") = 350.0, py::arg("t_low") = 300.0);
    m.def(
        "sign_change_gap",
        [](const Material& mat, double t_high, double t_low, double a_lo, double a_hi) {
            return sign_change_gap(mat.model, t_high, t_low, a_lo, a_hi);
        },
        py::arg("material"), py::arg("t_high") = 350.0, py::arg("t_low") = 300.0, py::arg("a_lo") = 2e-6,
        py::arg("a_hi") = 4e-6, release);
    m.def(
        "ideal_pressure_lowT", [](double a, double t) { return ideal_pressure_lowT(a, t).value; }, py::arg("gap_m"),
        py::arg("temperature_k"));
    m.def(
        "pfa_force",
        [](double radius, double a, double t, const Material& mat) {
            return pfa_force(SpherePlateConfig(radius, a), t, mat.model);
        },
        py::arg("radius_m"), py::arg("gap_m"), py::arg("temperature_k"), py::arg("material"), release);
    m.def(
        "pfa_force_difference",
        [](double a, const Material& mat, double t_high, double t_low) {
            // R cancels; any positive radius gives the same value.
            return pfa_force_difference(SpherePlateConfig(1.0, a), mat.model, t_high, t_low);
        },
        py::arg("gap_m"), py::arg("material"), py::arg("t_high") = 350.0, py::arg("t_low") = 300.0, release);
    m.def(
        "lowT_quadratic_fit",
        [](double a, const Material& mat, std::optional<std::vector<double>> temperatures) {
            QuadraticFit fit;
            {
                py::gil_scoped_release unlocked;
                fit = temperatures ? lowT_quadratic_fit(a, mat.model, *temperatures) : lowT_quadratic_fit(a, mat.model);
            }
            py::dict out;
            out["F0"] = fit.F0;
            out["coeff_ev"] = fit.coeff_ev;
            out["residual"] = fit.residual;
            out["temperatures"] = fit.temperatures;
            return out;
        },
        py::arg("gap_m"), py::arg("material"), py::arg("temperatures") = py::none());
    m.def(
        "te_mode_function",
        [](double zeta, double a, const Material& mat, double t) { return te_mode_function(zeta, a, mat.model, t); },
        py::arg("zeta"), py::arg("gap_m"), py::arg("material"), py::arg("temperature_k") = 300.0, release);
    m.def(
        "te_mode_intercept",
        [](double a, const Material& mat, double t) { return te_mode_intercept(a, mat.model, t); }, py::arg("gap_m"),
        py::arg("material"), py::arg("temperature_k") = 300.0, release);
    m.def("rte_from_impedance", &rte_from_impedance, py::arg("zeta"), py::arg("q"), py::arg("eps"));
}
