#pragma once

// Dielectric response at imaginary frequency, eps(i zeta), for the material
// models used in the Lifshitz sums, plus the zero-frequency diagnostics that
// separate Drude-like from plasma-like metals.

#include <istream>
#include <string>
#include <variant>
#include <vector>

namespace casimir {

/// Relaxation frequency that does not depend on temperature.
struct ConstantRelaxation {
    double nu_ev = 0.035;
};

/// Bloch-Grueneisen temperature dependence, calibrated so that
/// nu(t_ref_k) == nu_ref_ev.
struct BlochGruneisen {
    double theta_debye_k = 170.0;
    double nu_ref_ev = 0.0356;
    double t_ref_k = 300.0;
};

using RelaxationModel = std::variant<ConstantRelaxation, BlochGruneisen>;

/// Drude parameters: plasma frequency and relaxation model. Energies are
/// stored in eV; the rad/s accessors convert through hbar.
class DrudeParams {
public:
    DrudeParams(double omega_p_ev, RelaxationModel relaxation);

    /// Gold at room temperature: omega_p = 9.0 eV, constant nu = 35 meV.
    static DrudeParams gold();

    double omega_p_ev() const { return omega_p_ev_; }
    double omega_p() const;
    const RelaxationModel& relaxation() const { return relaxation_; }

    /// Reference relaxation frequency (the constant value, or nu at T_ref).
    double nu_ref_ev() const;
    double nu_ev(double temperature_k) const;
    double nu(double temperature_k) const;

private:
    double omega_p_ev_;
    RelaxationModel relaxation_;
};

/// Sampled eps(i zeta) on a strictly ascending zeta grid with eps > 1.
/// Interpolation is linear in (log zeta, log(eps - 1)).
class PermittivityTable {
public:
    struct Node {
        double zeta;  // rad/s
        double eps;
    };

    explicit PermittivityTable(std::vector<Node> nodes);

    /// Reads the `zeta_rad_per_s,epsilon` CSV format. Errors name the line.
    static PermittivityTable parse_csv(std::istream& in, const std::string& source = "<stream>");
    static PermittivityTable from_csv_file(const std::string& path);

    const std::vector<Node>& nodes() const { return nodes_; }
    double zeta_min() const { return nodes_.front().zeta; }
    double zeta_max() const { return nodes_.back().zeta; }

    double operator()(double zeta) const;

private:
    std::vector<Node> nodes_;
};

enum class ZeroModeClass { DrudeLike, PlasmaLike };

struct Drude {
    DrudeParams params;
};

struct Plasma {
    explicit Plasma(double omega_p_ev);
    double omega_p_ev;
};

/// Perfect reflector: A = B = 1 at every frequency. Has no finite eps.
struct Ideal {};

struct Tabulated {
    PermittivityTable table;
    ZeroModeClass zero_mode_class;
};

/// eps == 1 everywhere. Null model for wiring checks.
struct Vacuum {};

using MaterialModel = std::variant<Drude, Plasma, Ideal, Tabulated, Vacuum>;

std::string model_name(const MaterialModel& model);

/// eps(i zeta) = 1 + omega_p^2 / (zeta (zeta + nu(T))).
double eps_drude(double zeta, const DrudeParams& params, double temperature_k);

/// eps(i zeta) = 1 + omega_p^2 / zeta^2.
double eps_plasma(double zeta, double omega_p_ev);

/// Log-log interpolation of the table; RangeError outside the node range.
double eps_tabulated(double zeta, const PermittivityTable& table);

/// eps(i zeta, T) for any model. Ideal returns +infinity.
double permittivity(const MaterialModel& model, double zeta, double temperature_k);

/// Relaxation frequency in eV at temperature T.
///
/// For BlochGruneisen: nu(T) = C (T/theta)^5 J5(theta/T) with
/// J5(x) = int_0^x t^5 e^t / (e^t - 1)^2 dt and C fixed by nu(T_ref) = nu_ref.
double nu_bloch_gruneisen(double temperature_k, const RelaxationModel& model);

/// Integral of the Drude spectral function p(w) = (2/pi) g / (w^2 + g^2)
/// over [0, upper]; upper = +inf adds the analytic tail past a numerical
/// cutoff.
double spectral_integral(double gamma_spectral, double upper);

/// Sum rule check, integral of p over [0, inf). Should return 1.
double sum_rule_check(double gamma_spectral);

/// lim_{zeta->0} zeta^2 (eps(i zeta) - 1) in rad^2/s^2, estimated on a
/// decreasing geometric zeta sequence. Zero for Drude, omega_p^2 for plasma.
/// Ideal and tabulated models raise UnsupportedModelError.
double zero_mode_product(const MaterialModel& model);

}  // namespace casimir
