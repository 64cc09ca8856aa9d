#include "casimir/dispersion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

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

void require_positive(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        std::ostringstream msg;
        msg << what << " must be positive and finite (got " << value << ")";
        throw DomainError(msg.str());
    }
}

void validate(const RelaxationModel& model) {
    std::visit(Overloaded{
                   [](const ConstantRelaxation& c) { require_positive(c.nu_ev, "relaxation frequency nu"); },
                   [](const BlochGruneisen& bg) {
                       require_positive(bg.theta_debye_k, "Debye temperature");
                       require_positive(bg.nu_ref_ev, "reference relaxation frequency");
                       require_positive(bg.t_ref_k, "reference temperature");
                   },
               },
               model);
}

// J5(x) = int_0^x t^5 e^t / (e^t - 1)^2 dt, written with sinh to stay finite
// for large t.
double bloch_gruneisen_integral(double x) {
    auto integrand = [](double t) {
        const double s = std::sinh(0.5 * t);
        return std::pow(t, 5) / (4.0 * s * s);
    };
    // The integrand is negligible beyond t ~ 200 (e^-200 t^5).
    const double upper = std::min(x, 200.0);
    const auto r = integrate_adaptive(integrand, 0.0, upper, 1e-13, 0.0, 400);
    return r.value;
}

double bloch_gruneisen_shape(double temperature_k, double theta_k) {
    const double ratio = temperature_k / theta_k;
    return std::pow(ratio, 5) * bloch_gruneisen_integral(1.0 / ratio);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view text, double& out) {
    text = trim(text);
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc{} && ptr == end && std::isfinite(out);
}

}  // namespace

// --- DrudeParams -----------------------------------------------------------

DrudeParams::DrudeParams(double omega_p_ev, RelaxationModel relaxation)
    : omega_p_ev_(omega_p_ev), relaxation_(relaxation) {
    require_positive(omega_p_ev_, "plasma frequency omega_p");
    validate(relaxation_);
}

DrudeParams DrudeParams::gold() { return DrudeParams(9.0, ConstantRelaxation{0.035}); }

double DrudeParams::omega_p() const { return ev_to_rad_per_s(omega_p_ev_); }

double DrudeParams::nu_ref_ev() const {
    return std::visit(Overloaded{
                          [](const ConstantRelaxation& c) { return c.nu_ev; },
                          [](const BlochGruneisen& bg) { return bg.nu_ref_ev; },
                      },
                      relaxation_);
}

double DrudeParams::nu_ev(double temperature_k) const { return nu_bloch_gruneisen(temperature_k, relaxation_); }

double DrudeParams::nu(double temperature_k) const { return ev_to_rad_per_s(nu_ev(temperature_k)); }

// --- PermittivityTable -----------------------------------------------------

PermittivityTable::PermittivityTable(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2) throw ConfigError("permittivity table needs at least 2 points");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        if (!(n.zeta > 0.0) || !std::isfinite(n.zeta)) {
            throw ConfigError("permittivity table point " + std::to_string(i) + ": zeta must be positive");
        }
        if (!(n.eps > 1.0) || !std::isfinite(n.eps)) {
            throw ConfigError("permittivity table point " + std::to_string(i) + ": epsilon must exceed 1");
        }
        if (i > 0 && !(n.zeta > nodes_[i - 1].zeta)) {
            throw ConfigError("permittivity table point " + std::to_string(i) + ": zeta not strictly increasing");
        }
    }
}

PermittivityTable PermittivityTable::parse_csv(std::istream& in, const std::string& source) {
    std::vector<Node> nodes;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    auto fail = [&](const std::string& why) -> void {
        throw ConfigError(source + ":" + std::to_string(line_no) + ": " + why);
    };

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
        view = trim(view);
        if (view.empty()) continue;

        if (!header_seen) {
            const auto comma = view.find(',');
            if (comma == std::string_view::npos || trim(view.substr(0, comma)) != "zeta_rad_per_s" ||
                trim(view.substr(comma + 1)) != "epsilon") {
                fail("expected header 'zeta_rad_per_s,epsilon'");
            }
            header_seen = true;
            continue;
        }

        const auto comma = view.find(',');
        if (comma == std::string_view::npos || view.find(',', comma + 1) != std::string_view::npos) {
            fail("expected two comma-separated values");
        }
        Node node{};
        if (!parse_double(view.substr(0, comma), node.zeta)) fail("cannot parse zeta");
        if (!parse_double(view.substr(comma + 1), node.eps)) fail("cannot parse epsilon");
        if (!(node.zeta > 0.0)) fail("zeta must be positive");
        if (!(node.eps > 1.0)) fail("epsilon must exceed 1");
        if (!nodes.empty() && !(node.zeta > nodes.back().zeta)) fail("zeta not strictly increasing");
        nodes.push_back(node);
    }
    if (!header_seen) throw ConfigError(source + ": empty permittivity table");
    if (nodes.size() < 2) throw ConfigError(source + ": permittivity table needs at least 2 points");
    return PermittivityTable(std::move(nodes));
}

PermittivityTable PermittivityTable::from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open permittivity table '" + path + "'");
    return parse_csv(in, path);
}

double PermittivityTable::operator()(double zeta) const {
    if (!(zeta >= zeta_min() && zeta <= zeta_max())) {
        std::ostringstream msg;
        msg << "zeta " << zeta << " rad/s outside table range [" << zeta_min() << ", " << zeta_max() << "]";
        throw RangeError(msg.str());
    }
    auto upper = std::lower_bound(nodes_.begin(), nodes_.end(), zeta,
                                  [](const Node& n, double z) { return n.zeta < z; });
    if (upper->zeta == zeta) return upper->eps;
    const auto lower = upper - 1;
    const double t = (std::log(zeta) - std::log(lower->zeta)) / (std::log(upper->zeta) - std::log(lower->zeta));
    const double log_chi = (1.0 - t) * std::log(lower->eps - 1.0) + t * std::log(upper->eps - 1.0);
    return 1.0 + std::exp(log_chi);
}

// --- models -----------------------------------------------------------------

Plasma::Plasma(double omega_p) : omega_p_ev(omega_p) { require_positive(omega_p_ev, "plasma frequency omega_p"); }

std::string model_name(const MaterialModel& model) {
    return std::visit(Overloaded{
                          [](const Drude&) { return std::string("drude"); },
                          [](const Plasma&) { return std::string("plasma"); },
                          [](const Ideal&) { return std::string("ideal"); },
                          [](const Tabulated&) { return std::string("table"); },
                          [](const Vacuum&) { return std::string("vacuum"); },
                      },
                      model);
}

double eps_drude(double zeta, const DrudeParams& params, double temperature_k) {
    require_positive(zeta, "zeta");
    require_positive(temperature_k, "temperature");
    const double wp = params.omega_p();
    return 1.0 + wp * wp / (zeta * (zeta + params.nu(temperature_k)));
}

double eps_plasma(double zeta, double omega_p_ev) {
    require_positive(zeta, "zeta");
    require_positive(omega_p_ev, "plasma frequency omega_p");
    const double wp = ev_to_rad_per_s(omega_p_ev);
    const double ratio = wp / zeta;
    return 1.0 + ratio * ratio;
}

double eps_tabulated(double zeta, const PermittivityTable& table) {
    require_positive(zeta, "zeta");
    return table(zeta);
}

double permittivity(const MaterialModel& model, double zeta, double temperature_k) {
    return std::visit(Overloaded{
                          [&](const Drude& d) { return eps_drude(zeta, d.params, temperature_k); },
                          [&](const Plasma& p) { return eps_plasma(zeta, p.omega_p_ev); },
                          [](const Ideal&) { return std::numeric_limits<double>::infinity(); },
                          [&](const Tabulated& t) { return eps_tabulated(zeta, t.table); },
                          [](const Vacuum&) { return 1.0; },
                      },
                      model);
}

double nu_bloch_gruneisen(double temperature_k, const RelaxationModel& model) {
    require_positive(temperature_k, "temperature");
    validate(model);
    return std::visit(Overloaded{
                          [](const ConstantRelaxation& c) { return c.nu_ev; },
                          [&](const BlochGruneisen& bg) {
                              if (temperature_k == bg.t_ref_k) return bg.nu_ref_ev;
                              return bg.nu_ref_ev * bloch_gruneisen_shape(temperature_k, bg.theta_debye_k) /
                                     bloch_gruneisen_shape(bg.t_ref_k, bg.theta_debye_k);
                          },
                      },
                      model);
}

double spectral_integral(double gamma_spectral, double upper) {
    require_positive(gamma_spectral, "spectral width gamma");
    if (!(upper >= 0.0)) throw DomainError("upper integration limit must be non-negative");
    auto p = [gamma_spectral](double w) { return (2.0 / kPi) * gamma_spectral / (w * w + gamma_spectral * gamma_spectral); };

    // Panels grow by decades from the Lorentzian width; past 1e6 gamma the
    // remaining mass is (2/pi) atan(gamma / cutoff), added in closed form.
    const double cutoff = 1e6 * gamma_spectral;
    const double stop = std::min(upper, cutoff);
    NeumaierSum total;
    double lo = 0.0;
    double hi = gamma_spectral;
    while (lo < stop) {
        hi = std::min(hi, stop);
        total += integrate_adaptive(p, lo, hi, 1e-14, 0.0, 200).value;
        lo = hi;
        hi *= 10.0;
    }
    if (upper > cutoff) {
        const double tail_lo = std::atan(gamma_spectral / cutoff);
        const double tail_hi = std::isinf(upper) ? 0.0 : std::atan(gamma_spectral / upper);
        total += (2.0 / kPi) * (tail_lo - tail_hi);
    }
    return total.value();
}

double sum_rule_check(double gamma_spectral) {
    return spectral_integral(gamma_spectral, std::numeric_limits<double>::infinity());
}

double zero_mode_product(const MaterialModel& model) {
    auto sequence_limit = [](auto&& product, double omega_p_sq) {
        // Geometric sequence 1e12, 1e11, ... rad/s. Continue until the product
        // drops below 1e-12 omega_p^2 (limit 0) or stops changing to 1e-12
        // relative over three consecutive steps (finite limit).
        double zeta = 1e12;
        double prev = product(zeta);
        int stable_steps = 0;
        for (int step = 0; step < 60; ++step) {
            zeta *= 0.1;
            const double value = product(zeta);
            if (value < 1e-12 * omega_p_sq) return 0.0;
            if (std::abs(value - prev) <= 1e-12 * std::abs(prev)) {
                if (++stable_steps >= 3) return value;
            } else {
                stable_steps = 0;
            }
            prev = value;
        }
        throw ConvergenceError("zero-mode product did not converge on the zeta sequence", prev, std::abs(prev));
    };

    return std::visit(Overloaded{
                          [&](const Drude& d) {
                              const double wp = d.params.omega_p();
                              // The product is evaluated at the reference relaxation frequency.
                              const double nu = ev_to_rad_per_s(d.params.nu_ref_ev());
                              return sequence_limit(
                                  [&](double z) { return wp * wp * z / (z + nu); }, wp * wp);
                          },
                          [&](const Plasma& p) {
                              const double wp = ev_to_rad_per_s(p.omega_p_ev);
                              return sequence_limit(
                                  [&](double z) { return (eps_plasma(z, p.omega_p_ev) - 1.0) * z * z; }, wp * wp);
                          },
                          [](const Ideal&) -> double {
                              throw UnsupportedModelError("zero_mode_product: ideal model has no finite permittivity");
                          },
                          [](const Tabulated&) -> double {
                              throw UnsupportedModelError(
                                  "zero_mode_product: tabulated models declare their zero-mode class");
                          },
                          [](const Vacuum&) -> double {
                              throw UnsupportedModelError("zero_mode_product: requires a Drude or plasma model");
                          },
                      },
                      model);
}

}  // namespace casimir
