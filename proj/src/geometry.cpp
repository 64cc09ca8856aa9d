#include "casimir/geometry.hpp"

#include <cmath>

#include "casimir/errors.hpp"
#include "casimir/units.hpp"

namespace casimir {

SpherePlateConfig::SpherePlateConfig(double radius_m, double gap_m) : radius_m_(radius_m), gap_m_(gap_m) {
    if (!(radius_m_ > 0.0) || !std::isfinite(radius_m_)) throw DomainError("sphere radius must be positive");
    if (!(gap_m_ > 0.0) || !std::isfinite(gap_m_)) throw DomainError("gap width must be positive");
}

double pfa_force(const SpherePlateConfig& sp, double temperature_k, const MaterialModel& model,
                 const QuadratureSettings& quad) {
    return 2.0 * kPi * sp.radius() * free_energy(ThermalGapConfig(temperature_k, sp.gap()), model, quad);
}

double pfa_force_difference(const SpherePlateConfig& sp, const MaterialModel& model, double t_high, double t_low,
                            const QuadratureSettings& quad) {
    const double high = free_energy(ThermalGapConfig(t_high, sp.gap()), model, quad);
    const double low = free_energy(ThermalGapConfig(t_low, sp.gap()), model, quad);
    return 2.0 * kPi * (high - low);
}

}  // namespace casimir
