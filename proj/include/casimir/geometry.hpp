#pragma once

#include "casimir/lifshitz.hpp"

namespace casimir {

/// Sphere of radius R at closest distance a above a plate.
class SpherePlateConfig {
public:
    SpherePlateConfig(double radius_m, double gap_m);

    double radius() const { return radius_m_; }
    double gap() const { return gap_m_; }

    /// The proximity approximation assumes R >> a; true when R < 100 a.
    bool proximity_advisory() const { return radius_m_ < 100.0 * gap_m_; }

private:
    double radius_m_;
    double gap_m_;
};

/// Proximity-force sphere-plate force, 2 pi R F(a), in N. Negative = attraction.
double pfa_force(const SpherePlateConfig& sp, double temperature_k, const MaterialModel& model,
                 const QuadratureSettings& quad = {});

/// (1/R)[F_ps(t_high) - F_ps(t_low)] = 2 pi [F(a, t_high) - F(a, t_low)], N/m.
/// R cancels identically.
double pfa_force_difference(const SpherePlateConfig& sp, const MaterialModel& model, double t_high = 350.0,
                            double t_low = 300.0, const QuadratureSettings& quad = {});

}  // namespace casimir
