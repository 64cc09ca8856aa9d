"""Finite-temperature Casimir pressure and free energy between metal plates.

Lengths are in metres, temperatures in kelvin, material parameters in eV.
Pressures are in Pa and free energies in J/m^2; negative means attraction.
"""

from ._core import (
    BracketError,
    ConfigError,
    ConvergenceError,
    DomainError,
    FitError,
    Material,
    RangeError,
    UnsupportedModelError,
    constants_version,
    drude,
    drude_bloch_gruneisen,
    free_energy,
    free_energy_difference,
    ideal,
    ideal_pressure_lowT,
    lowT_quadratic_fit,
    matsubara_frequency,
    mode_pressure,
    nu_bloch_gruneisen,
    permittivity,
    pfa_force,
    pfa_force_difference,
    plasma,
    pressure_difference,
    rte_from_impedance,
    sign_change_gap,
    tabulated,
    te_mode_function,
    te_mode_intercept,
    total_pressure,
    zero_mode_product,
)

__version__ = "0.1.0"
