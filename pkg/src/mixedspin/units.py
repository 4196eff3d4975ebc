"""Physical constants and unit conversions.

Constants are derived from the 2018 SI defining constants (h, c, k_B,
N_A exact; mu_B from CODATA 2018), never typed in as rounded composites.

Two susceptibility conventions appear throughout:

* "reduced": chi_tilde = chi * k_B * T / (g^2 mu_B^2), dimensionless,
  per formula unit (one unit cell of the chain, i.e. one (S, 1/2) pair).
* "emu/mol": molar cgs susceptibility per mole of formula units.
"""

from __future__ import annotations

__all__ = [
    "KELVIN_PER_WAVENUMBER",
    "CURIE_FACTOR_EMU_K_PER_MOL",
    "wavenumber_to_kelvin",
    "kelvin_to_wavenumber",
    "chi_reduced_to_emu_per_mol",
    "chi_emu_per_mol_to_reduced",
    "convert_units",
]

H_PLANCK_J_S = 6.62607015e-34
C_LIGHT_CM_PER_S = 2.99792458e10
K_BOLTZMANN_J_PER_K = 1.380649e-23
N_AVOGADRO_PER_MOL = 6.02214076e23
MU_BOHR_ERG_PER_G = 9.2740100783e-21
K_BOLTZMANN_ERG_PER_K = 1.380649e-16

# 1 cm^-1 of energy, expressed in kelvin: h*c/k_B ~ 1.438777 K cm
KELVIN_PER_WAVENUMBER = H_PLANCK_J_S * C_LIGHT_CM_PER_S / K_BOLTZMANN_J_PER_K

# N_A mu_B^2 / k_B ~ 0.37515 emu K / mol, the Curie-law prefactor
CURIE_FACTOR_EMU_K_PER_MOL = (
    N_AVOGADRO_PER_MOL * MU_BOHR_ERG_PER_G**2 / K_BOLTZMANN_ERG_PER_K
)


def wavenumber_to_kelvin(value_cm1: float) -> float:
    """Energy in cm^-1 -> the same energy as a temperature in K."""
    return value_cm1 * KELVIN_PER_WAVENUMBER


def kelvin_to_wavenumber(value_kelvin: float) -> float:
    return value_kelvin / KELVIN_PER_WAVENUMBER


def chi_reduced_to_emu_per_mol(
    chi_reduced: float, temperature_kelvin: float, g_factor: float
) -> float:
    """Dimensionless chi*k_B*T/(g^2 mu_B^2) -> molar cgs susceptibility.

    chi_mol = (N_A mu_B^2 / k_B) * g^2 / T * chi_reduced, per mole of
    formula units.
    """
    if temperature_kelvin <= 0.0:
        raise ValueError(f"temperature must be > 0, got {temperature_kelvin}")
    return CURIE_FACTOR_EMU_K_PER_MOL * g_factor**2 / temperature_kelvin * chi_reduced


def chi_emu_per_mol_to_reduced(
    chi_emu_per_mol: float, temperature_kelvin: float, g_factor: float
) -> float:
    if temperature_kelvin <= 0.0:
        raise ValueError(f"temperature must be > 0, got {temperature_kelvin}")
    if g_factor == 0.0:
        raise ValueError("g_factor must be nonzero")
    return (
        chi_emu_per_mol
        * temperature_kelvin
        / (CURIE_FACTOR_EMU_K_PER_MOL * g_factor**2)
    )


_ENERGY_UNITS = {"cm-1", "K"}
_CHI_UNITS = {"emu/mol", "reduced"}


def convert_units(
    value: float,
    from_unit: str,
    to_unit: str,
    *,
    temperature_kelvin: float | None = None,
    g_factor: float | None = None,
) -> float:
    """Convert between supported unit pairs.

    Energies: 'cm-1' <-> 'K'. Susceptibilities: 'emu/mol' <-> 'reduced',
    which additionally need temperature_kelvin and g_factor.
    """
    if from_unit == to_unit:
        if from_unit in _ENERGY_UNITS | _CHI_UNITS:
            return float(value)
        raise ValueError(f"unknown unit {from_unit!r}")
    if from_unit in _ENERGY_UNITS and to_unit in _ENERGY_UNITS:
        if from_unit == "cm-1":
            return wavenumber_to_kelvin(value)
        return kelvin_to_wavenumber(value)
    if from_unit in _CHI_UNITS and to_unit in _CHI_UNITS:
        if temperature_kelvin is None or g_factor is None:
            raise ValueError(
                "susceptibility conversion needs temperature_kelvin and g_factor"
            )
        if from_unit == "reduced":
            return chi_reduced_to_emu_per_mol(value, temperature_kelvin, g_factor)
        return chi_emu_per_mol_to_reduced(value, temperature_kelvin, g_factor)
    raise ValueError(f"cannot convert {from_unit!r} to {to_unit!r}")
