"""Closed-form thermodynamics of one antiferromagnetic (S, 1/2) exchange pair.

The pair Hamiltonian J S.s (J > 0) has exactly two multiplets: total spin
S + 1/2 at energy J S / 2 with degeneracy 2S + 2, and total spin S - 1/2
at energy -J (S + 1) / 2 with degeneracy 2S. The gap is J (2S + 1) / 2.
Every quantity in this module follows from that two-level structure.

Temperatures and couplings are both in kelvin (energies divided by k_B).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .operators import SpinQuantum

__all__ = [
    "PairSpectrum",
    "pair_correlator",
    "pair_correlator_zero_temperature",
    "pair_correlator_literature",
    "pair_negativity",
    "pair_negativity_zero_temperature",
    "characteristic_temperature",
    "PairThermalResult",
    "pair_thermal",
]


def _check_coupling(coupling_kelvin: float) -> None:
    if not math.isfinite(coupling_kelvin) or coupling_kelvin <= 0.0:
        raise ValueError(
            f"antiferromagnetic coupling must be > 0, got {coupling_kelvin}"
        )


def _check_temperature(temperature_kelvin: float) -> None:
    if not math.isfinite(temperature_kelvin) or temperature_kelvin <= 0.0:
        raise ValueError(f"temperature must be > 0, got {temperature_kelvin}")


def _check_spin(spin: SpinQuantum) -> None:
    if spin.twice_spin < 1:
        raise ValueError("pair needs a magnetic spin, twice_spin >= 1")


@dataclass(frozen=True)
class PairSpectrum:
    """The two exchange multiplets of an (S, 1/2) pair."""

    spin: SpinQuantum
    coupling_kelvin: float

    def __post_init__(self) -> None:
        _check_spin(self.spin)
        _check_coupling(self.coupling_kelvin)

    @property
    def upper_energy_kelvin(self) -> float:
        return self.coupling_kelvin * self.spin.value / 2.0

    @property
    def lower_energy_kelvin(self) -> float:
        return -self.coupling_kelvin * (self.spin.value + 1.0) / 2.0

    @property
    def upper_degeneracy(self) -> int:
        return self.spin.twice_spin + 2

    @property
    def lower_degeneracy(self) -> int:
        return self.spin.twice_spin

    @property
    def gap_kelvin(self) -> float:
        return self.coupling_kelvin * (self.spin.twice_spin + 1) / 2.0


def _boltzmann_ratio(spin: SpinQuantum, coupling_kelvin: float, temperature_kelvin: float) -> float:
    """x = exp(-gap/T) in (0, 1]; underflows cleanly to 0 for T << gap."""
    gap = coupling_kelvin * (spin.twice_spin + 1) / 2.0
    arg = -gap / temperature_kelvin
    # exp underflow below ~-745 just returns 0.0, which is the exact limit
    return math.exp(arg) if arg > -745.0 else 0.0


def pair_correlator(
    spin: SpinQuantum, coupling_kelvin: float, temperature_kelvin: float
) -> float:
    """Thermal <S.s> of the pair.

    G1(T) = S(S+1)(x - 1) / (2((S+1)x + S)) with x = exp(-J(2S+1)/(2T)).
    Monotone increasing in T, from -(S+1)/2 at T=0 toward 0.
    """
    _check_spin(spin)
    _check_coupling(coupling_kelvin)
    _check_temperature(temperature_kelvin)
    s = spin.value
    x = _boltzmann_ratio(spin, coupling_kelvin, temperature_kelvin)
    return s * (s + 1.0) * (x - 1.0) / (2.0 * ((s + 1.0) * x + s))


def pair_correlator_zero_temperature(spin: SpinQuantum) -> float:
    """T -> 0 limit of the pair correlator: -(S+1)/2."""
    _check_spin(spin)
    return -(spin.value + 1.0) / 2.0


def pair_correlator_literature(
    spin: SpinQuantum, coupling_kelvin: float, temperature_kelvin: float
) -> float:
    """Commonly tabulated closed forms for the two smallest spins.

    For S = 1/2 this coincides with `pair_correlator`. For S = 1 the
    tabulated expression carries a 5/6 prefactor relative to the exact
    two-level thermal average; it is kept as a separate, clearly labeled
    variant for comparison, not used by default anywhere.
    """
    _check_coupling(coupling_kelvin)
    _check_temperature(temperature_kelvin)
    t = temperature_kelvin
    j = coupling_kelvin
    if spin.twice_spin == 1:
        e = math.exp(-j / t) if -j / t > -745.0 else 0.0
        return -3.0 * (1.0 - e) / (4.0 * (1.0 + 3.0 * e))
    if spin.twice_spin == 2:
        e = math.exp(-1.5 * j / t) if -1.5 * j / t > -745.0 else 0.0
        return -5.0 * (1.0 - e) / (6.0 * (1.0 + 2.0 * e))
    raise ValueError(
        f"literature correlator is tabulated only for S = 1/2 and S = 1, got S = {spin}"
    )


def pair_negativity(
    spin: SpinQuantum, coupling_kelvin: float, temperature_kelvin: float
) -> float:
    """Negativity of the thermal pair state.

    The partial transpose has 2S eigenvalues equal to
    tau = (S + 2 G1) / (D (D - 1)) with D = 2S + 1; negativity is
    2S * max(0, -tau), which simplifies to max(0, -(S + 2 G1)) / D.
    """
    g1 = pair_correlator(spin, coupling_kelvin, temperature_kelvin)
    d = spin.twice_spin + 1
    tau = (spin.value + 2.0 * g1) / (d * (d - 1.0))
    return spin.twice_spin * max(0.0, -tau)


def pair_negativity_zero_temperature(spin: SpinQuantum) -> float:
    """T -> 0 limit of the pair negativity: 1/(2S+1)."""
    _check_spin(spin)
    return 1.0 / (spin.twice_spin + 1)


def characteristic_temperature(spin: SpinQuantum, coupling_kelvin: float) -> float:
    """Temperature where the pair loses its entanglement.

    The boundary sits where G1 crosses -S/2, which the two-level form
    solves in closed form: T_c = J (2S + 1) / (2 ln(2S + 2)).
    """
    _check_spin(spin)
    _check_coupling(coupling_kelvin)
    ts = spin.twice_spin
    tc = coupling_kelvin * (ts + 1) / (2.0 * math.log(ts + 2))
    # self-check: at T_c the correlator must sit on the boundary
    residual = pair_correlator(spin, coupling_kelvin, tc) + spin.value / 2.0
    if abs(residual) > 1e-10:
        raise RuntimeError(
            f"characteristic temperature self-check failed, residual {residual:.3e}"
        )
    return tc


@dataclass(frozen=True)
class PairThermalResult:
    """Correlator and negativity of the pair at one temperature."""

    temperature_kelvin: float
    correlator_g1: float
    negativity: float


def pair_thermal(
    spin: SpinQuantum, coupling_kelvin: float, temperature_kelvin: float
) -> PairThermalResult:
    return PairThermalResult(
        temperature_kelvin=temperature_kelvin,
        correlator_g1=pair_correlator(spin, coupling_kelvin, temperature_kelvin),
        negativity=pair_negativity(spin, coupling_kelvin, temperature_kelvin),
    )
