"""Exact diagonalization of mixed-spin (S, 1/2) Heisenberg chains.

Sites alternate spin S on even indices and spin 1/2 on odd indices
(0-indexed), coupled by isotropic antiferromagnetic exchange
H = sum_bonds J S_i . S_j. The boundary is periodic by default; note
that a periodic 2-site ring carries two bonds between its sites and so
doubles the exchange, which is why the open boundary exists for
comparing against single-pair results.

H commutes with total Sz, so the Hilbert space splits into magnetization
sectors that are enumerated, assembled, and diagonalized independently.
All matrices are real symmetric by construction (see `operators`), and
thermal averages are taken with Boltzmann weights shifted by the global
ground energy so that no temperature underflows.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .operators import (
    SpinQuantum,
    eig_sym,
    embed,
    lower_coefficient,
    raise_coefficient,
    spin_matrices,
)

__all__ = [
    "DEFAULT_DIM_CAP",
    "ChainSpec",
    "SectorBlock",
    "SectorSpectrum",
    "SectorSpectralData",
    "build_hamiltonian",
    "dense_hamiltonian",
    "diagonalize",
    "ThermalWeights",
    "thermal_weights",
    "CorrelatorMatrix",
    "correlator_matrix",
    "susceptibility_exact",
    "susceptibility_nn_approx",
    "reduced_pair_state",
    "negativity_bruteforce",
]

DEFAULT_DIM_CAP = 32768


@dataclass(frozen=True)
class ChainSpec:
    """Geometry and coupling of one alternating (S, 1/2) chain."""

    n_sites: int
    spin: SpinQuantum
    coupling_kelvin: float
    boundary: str = "periodic"
    dim_cap: int = DEFAULT_DIM_CAP

    def __post_init__(self) -> None:
        if not isinstance(self.n_sites, int) or isinstance(self.n_sites, bool):
            raise ValueError(f"n_sites must be an integer, got {self.n_sites!r}")
        if self.n_sites < 2 or self.n_sites % 2:
            raise ValueError(
                f"n_sites must be even and >= 2 to alternate (S, 1/2), got {self.n_sites}"
            )
        if self.spin.twice_spin < 1:
            raise ValueError("chain spin must have twice_spin >= 1")
        if not math.isfinite(self.coupling_kelvin) or self.coupling_kelvin == 0.0:
            raise ValueError(
                f"coupling must be finite and nonzero, got {self.coupling_kelvin}"
            )
        if self.boundary not in ("periodic", "open"):
            raise ValueError(
                f"boundary must be 'periodic' or 'open', got {self.boundary!r}"
            )
        if self.dim_cap < 2:
            raise ValueError(f"dim_cap must be >= 2, got {self.dim_cap}")

    @property
    def site_twice_spins(self) -> tuple[int, ...]:
        return tuple(
            self.spin.twice_spin if k % 2 == 0 else 1 for k in range(self.n_sites)
        )

    @property
    def site_dimensions(self) -> tuple[int, ...]:
        return tuple(ts + 1 for ts in self.site_twice_spins)

    @property
    def total_dimension(self) -> int:
        return math.prod(self.site_dimensions)

    def bonds(self) -> tuple[tuple[int, int], ...]:
        n = self.n_sites
        if self.boundary == "open":
            return tuple((i, i + 1) for i in range(n - 1))
        return tuple((i, (i + 1) % n) for i in range(n))


def _check_cap(spec: ChainSpec) -> None:
    if spec.total_dimension > spec.dim_cap:
        raise RuntimeError(
            f"Hilbert space dimension {spec.total_dimension} exceeds cap "
            f"{spec.dim_cap}; raise dim_cap explicitly to proceed"
        )


@dataclass(frozen=True, eq=False)
class SectorBlock:
    """One total-Sz sector: basis labels and the Hamiltonian block.

    `labels` has shape (d, n) and holds twice the local m value of each
    site, enumerated lexicographically with m descending per site (the
    same ordering as the dense Kronecker basis). `codes` are the mixed
    radix ranks of the labels in that dense basis, strictly increasing.
    """

    twice_total_sz: int
    labels: np.ndarray
    codes: np.ndarray
    hamiltonian: np.ndarray


@dataclass(frozen=True, eq=False)
class SectorSpectrum:
    twice_total_sz: int
    labels: np.ndarray
    codes: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True, eq=False)
class SectorSpectralData:
    """Full blocked spectrum of a chain."""

    spec: ChainSpec
    sectors: tuple[SectorSpectrum, ...]

    @property
    def total_dimension(self) -> int:
        return sum(sec.eigenvalues.size for sec in self.sectors)

    @property
    def ground_energy_kelvin(self) -> float:
        return min(float(sec.eigenvalues[0]) for sec in self.sectors)

    def all_eigenvalues(self) -> np.ndarray:
        return np.sort(np.concatenate([sec.eigenvalues for sec in self.sectors]))


def _strides(dims: tuple[int, ...]) -> np.ndarray:
    """Mixed-radix strides, first site most significant."""
    strides = np.ones(len(dims), dtype=np.int64)
    for k in range(len(dims) - 2, -1, -1):
        strides[k] = strides[k + 1] * dims[k + 1]
    return strides


def _enumerate_sectors(spec: ChainSpec) -> list[tuple[int, np.ndarray]]:
    """Group the product basis by total Sz, preserving lexicographic order."""
    site_m_lists = [
        range(ts, -ts - 1, -2) for ts in spec.site_twice_spins
    ]  # m descending, matching the matrix convention
    sectors: dict[int, list[tuple[int, ...]]] = {}
    for label in itertools.product(*site_m_lists):
        sectors.setdefault(sum(label), []).append(label)
    out = []
    for tsz in sorted(sectors, reverse=True):
        out.append((tsz, np.asarray(sectors[tsz], dtype=np.int16)))
    return out


def build_hamiltonian(spec: ChainSpec) -> list[SectorBlock]:
    """Assemble the Hamiltonian blocked by total Sz.

    Diagonal part: sum over bonds of J m_i m_j. Off-diagonal part: the
    flip-flop J/2 (S+ S- + S- S+), whose matrix elements come in exactly
    equal transpose pairs (the same square root both ways), so each block
    is bitwise symmetric.
    """
    _check_cap(spec)
    tspins = np.asarray(spec.site_twice_spins, dtype=np.int64)
    strides = _strides(spec.site_dimensions)
    j = spec.coupling_kelvin
    bonds = spec.bonds()
    blocks: list[SectorBlock] = []
    for tsz, labels in _enumerate_sectors(spec):
        d = labels.shape[0]
        lab = labels.astype(np.int64)
        digits = (tspins[None, :] - lab) // 2
        codes = digits @ strides  # ascending because enumeration is lexicographic
        h = np.zeros((d, d))
        m = lab / 2.0
        diag = np.zeros(d)
        for i, k in bonds:
            diag += j * m[:, i] * m[:, k]
        h[np.diag_indices(d)] = diag
        pos = np.arange(d)
        for i, k in bonds:
            for a, b in ((i, k), (k, i)):
                # raise site a, lower site b; raising m_a lowers its digit
                mask = (lab[:, a] < tspins[a]) & (lab[:, b] > -tspins[b])
                src = pos[mask]
                if src.size == 0:
                    continue
                tgt_codes = codes[src] - strides[a] + strides[b]
                tgt = np.searchsorted(codes, tgt_codes)
                coeff = 0.5 * j * np.array(
                    [
                        raise_coefficient(int(tspins[a]), int(lab[s, a]))
                        * lower_coefficient(int(tspins[b]), int(lab[s, b]))
                        for s in src
                    ]
                )
                h[tgt, src] += coeff
        blocks.append(
            SectorBlock(twice_total_sz=tsz, labels=labels, codes=codes, hamiltonian=h)
        )
    return blocks


def dense_hamiltonian(spec: ChainSpec) -> np.ndarray:
    """Unblocked Hamiltonian via Kronecker products; cross-check path."""
    _check_cap(spec)
    dims = spec.site_dimensions
    ops = [spin_matrices(SpinQuantum(ts)) for ts in spec.site_twice_spins]
    j = spec.coupling_kelvin
    h = np.zeros((spec.total_dimension, spec.total_dimension))
    for i, k in spec.bonds():
        h += j * embed(ops[i].sz, i, dims) @ embed(ops[k].sz, k, dims)
        cross = embed(ops[i].sp, i, dims) @ embed(ops[k].sm, k, dims)
        h += 0.5 * j * (cross + cross.T)
    return h


def diagonalize(spec: ChainSpec) -> SectorSpectralData:
    sectors = []
    for block in build_hamiltonian(spec):
        evals, evecs = eig_sym(block.hamiltonian)
        sectors.append(
            SectorSpectrum(
                twice_total_sz=block.twice_total_sz,
                labels=block.labels,
                codes=block.codes,
                eigenvalues=evals,
                eigenvectors=evecs,
            )
        )
    return SectorSpectralData(spec=spec, sectors=tuple(sectors))


@dataclass(frozen=True, eq=False)
class ThermalWeights:
    """Normalized Boltzmann weights per sector.

    `partition_function` is the shifted sum Z' = sum exp(-(E - E0)/T);
    the true Z is Z' * exp(-E0/T), kept factored so low temperatures
    never overflow. E0 is `ground_energy_kelvin`.
    """

    temperature_kelvin: float
    sector_weights: tuple[np.ndarray, ...]
    partition_function: float
    ground_energy_kelvin: float


def thermal_weights(data: SectorSpectralData, temperature_kelvin: float) -> ThermalWeights:
    if not math.isfinite(temperature_kelvin) or temperature_kelvin <= 0.0:
        raise ValueError(f"temperature must be > 0, got {temperature_kelvin}")
    e0 = data.ground_energy_kelvin
    raw = [
        np.exp(-(sec.eigenvalues - e0) / temperature_kelvin) for sec in data.sectors
    ]
    z = float(sum(r.sum() for r in raw))
    return ThermalWeights(
        temperature_kelvin=temperature_kelvin,
        sector_weights=tuple(r / z for r in raw),
        partition_function=z,
        ground_energy_kelvin=e0,
    )


@dataclass(frozen=True, eq=False)
class CorrelatorMatrix:
    """Thermal two-site correlators for every site pair.

    g_zz[i, j] = <Sz_i Sz_j>, g_dot[i, j] = <S_i . S_j>; diagonal entries
    are on-site moments, so g_dot[i, i] = S_i(S_i + 1). Isotropy of the
    Hamiltonian makes g_dot = 3 g_zz.
    """

    temperature_kelvin: float
    g_zz: np.ndarray
    g_dot: np.ndarray


_CHUNK = 2048


def _flip_flop(
    sector: SectorSpectrum,
    amp: np.ndarray,
    tspins: np.ndarray,
    strides: np.ndarray,
    i: int,
    k: int,
) -> float:
    """Thermal <S_i^+ S_k^-> within one sector.

    amp = V * sqrt(w) column-scaled eigenvectors, so rho = amp @ amp.T;
    the expectation gathers rho[target, source] rows without forming rho.
    """
    lab = sector.labels
    mask = (lab[:, i] < tspins[i]) & (lab[:, k] > -tspins[k])
    src = np.flatnonzero(mask)
    if src.size == 0:
        return 0.0
    tgt = np.searchsorted(sector.codes, sector.codes[src] - strides[i] + strides[k])
    coeff = np.array(
        [
            raise_coefficient(int(tspins[i]), int(lab[s, i]))
            * lower_coefficient(int(tspins[k]), int(lab[s, k]))
            for s in src
        ]
    )
    total = 0.0
    for lo in range(0, src.size, _CHUNK):
        sl = slice(lo, lo + _CHUNK)
        rows = np.einsum("ij,ij->i", amp[tgt[sl]], amp[src[sl]])
        total += float(rows @ coeff[sl])
    return total


def correlator_matrix(
    data: SectorSpectralData, temperature_kelvin: float
) -> CorrelatorMatrix:
    """All two-site thermal correlators at one temperature.

    Diagonal operators (Sz_i Sz_j and the on-site part) only need the
    basis-state occupation probabilities P_b = sum_k w_k V[b,k]^2; the
    transverse part is assembled from flip-flop expectations. Sectors do
    not mix because every operator involved conserves total Sz.
    """
    spec = data.spec
    weights = thermal_weights(data, temperature_kelvin)
    n = spec.n_sites
    tspins = np.asarray(spec.site_twice_spins, dtype=np.int64)
    strides = _strides(spec.site_dimensions)
    casimirs = tspins * (tspins + 2) / 4.0
    g_zz = np.zeros((n, n))
    flip = np.zeros((n, n))
    for sector, w in zip(data.sectors, weights.sector_weights):
        prob = (sector.eigenvectors**2) @ w
        m = sector.labels / 2.0
        g_zz += (m * prob[:, None]).T @ m
        # on-site (S+S- + S-S+)/2 is diagonal: S(S+1) - m^2
        flip[np.diag_indices(n)] += casimirs * prob.sum() - (m**2 * prob[:, None]).sum(
            axis=0
        )
        amp = sector.eigenvectors * np.sqrt(w)[None, :]
        for i in range(n):
            for k in range(i + 1, n):
                # <S_i^+ S_k^-> = <S_i^- S_k^+> for a real symmetric rho
                val = _flip_flop(sector, amp, tspins, strides, i, k)
                flip[i, k] += val
                flip[k, i] += val
    g_zz = 0.5 * (g_zz + g_zz.T)  # BLAS output is not bitwise symmetric
    g_dot = g_zz + flip
    return CorrelatorMatrix(
        temperature_kelvin=temperature_kelvin, g_zz=g_zz, g_dot=g_dot
    )


def susceptibility_exact(data: SectorSpectralData, temperature_kelvin: float) -> float:
    """Reduced susceptibility chi k_B T / (g^2 mu_B^2) = sum_ij <Sz_i Sz_j>.

    Eigenstates carry definite total Sz, so the double sum collapses to
    <(Sz_total)^2> = sum over sectors of (weight in sector) * Sz_total^2.
    """
    weights = thermal_weights(data, temperature_kelvin)
    total = 0.0
    for sector, w in zip(data.sectors, weights.sector_weights):
        total += (sector.twice_total_sz / 2.0) ** 2 * float(w.sum())
    return total


def susceptibility_nn_approx(n_sites: int, spin: SpinQuantum, g1: float) -> float:
    """Nearest-neighbor approximation to the reduced susceptibility.

    chi_tilde = n (1/8 + S^2/2 + g1/3): on-site moments plus one bond
    correlator per site, with the S z-moment entering through S^2/2.
    """
    if n_sites < 2 or n_sites % 2:
        raise ValueError(f"n_sites must be even and >= 2, got {n_sites}")
    s = spin.value
    return n_sites * (0.125 + s * s / 2.0 + g1 / 3.0)


def reduced_pair_state(
    data: SectorSpectralData, temperature_kelvin: float, bond: tuple[int, int]
) -> np.ndarray:
    """Reduced thermal density matrix of one bond, ordered (bond[0], bond[1]).

    Traces out the other n-2 sites by grouping basis states on their
    rest-configuration: within each group the reduced contribution is a
    plain Gram matrix of amp rows. Output is exactly symmetric.
    """
    spec = data.spec
    a, b = bond
    n = spec.n_sites
    if not (0 <= a < n and 0 <= b < n) or a == b:
        raise ValueError(f"bond {bond} is not a pair of distinct sites")
    adjacent = abs(a - b) == 1 or (
        spec.boundary == "periodic" and {a, b} == {0, n - 1}
    )
    if not adjacent:
        raise ValueError(f"bond {bond} is not adjacent under {spec.boundary} boundary")
    weights = thermal_weights(data, temperature_kelvin)
    dims = spec.site_dimensions
    tspins = np.asarray(spec.site_twice_spins, dtype=np.int64)
    strides = _strides(dims)
    da, db = dims[a], dims[b]
    rho = np.zeros((da * db, da * db))
    for sector, w in zip(data.sectors, weights.sector_weights):
        amp = sector.eigenvectors * np.sqrt(w)[None, :]
        lab = sector.labels.astype(np.int64)
        dig_a = (tspins[a] - lab[:, a]) // 2
        dig_b = (tspins[b] - lab[:, b]) // 2
        pair_idx = dig_a * db + dig_b
        rest = sector.codes - dig_a * strides[a] - dig_b * strides[b]
        order = np.argsort(rest, kind="stable")
        rest_sorted = rest[order]
        cuts = np.flatnonzero(np.diff(rest_sorted)) + 1
        for group in np.split(order, cuts):
            p = pair_idx[group]
            block = amp[group] @ amp[group].T
            rho[np.ix_(p, p)] += block
    return 0.5 * (rho + rho.T)


def negativity_bruteforce(rho: np.ndarray, dim_a: int, dim_b: int) -> float:
    """Negativity from the partial transpose of a bipartite density matrix.

    Sum of |negative eigenvalues| of the transpose on the second factor.
    The input must be exactly symmetric with unit trace.
    """
    rho = np.asarray(rho, dtype=float)
    d = dim_a * dim_b
    if rho.shape != (d, d):
        raise ValueError(f"state shape {rho.shape} does not match {dim_a}x{dim_b}")
    if not np.array_equal(rho, rho.T):
        raise ValueError("density matrix is not symmetric")
    if abs(float(np.trace(rho)) - 1.0) > 1e-9:
        raise ValueError(f"density matrix trace {np.trace(rho)} is not 1")
    pt = (
        rho.reshape(dim_a, dim_b, dim_a, dim_b)
        .transpose(0, 3, 2, 1)
        .reshape(d, d)
    )
    evals = np.linalg.eigvalsh(pt)
    # + 0.0 normalizes the -0.0 that arises from negating an empty sum
    return float(-evals[evals < 0.0].sum() + 0.0)
