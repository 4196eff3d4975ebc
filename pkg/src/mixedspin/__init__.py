"""Thermal entanglement in mixed-spin (S, 1/2) Heisenberg chains.

Library layout:

* `operators`: exact real spin matrices, embedding, symmetric eigensolver.
* `units`: CODATA-derived constants and unit conversions.
* `pair`: closed forms for one (S, 1/2) exchange pair: correlator,
  negativity, characteristic temperature.
* `chain`: sector-blocked exact diagonalization, correlators, reduced
  pair states, brute-force negativity.
* `witness`: susceptibility entanglement witness, negativity lower
  bound, T_c solving and sweeps, built-in compound table.
* `fitdata`: measurement CSV ingestion, model curves, (J, g) fitting,
  per-point negativity bounds.
* `cli`: the `mixedspin` command.
"""

from .chain import (
    DEFAULT_DIM_CAP,
    ChainSpec,
    CorrelatorMatrix,
    SectorSpectralData,
    build_hamiltonian,
    correlator_matrix,
    dense_hamiltonian,
    diagonalize,
    negativity_bruteforce,
    reduced_pair_state,
    susceptibility_exact,
    susceptibility_nn_approx,
    thermal_weights,
)
from .fitdata import (
    BoundPoint,
    FitResult,
    MeasurementSeries,
    bound_series,
    fit,
    load_measurements,
    model_chi,
    nelder_mead,
    synth_series,
)
from .operators import (
    SPIN_HALF,
    SpinOperators,
    SpinQuantum,
    eig_sym,
    embed,
    spin_matrices,
)
from .pair import (
    PairSpectrum,
    PairThermalResult,
    characteristic_temperature,
    pair_correlator,
    pair_correlator_literature,
    pair_correlator_zero_temperature,
    pair_negativity,
    pair_negativity_zero_temperature,
    pair_thermal,
)
from .units import (
    CURIE_FACTOR_EMU_K_PER_MOL,
    KELVIN_PER_WAVENUMBER,
    chi_emu_per_mol_to_reduced,
    chi_reduced_to_emu_per_mol,
    convert_units,
    kelvin_to_wavenumber,
    wavenumber_to_kelvin,
)
from .witness import (
    CompoundRecord,
    CompoundTcRow,
    LinearLaw,
    SweepResult,
    SweepRow,
    WitnessReport,
    builtin_compounds,
    compound_report,
    corrected_bound,
    correction_polynomial,
    lookup_compound,
    negativity_lower_bound,
    separability_threshold,
    separability_threshold_exact_diagonal,
    solve_tc,
    sweep_tc,
    witness_report,
    witness_value,
    witness_value_exact_diagonal,
)

__version__ = "0.1.0"
