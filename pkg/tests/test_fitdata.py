"""CSV ingestion, model susceptibility, simplex fitting, bound series."""

import io
import math

import numpy as np
import pytest

from mixedspin.fitdata import (
    MeasurementSeries,
    bound_series,
    fit,
    load_measurements,
    model_chi,
    nelder_mead,
    synth_series,
)
from mixedspin.operators import SpinQuantum
from mixedspin.pair import characteristic_temperature, pair_correlator
from mixedspin.units import (
    CURIE_FACTOR_EMU_K_PER_MOL,
    chi_emu_per_mol_to_reduced,
    chi_reduced_to_emu_per_mol,
    wavenumber_to_kelvin,
)
from mixedspin.witness import correction_polynomial

S_HALF = SpinQuantum(1)
S_ONE = SpinQuantum(2)

VALID_CSV = """# compound: demo
# note: synthetic
temperature_kelvin,chi_emu_per_mol
2.0,0.011
4.0,0.021
8.0,0.015
"""


class TestLoadMeasurements:
    def test_parses_rows_and_metadata(self):
        series = load_measurements(io.StringIO(VALID_CSV))
        assert len(series) == 3
        assert series.unit == "emu/mol"
        np.testing.assert_array_equal(series.temperatures_kelvin, [2.0, 4.0, 8.0])
        np.testing.assert_array_equal(series.chi, [0.011, 0.021, 0.015])
        assert series.metadata == {"compound": "demo", "note": "synthetic"}

    def test_reads_bytes_and_paths(self, tmp_path):
        series = load_measurements(io.BytesIO(VALID_CSV.encode()))
        assert len(series) == 3
        path = tmp_path / "m.csv"
        path.write_text(VALID_CSV)
        assert len(load_measurements(path)) == 3
        assert len(load_measurements(str(path))) == 3

    def test_reduced_header(self):
        text = "temperature_kelvin,chi_reduced\n1.0,0.2\n2.0,0.3\n"
        series = load_measurements(io.StringIO(text))
        assert series.unit == "reduced"

    def test_malformed_row_names_line(self):
        text = "temperature_kelvin,chi_emu_per_mol\n1.0,0.2\nabc,0.01\n"
        with pytest.raises(ValueError, match="line 3"):
            load_measurements(io.StringIO(text))

    def test_wrong_field_count_names_line(self):
        text = "temperature_kelvin,chi_emu_per_mol\n1.0,0.2,9\n"
        with pytest.raises(ValueError, match="line 2"):
            load_measurements(io.StringIO(text))

    def test_out_of_order_reports_both_values(self):
        text = "temperature_kelvin,chi_emu_per_mol\n5.0,0.2\n3.0,0.3\n"
        with pytest.raises(ValueError, match="5.0 then 3.0"):
            load_measurements(io.StringIO(text))

    def test_duplicate_temperature_rejected(self):
        text = "temperature_kelvin,chi_emu_per_mol\n5.0,0.2\n5.0,0.3\n"
        with pytest.raises(ValueError, match="strictly increasing"):
            load_measurements(io.StringIO(text))

    def test_nonpositive_temperature_rejected(self):
        text = "temperature_kelvin,chi_emu_per_mol\n0.0,0.2\n"
        with pytest.raises(ValueError, match="line 2"):
            load_measurements(io.StringIO(text))

    def test_unknown_header_rejected(self):
        text = "temp,chi\n1.0,0.2\n"
        with pytest.raises(ValueError, match="header"):
            load_measurements(io.StringIO(text))
        with pytest.raises(ValueError, match="header"):
            load_measurements(io.StringIO(""))


class TestModelChi:
    def test_curie_limit(self):
        # S=1/2, g=2: chi*T -> 2 * curie * g^2 * (1/8 + 1/8)
        t = 1e6
        chi = model_chi(S_HALF, 1.0, 2.0, t)
        expected = 2.0 * CURIE_FACTOR_EMU_K_PER_MOL * 4.0 * 0.25
        assert chi * t == pytest.approx(expected, rel=1e-5)
        assert expected == pytest.approx(0.7502962, abs=1e-6)

    def test_singlet_ground_state_suppression(self):
        chi = model_chi(S_HALF, 10.0, 2.0, 0.2)
        assert chi == pytest.approx(0.0, abs=1e-12)

    def test_g_squared_scaling(self):
        base = model_chi(S_ONE, 5.0, 1.7, 10.0)
        assert model_chi(S_ONE, 5.0, 3.4, 10.0) == pytest.approx(
            4.0 * base, rel=1e-12
        )

    def test_pair_model_is_nn_form(self):
        spin = S_ONE
        j, g, t = 7.0, 2.1, 3.0
        g1 = pair_correlator(spin, j, t)
        chi_red = 2.0 * (0.125 + 0.5 + g1 / 3.0)
        expected = chi_reduced_to_emu_per_mol(chi_red, t, g)
        assert model_chi(spin, j, g, t) == pytest.approx(expected, rel=1e-14)

    def test_chain_model_matches_pair_for_spin_half_dimer(self):
        # for S=1/2 the NN form is the exact dimer susceptibility
        for t in (0.5, 2.0, 20.0):
            pair = model_chi(S_HALF, 3.0, 2.0, t)
            chain = model_chi(
                S_HALF, 3.0, 2.0, t, model="chain", n_sites=2, boundary="open"
            )
            assert chain == pytest.approx(pair, rel=1e-10)

    def test_chain_model_per_cell_normalization(self):
        # doubling the ring size must not change the per-cell susceptibility scale
        chi4 = model_chi(S_HALF, 1.0, 2.0, 1e5, model="chain", n_sites=4)
        chi6 = model_chi(S_HALF, 1.0, 2.0, 1e5, model="chain", n_sites=6)
        assert chi4 == pytest.approx(chi6, rel=1e-6)

    def test_validation(self):
        with pytest.raises(ValueError):
            model_chi(S_HALF, 1.0, 2.0, 0.0)
        with pytest.raises(ValueError):
            model_chi(S_HALF, -1.0, 2.0, 1.0)
        with pytest.raises(ValueError):
            model_chi(S_HALF, 1.0, 2.0, 1.0, model="chain")
        with pytest.raises(ValueError):
            model_chi(S_HALF, 1.0, 2.0, 1.0, model="dimer")


class TestNelderMead:
    def test_quadratic_bowl(self):
        objective = lambda x: (x[0] - 3.0) ** 2 + 10.0 * (x[1] + 1.0) ** 2
        x, f, iters, converged, history = nelder_mead(objective, [0.0, 0.0])
        assert converged
        np.testing.assert_allclose(x, [3.0, -1.0], atol=1e-7)
        assert f < 1e-14

    def test_best_history_is_non_increasing(self):
        objective = lambda x: (x[0] - 1.0) ** 2 + (x[0] * x[1] - 2.0) ** 2
        _, _, _, _, history = nelder_mead(objective, [4.0, 4.0])
        assert all(b <= a for a, b in zip(history, history[1:]))

    def test_deterministic(self):
        objective = lambda x: math.sin(x[0]) ** 2 + (x[1] - 0.5) ** 4
        r1 = nelder_mead(objective, [1.0, 1.0])
        r2 = nelder_mead(objective, [1.0, 1.0])
        assert np.array_equal(r1[0], r2[0])
        assert r1[1:4] == r2[1:4]

    def test_iteration_cap_reports_non_convergence(self):
        objective = lambda x: float(np.sum(x**2))
        _, _, iters, converged, _ = nelder_mead(objective, [1.0, 1.0], max_iterations=3)
        assert iters == 3
        assert not converged


class TestFit:
    def test_round_trip_spin_half(self):
        j = wavenumber_to_kelvin(10.2)
        series = synth_series(S_HALF, j, 2.06, np.linspace(2.0, 300.0, 60))
        result = fit(series, S_HALF, init_coupling_kelvin=20.0, init_g_factor=2.0)
        assert result.converged
        assert result.coupling_kelvin == pytest.approx(j, rel=1e-3)
        assert result.g_factor == pytest.approx(2.06, rel=1e-3)
        # noiseless round trip is far tighter than the 0.1% requirement
        assert abs(result.coupling_kelvin - j) / j < 1e-6
        assert abs(result.g_factor - 2.06) / 2.06 < 1e-6

    def test_round_trip_spin_one_with_window(self):
        j = wavenumber_to_kelvin(81.4)
        series = synth_series(S_ONE, j, 2.15, np.linspace(5.0, 300.0, 60))
        result = fit(
            series,
            S_ONE,
            init_coupling_kelvin=80.0,
            init_g_factor=2.0,
            window=(25.0, 250.0),
        )
        assert result.converged
        assert abs(result.coupling_kelvin - j) / j < 1e-3
        assert abs(result.g_factor - 2.15) / 2.15 < 1e-3
        assert result.fit_window[0] >= 25.0
        assert result.fit_window[1] <= 250.0

    def test_window_excludes_corrupted_points(self):
        j = 12.0
        temps = np.linspace(2.0, 100.0, 30)
        series = synth_series(S_HALF, j, 2.0, temps)
        chi = series.chi.copy()
        chi[temps < 10.0] *= 5.0  # corrupt the low-T points
        corrupted = MeasurementSeries(series.temperatures_kelvin, chi, "emu/mol", {})
        result = fit(
            corrupted, S_HALF, init_coupling_kelvin=10.0, init_g_factor=2.0,
            window=(10.0, 100.0),
        )
        assert result.coupling_kelvin == pytest.approx(j, rel=1e-6)
        assert result.g_factor == pytest.approx(2.0, rel=1e-6)

    def test_chi_scale_moves_g_not_j(self):
        j = 8.0
        series = synth_series(S_HALF, j, 2.0, np.linspace(2.0, 80.0, 40))
        scaled = MeasurementSeries(
            series.temperatures_kelvin, series.chi * 1.1, "emu/mol", {}
        )
        result = fit(scaled, S_HALF, init_coupling_kelvin=10.0, init_g_factor=2.0)
        assert result.coupling_kelvin == pytest.approx(j, rel=5e-3)
        assert result.g_factor == pytest.approx(2.0 * math.sqrt(1.1), rel=5e-3)

    def test_chain_model_round_trip(self):
        series = synth_series(
            S_HALF, 10.0, 2.0, np.linspace(2.0, 60.0, 12), model="chain", n_sites=4
        )
        result = fit(
            series, S_HALF, 8.0, 2.1, model="chain", n_sites=4
        )
        assert result.converged
        assert result.coupling_kelvin == pytest.approx(10.0, rel=1e-6)
        assert result.g_factor == pytest.approx(2.0, rel=1e-6)

    def test_too_few_points_rejected(self):
        series = load_measurements(io.StringIO(VALID_CSV))
        with pytest.raises(ValueError, match="4 points"):
            fit(series, S_HALF, 10.0, 2.0)

    def test_window_that_excludes_everything_rejected(self):
        series = synth_series(S_HALF, 10.0, 2.0, np.linspace(2.0, 80.0, 20))
        with pytest.raises(ValueError, match="4 points"):
            fit(series, S_HALF, 10.0, 2.0, window=(500.0, 600.0))
        with pytest.raises(ValueError, match="min above max"):
            fit(series, S_HALF, 10.0, 2.0, window=(600.0, 500.0))

    def test_reduced_series_rejected_as_unidentifiable(self):
        temps = np.linspace(2.0, 80.0, 20)
        chi_red = np.array(
            [
                chi_emu_per_mol_to_reduced(
                    model_chi(S_HALF, 10.0, 2.0, float(t)), float(t), 2.0
                )
                for t in temps
            ]
        )
        series = MeasurementSeries(temps, chi_red, "reduced", {})
        with pytest.raises(ValueError, match="unidentifiable"):
            fit(series, S_HALF, 10.0, 2.0)

    def test_nonpositive_initial_coupling_rejected(self):
        series = synth_series(S_HALF, 10.0, 2.0, np.linspace(2.0, 80.0, 20))
        with pytest.raises(ValueError, match="initial coupling"):
            fit(series, S_HALF, -1.0, 2.0)


class TestBoundSeries:
    def test_sign_tracks_characteristic_temperature(self):
        spin = S_HALF
        j, g = 5.12, 2.0
        tc = characteristic_temperature(spin, j)
        temps = np.linspace(0.5, 3.0 * tc, 40)
        series = synth_series(spin, j, g, temps)
        points = bound_series(series, spin, g)
        for p in points:
            if p.temperature_kelvin < 0.98 * tc:
                assert p.entangled
                assert p.negativity_bound > 0.0
            elif p.temperature_kelvin > 1.02 * tc:
                assert not p.entangled
                assert p.negativity_bound <= 0.0

    def test_threshold_series_gives_zero_bounds(self):
        from mixedspin.witness import separability_threshold

        spin = S_ONE
        temps = np.array([1.0, 2.0, 5.0])
        thr = separability_threshold(2, spin)
        series = MeasurementSeries(temps, np.full(3, thr), "reduced", {})
        for p in bound_series(series, spin, 2.0):
            assert p.witness_reduced == 0.0
            assert p.negativity_bound == 0.0
            assert not p.entangled

    def test_reduced_and_molar_inputs_agree(self):
        spin = S_HALF
        j, g = 5.0, 2.1
        temps = np.linspace(1.0, 12.0, 10)
        molar = synth_series(spin, j, g, temps)
        chi_red = np.array(
            [
                chi_emu_per_mol_to_reduced(float(x), float(t), g)
                for t, x in zip(molar.temperatures_kelvin, molar.chi)
            ]
        )
        reduced = MeasurementSeries(temps, chi_red, "reduced", {})
        for a, b in zip(bound_series(molar, spin, g), bound_series(reduced, spin, g)):
            assert a.negativity_bound == pytest.approx(b.negativity_bound, rel=1e-10)

    def test_correction_shifts_by_polynomial_term(self):
        spin = S_ONE
        j, g = 30.0, 2.15
        temps = np.linspace(10.0, 60.0, 6)
        series = synth_series(spin, j, g, temps)
        plain = bound_series(series, spin, g)
        corrected = bound_series(series, spin, g, correction_coupling_kelvin=j)
        for a, b, t in zip(plain, corrected, temps):
            g1 = pair_correlator(spin, j, float(t))
            expected = a.negativity_bound + correction_polynomial(j / float(t)) * g1
            assert b.negativity_bound == pytest.approx(expected, rel=1e-12)


class TestUnitCoherence:
    def test_load_convert_round_trip(self):
        series = load_measurements(io.StringIO(VALID_CSV))
        g = 2.06
        for t, x in zip(series.temperatures_kelvin, series.chi):
            red = chi_emu_per_mol_to_reduced(float(x), float(t), g)
            back = chi_reduced_to_emu_per_mol(red, float(t), g)
            assert back == pytest.approx(float(x), rel=1e-12)
