import os
from pathlib import Path

import numpy as np
import pytest

import dke

PRESETS = Path(os.environ.get("DKE_PRESET_DIR", Path(__file__).resolve().parents[2] / "presets"))


def preset(name):
    return dke.Scenario.from_file(PRESETS / f"{name}.cfg")


def test_grid_geometry():
    spec = dke.GridSpec(0.5, 4, 3)
    assert spec.num_momenta == 7
    assert spec.length == pytest.approx(2.0)
    np.testing.assert_allclose(spec.positions(), [-0.75, -0.25, 0.25, 0.75])
    np.testing.assert_allclose(spec.momenta(), np.arange(-3, 4) * 4 * np.pi)
    assert spec.flat(1, -3) == 7
    with pytest.raises(ValueError):
        dke.GridSpec(-1.0, 4, 3)


def test_verify_basis_reports():
    checks = dke.verify_basis(4, 4)
    assert checks and all(passed for _, _, passed in checks)
    assert not all(passed for _, _, passed in dke.verify_basis(4, 4, prefactor_scale=1.01))


def test_plane_wave_coefficients_have_unit_norm():
    spec = dke.GridSpec(1.0, 4, 8)
    a = dke.expand_plane_wave(spec, spec.momenta()[9])
    assert a.shape == (4, 17)
    assert np.sum(np.abs(a) ** 2) == pytest.approx(1.0, abs=1e-12)


def test_drift_matches_fft_derivative():
    spec = dke.GridSpec(1.0, 2, 16)
    k = spec.momenta() - 0.3 * spec.momentum_step
    row = np.exp(-k**2 / (2 * (3 * spec.momentum_step) ** 2))
    n = np.vstack([row, row])
    freq = 2j * np.pi * np.fft.fftfreq(row.size, d=spec.momentum_step)
    deriv = np.real(np.fft.ifft(freq * np.fft.fft(row)))
    out = dke.drift_apply(spec, n, [1.0, -2.0])
    np.testing.assert_allclose(out[0], -deriv, atol=1e-10)
    np.testing.assert_allclose(out[1], 2 * deriv, atol=1e-10)
    with pytest.raises(ValueError):
        dke.drift_apply(spec, n[:, :5], [1.0, 1.0])


def test_screened_coulomb_leaves_fermi_dirac_stationary():
    spec = dke.GridSpec(6.0, 2, 3)
    fd = dke.fermi_dirac_field(spec, 0.7, 1.0)
    rhs = dke.collision_rhs_screened(spec, fd, eps=1.5, T=1.0, eta=0.3)
    assert np.max(np.abs(rhs)) < 1e-10


def test_meanfield_rhs_is_hermitian_and_traceless():
    rng = np.random.default_rng(7)
    spec = dke.GridSpec(2.0, 2, 3)
    size = spec.num_states
    a = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
    P = (a + a.conj().T) / 2
    for full in (False, True):
        rhs = dke.meanfield_rhs(spec, P, [0.3, -0.2], full_coupling=full)
        assert dke.hermiticity_defect(rhs) < 1e-12
        assert abs(np.trace(rhs)) < 1e-12 * np.max(np.abs(P))


def test_free_streaming_run_conserves_number(tmp_path):
    scenario = preset("free_streaming")
    out = dke.simulate(scenario, tmp_path)
    assert out["n"].shape[1:] == (scenario.grid.num_cells, scenario.grid.num_momenta)
    assert out["t"][0] == 0.0 and out["t"][-1] == pytest.approx(scenario.t_end)
    total = out["total_number"]
    assert np.max(np.abs(total - total[0])) < 1e-10 * total[0]
    assert (tmp_path / "snapshots.csv").exists()
    assert (tmp_path / "diagnostics.csv").exists()
    assert (tmp_path / "run_meta").exists()


def test_scenario_text_round_trip():
    scenario = preset("uniform_drift")
    assert dke.Scenario.from_text(scenario.to_text()) == scenario


def test_config_errors_are_value_errors():
    with pytest.raises(dke.ConfigError, match="grid.d"):
        dke.Scenario.from_text("[grid]\nd = -1\nnum_cells = 4\nn_max = 2\n[initial]\nkind = uniform\nn0 = 0\n")
    with pytest.raises(dke.InputError):
        dke.Scenario.from_file(PRESETS / "missing.cfg")


def test_step_bound_is_reported(tmp_path):
    scenario = dke.Scenario.from_text(
        "[grid]\nd = 1\nnum_cells = 4\nn_max = 2\n[initial]\nkind = uniform\nn0 = 0.5\n"
        "[integrator]\ndt = 1\nt_end = 2\n"
    )
    with pytest.raises(dke.StepBoundError):
        dke.simulate(scenario, tmp_path)


def test_limit_study_converges(tmp_path):
    rows = dke.limit_study(preset("limit_study_base"), 3, tmp_path)
    defects = [r["defect"] for r in rows]
    assert len(defects) == 3
    assert all(a / b >= 2.0 for a, b in zip(defects, defects[1:]))


def test_difference_and_classical_rhs_agree_on_smooth_data():
    scenario = preset("limit_study_base")
    n = scenario.initial_state()
    dbe = dke.dbe_rhs(scenario, n)
    classical = dke.classical_rhs(scenario, n)
    assert np.max(np.abs(dbe - classical)) < 0.5 * np.max(np.abs(classical))
