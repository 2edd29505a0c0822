import json
import math
import os
import pathlib

import numpy as np
import pytest

import qwell

SCENARIOS = pathlib.Path(os.environ.get("QWELL_SCENARIO_DIR", pathlib.Path(__file__).parents[2] / "scenarios"))
LIGHT = qwell.UnitSystem(0.008)


def two_well(height=0.5):
    return qwell.MultiWellSpec(100.0, 2, 4.2, height)


def test_infinite_well_matches_closed_form():
    basis = qwell.solve(qwell.MultiWellSpec(100.0, 1), points=2000, k=10)
    exact = [qwell.infinite_well_energy(n, 100.0) for n in range(1, 11)]
    assert np.max(np.abs(basis.energies - exact) / exact) < 1e-3
    assert basis.states.shape == (10, 2000)
    assert qwell.orthonormality_defect(basis) < 1e-10


def test_revival_time_identity():
    u = qwell.UnitSystem()
    t = qwell.revival_time(100.0, u)
    assert t * qwell.infinite_well_energy(1, 100.0, u) == pytest.approx(2 * math.pi * u.hbar, rel=1e-9)


def test_two_well_hop_matches_two_state_period():
    basis = qwell.solve(two_well(), k=2, units=LIGHT)
    w1 = qwell.localized_state(basis, [1, 1])
    w2 = qwell.localized_state(basis, [1, -1])
    tau, traces = qwell.well_correlation([w1, w2], w1, tau_max=4.0, samples=4001)
    peaks, period = qwell.detect_hops(tau, traces[1])
    t_rev = qwell.revival_time(100.0, LIGHT)
    assert peaks[0][0] * t_rev == pytest.approx(qwell.two_well_hop_period(basis), rel=1e-2)
    assert traces[0][0] == pytest.approx(1.0)


def test_localization_and_unitarity():
    spec = two_well()
    basis = qwell.solve(spec, k=2, units=LIGHT)
    state = qwell.localized_state(basis, qwell.best_sign_pattern(spec, basis, 0))
    assert qwell.well_probabilities(spec, state)[0] > 0.9
    psi = state.evolve(0.37)
    assert np.sum(np.abs(psi) ** 2) * basis.spacing == pytest.approx(1.0, abs=1e-10)


def test_table_pattern_rows():
    assert qwell.table_pattern(0) == [1, 1, 1, 1, 1, 1]
    assert qwell.table_pattern(3) == [1, -1, -1, 1, 1, -1]


def test_inverse_round_trip_and_bracket_error():
    spec = two_well()
    target = qwell.two_well_hop_period(qwell.solve(spec, k=2, units=LIGHT))
    height, period, _ = qwell.inverse_barrier_height(spec, target, 0.4, 0.65, units=LIGHT, rel_tol=1e-6)
    assert height == pytest.approx(0.5, abs=1e-3)
    with pytest.raises(qwell.BracketError):
        qwell.inverse_barrier_height(spec, target * 10, 0.4, 0.6, units=LIGHT)


def test_run_scenario_is_deterministic():
    text = (SCENARIOS / "two_well.json").read_text()
    a = qwell.run_scenario(text)
    b = qwell.run_scenario(text)
    assert a == b
    fp = qwell.config_fingerprint(text)
    assert all(f"config_fingerprint={fp}" in content.splitlines()[0] for content in a.values())
    assert "trace_well2.csv" in a


def test_config_errors_surface():
    with pytest.raises(qwell.ConfigError):
        qwell.run_solve(json.dumps({"geometry": {"length_nm": 100, "well_count": 1}, "unknown": 1}))
