import json

import numpy as np
import pytest

import _oracle
from leaderhinf.errors import AssumptionViolatedError, PositivityViolatedError
from leaderhinf.generators import (
    directed_cycle_plus_leader,
    directed_path,
    random_directed,
    random_undirected,
    undirected_path,
)
from leaderhinf.graph import build_graph, undirected_counterpart
from leaderhinf.hinf import default_grid, frequency_response, hinf_norm, hinf_verify_sweep


@pytest.mark.parametrize("m", range(1, 12))
def test_paths_closed_form(m):
    lam = _oracle.path_lambda1(m)
    assert hinf_norm(undirected_path(m)).value == pytest.approx(1 / lam, rel=1e-10)
    assert hinf_norm(directed_path(m)).value == pytest.approx(1 / np.sqrt(lam), rel=1e-10)


def test_frozen_values():
    assert hinf_norm(directed_path(3)).value == pytest.approx(2.246979603717468, rel=1e-12)
    assert hinf_norm(directed_path(2)).value == pytest.approx(1.618033988749895, rel=1e-12)
    g = directed_cycle_plus_leader(3)
    assert hinf_norm(g).value == pytest.approx(4.181943336052392, rel=1e-12)
    assert hinf_norm(undirected_counterpart(g)).value == pytest.approx(3.732050807568882, rel=1e-12)


def test_matches_oracle_on_random_graphs():
    for seed in range(50):
        for g in (random_directed(9, seed=seed, p=0.3, n_leaders=2), random_undirected(9, seed=seed)):
            assert hinf_norm(g).value == pytest.approx(_oracle.hinf_d(g), rel=1e-10)


def test_assumption_required():
    g = build_graph(3, [(2, 0)], [2])
    with pytest.raises(AssumptionViolatedError):
        hinf_norm(g)
    with pytest.raises(AssumptionViolatedError):
        hinf_verify_sweep(g)


def test_sweep_agrees_and_is_monotone_from_dc():
    g = directed_cycle_plus_leader(6)
    grid = default_grid()
    gains = frequency_response(g, grid)
    assert gains[0] == pytest.approx(hinf_norm(g).value)
    assert gains.max() == pytest.approx(gains[0], rel=1e-12)
    r = hinf_verify_sweep(g)
    assert r.method == "frequency_sweep" and r.sweep_argmax == 0.0
    assert json.loads(json.dumps(r.to_json()))["argmax_omega"] == 0.0


def test_default_grid():
    grid = default_grid(200)
    assert len(grid) == 200 and grid[0] == 0.0
    assert grid[1] == pytest.approx(1e-3) and grid[-1] == pytest.approx(1e3)


def test_positivity_violation_detected(monkeypatch):
    from leaderhinf import hinf as H

    g = directed_path(2)
    monkeypatch.setattr(H, "frequency_response", lambda g, grid: np.array([1.0, 5.0]))
    with pytest.raises(PositivityViolatedError):
        H.hinf_verify_sweep(g, [0.0, 1.0])
