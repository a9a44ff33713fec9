"""Brute-force grid oracle and solver certification."""

import math

import numpy as np
import pytest

from conftest import REFERENCE_CAPACITY, random_channel
from core.measures import csiszar_mi
from core.prob import Channel, Distribution
from errors import DimensionMismatch, GridTooLarge, ValidationError
from solver.algorithms import SolverConfig, run_solver
from utils.oracle import (
    GridSpec,
    certify,
    grid_capacity,
    grid_csiszar_mi,
    grid_size,
    resolution_estimate,
)


class TestGridSpec:

    def test_step_must_divide_one(self):
        with pytest.raises(ValidationError):
            GridSpec(step=0.3)

    def test_step_range(self):
        with pytest.raises(ValidationError):
            GridSpec(step=1.5)

    def test_size(self):
        assert grid_size(3, GridSpec(step=0.5)) == 6
        assert grid_size(3, GridSpec(step=0.002)) == math.comb(502, 2)


class TestGridCapacity:

    def test_identity(self, identity3):
        value, argmax = grid_capacity(identity3, 2.0, GridSpec(step=0.01))
        assert value == pytest.approx(math.log(3), abs=2e-4)
        np.testing.assert_allclose(argmax.probs, 1 / 3, atol=0.01)

    def test_uniform_rows(self):
        value, _ = grid_capacity(Channel.uniform(3, 3), 2.0, GridSpec(step=0.05))
        assert value == pytest.approx(0.0, abs=1e-12)

    def test_reference_channel(self, reference_channel):
        value, _ = grid_capacity(reference_channel, 2.0, GridSpec(step=0.002, refine=True))
        assert value == pytest.approx(REFERENCE_CAPACITY[2.0], abs=1e-5)

    def test_never_above_solver(self, reference_channel):
        solver = run_solver("arimoto", reference_channel, SolverConfig(alpha=2.0, epsilon=1e-12))
        value, _ = grid_capacity(reference_channel, 2.0, GridSpec(step=0.01, refine=True))
        assert value <= solver.value + 1e-9

    def test_argmax_stable_under_halving(self, reference_channel):
        grid = GridSpec(step=0.01)
        _, coarse = grid_capacity(reference_channel, 2.0, grid)
        _, fine = grid_capacity(reference_channel, 2.0, grid.halved())
        assert np.max(np.abs(coarse.probs - fine.probs)) <= 2 * grid.step + 1e-12

    def test_grid_too_large(self, monkeypatch):
        w = Channel.uniform(4, 2)
        with pytest.raises(GridTooLarge):
            grid_capacity(w, 2.0, GridSpec(step=1e-9))
        monkeypatch.setenv("ALPHACAP_MAX_GRID", "10")
        with pytest.raises(GridTooLarge):
            grid_capacity(w, 2.0, GridSpec(step=0.1))

    def test_alphabet_limit(self):
        with pytest.raises(DimensionMismatch):
            grid_capacity(Channel.uniform(5, 2), 2.0, GridSpec(step=0.5))

    def test_resolution_estimate_shrinks(self, reference_channel):
        coarse = resolution_estimate(reference_channel, 2.0, GridSpec(step=0.02))
        assert 0.0 <= coarse < 1e-3


class TestGridCsiszar:

    def test_identity(self, identity3):
        value = grid_csiszar_mi(Distribution.uniform(3), identity3, 2.0, GridSpec(step=0.01, refine=True))
        assert value == pytest.approx(math.log(3), abs=1e-3)

    def test_uniform_rows(self):
        w = Channel.uniform(2, 4)
        value = grid_csiszar_mi(Distribution.uniform(2), w, 2.0, GridSpec(step=0.05))
        assert value == pytest.approx(0.0, abs=1e-12)

    def test_matches_inner_ascent(self, reference_channel):
        p = Distribution.uniform(3)
        grid_value = grid_csiszar_mi(p, reference_channel, 2.0, GridSpec(step=0.002, refine=True))
        assert grid_value == pytest.approx(csiszar_mi(p, reference_channel, 2.0), abs=5e-5)


class TestCertify:

    def test_accepts_solver_value(self, reference_channel):
        ok, reason = certify(0.0971139, reference_channel, 2.0)
        assert ok and reason is None

    def test_rejects_low_value(self, reference_channel):
        ok, reason = certify(0.05, reference_channel, 2.0)
        assert not ok
        assert "below" in reason

    def test_precomputed_grid_maximum_skips_enumeration(self, monkeypatch, reference_channel):
        value, _ = grid_capacity(reference_channel, 2.0, GridSpec(step=0.01, refine=True))

        def no_enumeration(*args, **kwargs):
            raise AssertionError("grid enumerated a second time")

        monkeypatch.setattr("utils.oracle.grid_capacity", no_enumeration)
        ok, reason = certify(value + 1e-6, reference_channel, 2.0, oracle_value=value)
        assert ok and reason is None
        ok, reason = certify(value + 1e-3, reference_channel, 2.0, oracle_value=value)
        assert not ok
        assert "above" in reason


@pytest.mark.slow
@pytest.mark.parametrize("alpha", [1.2, 2.0, 5.0])
def test_solvers_certified_on_random_channels(alpha):
    rng = np.random.default_rng(1234)
    grid = GridSpec(step=0.002, refine=True)
    for _ in range(20):
        w = random_channel(rng, 3, 3)
        for algorithm in ("arimoto", "jo", "csiszar"):
            result = run_solver(algorithm, w, SolverConfig(alpha=alpha))
            ok, reason = certify(result.value, w, alpha, grid, tol=1e-4)
            assert ok, reason
