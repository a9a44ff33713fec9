"""
Closed-form block updates: feasibility, error states, and coordinate
optimality against random feasible perturbations.
"""

import numpy as np
import pytest

from conftest import random_channel, random_distribution
from core.functionals import f_c_tilde, f_s1
from core.prob import Channel, Distribution, JointDistribution, ReverseChannel
from errors import DimensionMismatch, ZeroRow
from solver.updates import (
    arimoto_update_p,
    arimoto_update_r,
    blahut_update_p,
    jo_update_q,
    update_p,
    update_qt,
    update_r,
)

ALPHA = 2.0
N_DIRECTIONS = 100


def _random_channel_like(rng, shape) -> np.ndarray:
    raw = rng.random(shape) + 1e-3
    return raw / raw.sum(axis=1, keepdims=True)


def _random_reverse_like(rng, shape) -> np.ndarray:
    raw = rng.random(shape) + 1e-3
    return raw / raw.sum(axis=0, keepdims=True)


@pytest.fixture
def state(rng):
    w = random_channel(rng, 3, 4)
    p = random_distribution(rng, 3)
    qt = Channel(_random_channel_like(rng, w.shape))
    r = ReverseChannel(_random_reverse_like(rng, w.shape))
    return w, p, qt, r


class TestFeasibility:

    def test_update_r_columns_sum_to_one(self, state):
        w, p, qt, _ = state
        np.testing.assert_allclose(update_r(p, qt).matrix.sum(axis=0), 1.0, atol=1e-12)

    def test_update_r_zero_column_is_uniform(self):
        qt = Channel([[1.0, 0.0], [1.0, 0.0]])
        r = update_r(Distribution.uniform(2), qt)
        np.testing.assert_allclose(r.matrix[:, 1], [0.5, 0.5])

    def test_update_qt_rows_sum_to_one(self, state):
        w, _, _, r = state
        np.testing.assert_allclose(update_qt(r, w, ALPHA).matrix.sum(axis=1), 1.0, atol=1e-12)

    def test_update_qt_zero_row(self):
        w = Channel.uniform(2, 2)
        r = ReverseChannel([[0.0, 0.0], [1.0, 1.0]])
        with pytest.raises(ZeroRow) as info:
            update_qt(r, w, ALPHA)
        assert info.value.x == 0

    def test_update_p_is_distribution(self, state):
        w, _, qt, r = state
        p = update_p(qt, r, w, ALPHA)
        assert p.probs.sum() == pytest.approx(1.0)
        assert np.all(p.probs > 0)

    def test_shape_mismatch(self, state):
        w, _, qt, _ = state
        r = ReverseChannel(np.full((3, 3), 1 / 3))
        with pytest.raises(DimensionMismatch):
            update_p(qt, r, w, ALPHA)

    def test_jo_update_is_joint(self, state):
        w = state[0]
        q = jo_update_q(JointDistribution.uniform(*w.shape), w, ALPHA)
        assert q.probs.sum() == pytest.approx(1.0)

    def test_jo_update_keeps_channel_zeros(self):
        w = Channel.identity(3)
        q = jo_update_q(JointDistribution.uniform(3, 3), w, ALPHA)
        np.testing.assert_allclose(q.probs, np.eye(3) / 3, atol=1e-15)

    def test_blahut_update_on_identity_stays_uniform(self):
        w = Channel.identity(3)
        r = update_r(Distribution.uniform(3), w)
        np.testing.assert_allclose(blahut_update_p(r, w).probs, 1 / 3)


class TestCoordinateOptimality:
    """No random feasible move away from a block maximizer increases the objective."""

    @pytest.mark.parametrize("t", [1e-3, 0.1, 0.7])
    def test_update_r(self, rng, state, t):
        w, p, qt, _ = state
        r = update_r(p, qt)
        best = f_c_tilde(p, qt, r, w, ALPHA)
        for _ in range(N_DIRECTIONS):
            other = _random_reverse_like(rng, w.shape)
            moved = ReverseChannel.trusted((1 - t) * r.matrix + t * other)
            assert f_c_tilde(p, qt, moved, w, ALPHA) <= best + 1e-10

    @pytest.mark.parametrize("t", [1e-3, 0.1, 0.7])
    def test_update_qt(self, rng, state, t):
        w, p, _, r = state
        qt = update_qt(r, w, ALPHA)
        best = f_c_tilde(p, qt, r, w, ALPHA)
        for _ in range(N_DIRECTIONS):
            other = _random_channel_like(rng, w.shape)
            moved = Channel.trusted((1 - t) * qt.matrix + t * other)
            assert f_c_tilde(p, moved, r, w, ALPHA) <= best + 1e-10

    @pytest.mark.parametrize("t", [1e-3, 0.1, 0.7])
    def test_update_p(self, rng, state, t):
        w, _, qt, r = state
        p = update_p(qt, r, w, ALPHA)
        best = f_c_tilde(p, qt, r, w, ALPHA)
        for _ in range(N_DIRECTIONS):
            other = random_distribution(rng, w.n_inputs).probs
            moved = Distribution.trusted((1 - t) * p.probs + t * other)
            assert f_c_tilde(moved, qt, r, w, ALPHA) <= best + 1e-10

    @pytest.mark.parametrize("alpha", [1.5, 2.0, 5.0])
    def test_arimoto_blocks(self, rng, state, alpha):
        w, p, _, _ = state
        r = arimoto_update_r(p, w, alpha)
        p_next = arimoto_update_p(r, w, alpha)
        for _ in range(N_DIRECTIONS):
            other_r = ReverseChannel.trusted(0.9 * r.matrix + 0.1 * _random_reverse_like(rng, w.shape))
            assert f_s1(p, other_r, w, alpha) <= f_s1(p, r, w, alpha) + 1e-10
            other_p = Distribution.trusted(0.9 * p_next.probs + 0.1 * random_distribution(rng, 3).probs)
            assert f_s1(other_p, r, w, alpha) <= f_s1(p_next, r, w, alpha) + 1e-10
