"""
core/prob.py – Probability types and log-domain helpers.

Types:
    Distribution       p_X, q_Y, u_X           vector on one alphabet
    Channel            p_{Y|X}, q̃_{Y|X}        |X|×|Y| row-stochastic
    JointDistribution  q_{X,Y}, q̃_{X,Y}        |X|×|Y|, entries sum to 1
    ReverseChannel     r_{X|Y}                 |X|×|Y|, column-stochastic

Every array is stored as a read-only float64 copy. Zero conventions used by
the rest of the package: 0·log 0 = 0, 0^c = 0 for c > 0, log 0 = −∞.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from errors import (
    DimensionMismatch,
    NegativeEntry,
    NonStochasticRow,
    NotADistribution,
    ValidationError,
)

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-9


# ─── Log-domain Helpers ───────────────────────────────────────────────────────

def safe_log(a) -> np.ndarray:
    """Elementwise natural log with log 0 = −∞ and no warnings."""
    a = np.asarray(a, dtype=np.float64)
    out = np.full(a.shape, -np.inf)
    np.log(a, out=out, where=a > 0)
    return out


def log_sum_exp(values, axis=None):
    """
    log Σ exp(v) with the max-shift. All-(−∞) input gives −∞.

    With axis=None a Python float is returned; otherwise an array reduced
    along `axis`.
    """
    v = np.asarray(values, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        result = logsumexp(v, axis=axis)
    if axis is None:
        return float(result)
    return result


def normalize_log(log_w, axis=None) -> np.ndarray:
    """exp(log_w − lse(log_w)) along `axis`; slices that are all −∞ come back as NaN."""
    log_w = np.asarray(log_w, dtype=np.float64)
    lse = log_sum_exp(log_w, axis=axis)
    if axis is not None:
        lse = np.expand_dims(lse, axis)
    with np.errstate(invalid="ignore"):
        return np.exp(log_w - lse)


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=np.float64)
    arr.setflags(write=False)
    return arr


def _check_vector(v: np.ndarray, tol: float, what: str) -> np.ndarray:
    if v.ndim != 1 or v.size < 1:
        raise NotADistribution(f"{what} must be a non-empty vector, got shape {v.shape}.")
    if not np.all(np.isfinite(v)):
        raise NotADistribution(f"{what} has non-finite entries.")
    if v.min() < -tol:
        raise NotADistribution(f"{what} has a negative entry ({v.min()!r}).")
    total = float(v.sum())
    if abs(total - 1.0) > tol:
        raise NotADistribution(f"{what} sums to {total!r}, expected 1.")
    return np.clip(v, 0.0, None)


def _check_matrix(m: np.ndarray, what: str) -> None:
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise NotADistribution(f"{what} must be a non-empty matrix, got shape {m.shape}.")
    if not np.all(np.isfinite(m)):
        raise NotADistribution(f"{what} has non-finite entries.")


# ─── Types ────────────────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class Distribution:
    probs: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.probs, dtype=np.float64)
        object.__setattr__(self, "probs", _frozen(_check_vector(v, DEFAULT_TOL, "Distribution")))

    @classmethod
    def trusted(cls, probs: np.ndarray) -> Distribution:
        """Wrap an array already known to be a distribution (solver iterates)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "probs", _frozen(probs))
        return obj

    @classmethod
    def uniform(cls, n: int) -> Distribution:
        return cls.trusted(np.full(n, 1.0 / n))

    @property
    def size(self) -> int:
        return self.probs.shape[0]

    def has_full_support(self) -> bool:
        return bool(np.all(self.probs > 0))

    def __len__(self) -> int:
        return self.size


@dataclass(frozen=True, eq=False)
class Channel:
    """p_{Y|X}: matrix[x, y] = p(y|x)."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=np.float64)
        _check_matrix(m, "Channel")
        for x in range(m.shape[0]):
            try:
                m[x] = _check_vector(m[x], DEFAULT_TOL, f"Channel row {x}")
            except NotADistribution as e:
                raise NonStochasticRow(x, float(m[x].sum())) from e
        object.__setattr__(self, "matrix", _frozen(m))

    @classmethod
    def trusted(cls, matrix: np.ndarray) -> Channel:
        obj = object.__new__(cls)
        object.__setattr__(obj, "matrix", _frozen(matrix))
        return obj

    @classmethod
    def uniform(cls, n_x: int, n_y: int) -> Channel:
        return cls.trusted(np.full((n_x, n_y), 1.0 / n_y))

    @classmethod
    def identity(cls, n: int) -> Channel:
        return cls.trusted(np.eye(n))

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    @property
    def n_inputs(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_outputs(self) -> int:
        return self.matrix.shape[1]

    @property
    def rows(self) -> list[Distribution]:
        return [Distribution.trusted(row) for row in self.matrix]


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """q_{X,Y}: probs[x, y]."""

    probs: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.probs, dtype=np.float64)
        _check_matrix(m, "JointDistribution")
        flat = _check_vector(m.ravel(), DEFAULT_TOL, "JointDistribution")
        object.__setattr__(self, "probs", _frozen(flat.reshape(m.shape)))

    @classmethod
    def trusted(cls, probs: np.ndarray) -> JointDistribution:
        obj = object.__new__(cls)
        object.__setattr__(obj, "probs", _frozen(probs))
        return obj

    @classmethod
    def uniform(cls, n_x: int, n_y: int) -> JointDistribution:
        return cls.trusted(np.full((n_x, n_y), 1.0 / (n_x * n_y)))

    @classmethod
    def product(cls, p: Distribution, w: Channel) -> JointDistribution:
        """p_X × p_{Y|X}."""
        if p.size != w.n_inputs:
            raise DimensionMismatch(f"|X|={p.size} does not match channel with {w.n_inputs} rows.")
        return cls.trusted(p.probs[:, None] * w.matrix)

    @property
    def shape(self) -> tuple[int, int]:
        return self.probs.shape

    def marginal_x(self) -> Distribution:
        return Distribution.trusted(self.probs.sum(axis=1))


@dataclass(frozen=True, eq=False)
class ReverseChannel:
    """r_{X|Y}: matrix[x, y] = r(x|y); every column sums to 1."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=np.float64)
        _check_matrix(m, "ReverseChannel")
        for y in range(m.shape[1]):
            m[:, y] = _check_vector(m[:, y], DEFAULT_TOL, f"ReverseChannel column {y}")
        object.__setattr__(self, "matrix", _frozen(m))

    @classmethod
    def trusted(cls, matrix: np.ndarray) -> ReverseChannel:
        obj = object.__new__(cls)
        object.__setattr__(obj, "matrix", _frozen(matrix))
        return obj

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    @property
    def cols(self) -> list[Distribution]:
        return [Distribution.trusted(col) for col in self.matrix.T]


# ─── Operations ───────────────────────────────────────────────────────────────

def validate(matrix, tol: float = DEFAULT_TOL, renormalize: bool = False) -> Channel:
    """
    Build a Channel from a raw rectangular matrix.

    Without `renormalize`, every row must sum to 1 within `tol` and entries in
    [−tol, 0) are set to zero. With it, entries are clamped into [0, 1] and each
    row with positive mass is rescaled to sum to 1.

    Raises:
        NegativeEntry     – an entry is below −tol (checked first)
        NonStochasticRow  – a row sum deviates from 1 by more than tol
        ValidationError   – ragged, empty or non-finite input
    """
    try:
        m = np.array(matrix, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise ValidationError(f"Channel matrix is not rectangular numeric data: {e}") from e
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValidationError(f"Channel matrix must be 2-D and non-empty, got shape {m.shape}.")
    if not np.all(np.isfinite(m)):
        raise ValidationError("Channel matrix has non-finite entries.")

    if renormalize:
        m = np.clip(m, 0.0, 1.0)
        sums = m.sum(axis=1)
        for x, total in enumerate(sums):
            if total <= 0:
                raise NonStochasticRow(x, float(total))
        logger.info("[Validate] Renormalized %d rows (max deviation %.3g).",
                    m.shape[0], float(np.max(np.abs(sums - 1.0))))
        return Channel.trusted(m / sums[:, None])

    bad = np.argwhere(m < -tol)
    if bad.size:
        x, y = (int(i) for i in bad[0])
        raise NegativeEntry(x, y, float(m[x, y]))
    sums = m.sum(axis=1)
    for x, total in enumerate(sums):
        if abs(total - 1.0) > tol:
            raise NonStochasticRow(x, float(total))
    return Channel.trusted(np.clip(m, 0.0, None))


def marginal_y(j: JointDistribution) -> Distribution:
    """q̃_Y(y) = Σ_x q̃_{X,Y}(x, y)."""
    return Distribution.trusted(j.probs.sum(axis=0))


def conditional_y_given_x(j: JointDistribution) -> Channel:
    """q̃_{Y|X}; rows with zero marginal mass are uniform over Y."""
    row_mass = j.probs.sum(axis=1)
    n_y = j.shape[1]
    out = np.full(j.shape, 1.0 / n_y)
    live = row_mass > 0
    out[live] = j.probs[live] / row_mass[live, None]
    return Channel.trusted(out)


def conditional_x_given_y(j: JointDistribution) -> ReverseChannel:
    """q̃_{X|Y}; columns with zero marginal mass are uniform over X."""
    col_mass = j.probs.sum(axis=0)
    n_x = j.shape[0]
    out = np.full(j.shape, 1.0 / n_x)
    live = col_mass > 0
    out[:, live] = j.probs[:, live] / col_mass[live]
    return ReverseChannel.trusted(out)


def check_compatible(p: Distribution, w: Channel) -> None:
    if p.size != w.n_inputs:
        raise DimensionMismatch(
            f"Input distribution has {p.size} symbols but channel has {w.n_inputs} rows."
        )
