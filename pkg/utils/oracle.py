"""
utils/oracle.py – Brute-force verification layer for the α-capacity solvers.

Stage 1: Exhaustive search over a regular simplex grid using closed forms only
Stage 2: Optional local refinement at one tenth of the step around the incumbent

The oracle shares no code path with the alternating solvers: it evaluates the
Sibson closed form (α/(α−1)) log Σ_y (Σ_x p(x) w(y|x)^α)^{1/α} directly, so a
solver value that disagrees with it is suspect.
"""

import itertools
import logging
import math
import os
from dataclasses import dataclass
from typing import Callable

import numpy as np

from core.measures import require_alpha
from core.prob import Channel, Distribution, log_sum_exp, safe_log
from errors import DimensionMismatch, GridTooLarge, ValidationError

logger = logging.getLogger(__name__)

# ─── Configuration ────────────────────────────────────────────────────────────

MAX_ALPHABET = 4
CHUNK_SIZE   = 65_536

DEFAULT_STEP = 0.002
REFINE_DIVISIONS = 10


def _max_grid() -> int:
    """Read the grid-size guard at call time so it can be overridden per run."""
    return int(float(os.getenv("ALPHACAP_MAX_GRID", "1e7")))


@dataclass(frozen=True)
class GridSpec:
    step: float = DEFAULT_STEP
    refine: bool = False

    def __post_init__(self) -> None:
        if not (0.0 < self.step < 1.0):
            raise ValidationError(f"Grid step must lie in (0, 1), got {self.step!r}.")
        divisions = round(1.0 / self.step)
        if abs(divisions * self.step - 1.0) > 1e-9:
            raise ValidationError(f"Grid step {self.step!r} does not divide 1 evenly.")

    @property
    def divisions(self) -> int:
        return round(1.0 / self.step)

    def halved(self) -> "GridSpec":
        return GridSpec(step=self.step / 2.0, refine=self.refine)


# ─── Grid Enumeration ─────────────────────────────────────────────────────────

def grid_size(n: int, grid: GridSpec) -> int:
    """Number of compositions of 1 into n multiples of grid.step."""
    return math.comb(grid.divisions + n - 1, n - 1)


def _compositions(n: int, grid: GridSpec):
    """
    Yield (chunk, n) arrays of simplex points, lexicographically ascending.

    Stars and bars: bar positions from itertools.combinations come out in
    lexicographic order, which is the lexicographic order of the compositions.
    """
    m = grid.divisions
    bars_iter = itertools.combinations(range(m + n - 1), n - 1)
    while True:
        block = list(itertools.islice(bars_iter, CHUNK_SIZE))
        if not block:
            return
        bars = np.asarray(block, dtype=np.int64).reshape(len(block), n - 1)
        edges = np.hstack([
            np.full((len(block), 1), -1, dtype=np.int64),
            bars,
            np.full((len(block), 1), m + n - 1, dtype=np.int64),
        ])
        yield (np.diff(edges, axis=1) - 1) / m


def _guard(n: int, grid: GridSpec, what: str) -> None:
    if n > MAX_ALPHABET:
        raise DimensionMismatch(f"{what}: alphabet of size {n} exceeds the oracle limit of {MAX_ALPHABET}.")
    points = grid_size(n, grid)
    limit = _max_grid()
    if points > limit:
        raise GridTooLarge(points, limit)


def _search(n: int, grid: GridSpec, score: Callable[[np.ndarray], np.ndarray], tag: str) -> tuple[float, np.ndarray]:
    """Maximize `score` over the grid, then optionally refine. Ties keep the earliest point."""
    best_value, best_point = -math.inf, None
    for chunk in _compositions(n, grid):
        values = score(chunk)
        i = int(np.argmax(values))  # first occurrence of the maximum
        if best_point is None or values[i] > best_value:
            best_value, best_point = float(values[i]), chunk[i].copy()

    logger.debug("[%s] Stage 1 | %d points | best=%.12g", tag, grid_size(n, grid), best_value)
    if grid.refine:
        best_value, best_point = _refine(best_point, best_value, grid, score)
        logger.debug("[%s] Stage 2 | refined best=%.12g", tag, best_value)
    return best_value, best_point


def _refine(center: np.ndarray, center_value: float, grid: GridSpec, score) -> tuple[float, np.ndarray]:
    """Search the ±step box around `center` at step/10; the last coordinate absorbs the rest."""
    n = center.shape[0]
    offsets = np.arange(-REFINE_DIVISIONS, REFINE_DIVISIONS + 1) * (grid.step / REFINE_DIVISIONS)
    deltas = np.array(list(itertools.product(offsets, repeat=n - 1)), dtype=np.float64).reshape(-1, n - 1)
    head = center[:-1][None, :] + deltas
    tail = 1.0 - head.sum(axis=1, keepdims=True)
    points = np.hstack([head, tail])
    points = points[np.all(points >= 0.0, axis=1)]
    points = np.clip(points, 0.0, 1.0)

    values = score(points)
    i = int(np.argmax(values))
    if values[i] > center_value:
        return float(values[i]), points[i]
    return center_value, center


# ─── Closed Forms ─────────────────────────────────────────────────────────────

def _sibson_scores(points: np.ndarray, w: Channel, alpha: float) -> np.ndarray:
    """Sibson MI of each row of `points` as the input distribution."""
    log_points = safe_log(points)
    log_w_alpha = alpha * safe_log(w.matrix)
    # inner[c, y] = log Σ_x p_c(x) w(y|x)^α
    inner = log_sum_exp(log_points[:, :, None] + log_w_alpha[None, :, :], axis=1)
    outer = log_sum_exp(inner / alpha, axis=1)
    return (alpha / (alpha - 1.0)) * outer


def _expected_divergence(points: np.ndarray, p: Distribution, w: Channel, alpha: float) -> np.ndarray:
    """Σ_x p(x) D_α(w(·|x) || q) for each row q of `points`."""
    live_x = p.probs > 0
    rows = w.matrix[live_x]
    log_q = safe_log(points)
    terms = np.full((points.shape[0],) + rows.shape, -np.inf)
    mask = np.broadcast_to(rows > 0, terms.shape)
    with np.errstate(invalid="ignore"):
        full = (1.0 - alpha) * log_q[:, None, :] + alpha * safe_log(rows)[None, :, :]
    terms[mask] = full[mask]
    divergences = log_sum_exp(terms, axis=2) / (alpha - 1.0)
    return divergences @ p.probs[live_x]


# ─── Public Operations ────────────────────────────────────────────────────────

def grid_capacity(w: Channel, alpha: float, grid: GridSpec = GridSpec()) -> tuple[float, Distribution]:
    """
    Exhaustive maximum of the Sibson MI over the input simplex grid.

    Returns:
        (value, argmax); on ties the lexicographically smallest composition wins.

    Raises:
        GridTooLarge      – the grid exceeds ALPHACAP_MAX_GRID points
        DimensionMismatch – |X| > 4
    """
    alpha = require_alpha(alpha)
    _guard(w.n_inputs, grid, "grid_capacity")
    logger.info("[Oracle] ▶ grid_capacity α=%.6g |X|=%d step=%g refine=%s",
                alpha, w.n_inputs, grid.step, grid.refine)
    value, point = _search(w.n_inputs, grid, lambda pts: _sibson_scores(pts, w, alpha), "Oracle")
    logger.info("[Oracle] ✔ grid maximum %.12g", value)
    return value, Distribution.trusted(point)


def grid_csiszar_mi(p: Distribution, w: Channel, alpha: float, grid: GridSpec = GridSpec()) -> float:
    """Grid minimum over q_Y of E_X[D_α(w(·|X) || q_Y)]."""
    alpha = require_alpha(alpha)
    if p.size != w.n_inputs:
        raise DimensionMismatch(f"grid_csiszar_mi: |X|={p.size} but channel has {w.n_inputs} rows.")
    _guard(w.n_outputs, grid, "grid_csiszar_mi")
    value, _ = _search(w.n_outputs, grid, lambda pts: -_expected_divergence(pts, p, w, alpha), "Oracle")
    return -value


def resolution_estimate(w: Channel, alpha: float, grid: GridSpec = GridSpec()) -> float:
    """|grid maximum at step − grid maximum at step/2|, an empirical resolution bound."""
    coarse, _ = grid_capacity(w, alpha, grid)
    fine, _ = grid_capacity(w, alpha, grid.halved())
    return abs(fine - coarse)


def certify(
    value: float,
    w: Channel,
    alpha: float,
    grid: GridSpec = GridSpec(refine=True),
    tol: float = 1e-4,
    oracle_value: float | None = None,
) -> tuple[bool, str | None]:
    """
    Check a solver value against the grid maximum. Pass `oracle_value` when
    grid_capacity(w, alpha, grid) has already been computed.

    Returns:
        (True, None)     – value agrees with the oracle within tol
        (False, reason)  – value is more than tol above or below the grid maximum
    """
    if oracle_value is None:
        oracle_value, _ = grid_capacity(w, alpha, grid)
    gap = value - oracle_value
    if abs(gap) > tol:
        side = "below" if gap < 0 else "above"
        reason = f"value {value:.12g} is {abs(gap):.3g} {side} the grid maximum {oracle_value:.12g} (tol {tol:g})"
        logger.warning("[Oracle] Certification failed: %s", reason)
        return False, reason
    logger.info("[Oracle] Certified %.12g (grid %.12g)", value, oracle_value)
    return True, None
