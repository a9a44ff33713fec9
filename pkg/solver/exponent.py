"""
solver/exponent.py – Gallager-function minimization and the correct decoding
exponent.

For ρ ∈ (−1, 0) and α = 1/(1+ρ) > 1,

    min_p E₀(ρ, p) = ((1−α)/α) C_α = ρ · C_α,

so every point of the ρ-sweep is one capacity run. The sweep fans the runs
out over a thread pool and re-assembles them in grid order.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, replace

from scipy.optimize import minimize_scalar

from core.measures import alpha_from_rho, require_rho
from core.prob import Channel
from errors import ValidationError
from solver.algorithms import Algorithm, SolverConfig, run_solver

logger = logging.getLogger(__name__)

MAX_WORKERS = int(os.getenv("ALPHACAP_WORKERS", "4"))


@dataclass(frozen=True)
class ExponentResult:
    rate: float
    value: float
    rho_star: float
    sweep: tuple[tuple[float, float], ...]


def min_e0(rho: float, w: Channel, cfg: SolverConfig, algorithm: Algorithm | str = Algorithm.ARIMOTO) -> float:
    """min over p_X of E₀(ρ, p_X) through the α-capacity with α = 1/(1+ρ)."""
    rho = require_rho(rho, negative=True)
    if Algorithm(algorithm) is Algorithm.SHANNON:
        raise ValidationError("min_e0 needs an α-capacity solver (arimoto, jo or csiszar).")
    alpha = alpha_from_rho(rho)
    result = run_solver(algorithm, w, replace(cfg, alpha=alpha))
    return ((1.0 - alpha) / alpha) * result.value


def rho_grid_points(rho_grid: int) -> list[float]:
    """Uniform grid on (−1, 0), inset by half a step from both ends."""
    h = 1.0 / rho_grid
    return [-1.0 + (i + 0.5) * h for i in range(rho_grid)]


def exponent_sweep(
    rate: float,
    w: Channel,
    cfg: SolverConfig,
    rho_grid: int,
    algorithm: Algorithm | str = Algorithm.ARIMOTO,
    max_workers: int = MAX_WORKERS,
) -> ExponentResult:
    """
    G_AR(R) = max_{ρ∈(−1,0)} {−ρR + min_p E₀(ρ, p)} on a ρ-grid, then one
    bounded scalar search on the bracket around the best grid point.
    """
    if not (math.isfinite(rate) and rate >= 0):
        raise ValidationError(f"Rate must be a finite non-negative number, got {rate!r}.")
    if int(rho_grid) != rho_grid or rho_grid < 2:
        raise ValidationError(f"rho_grid must be an integer ≥ 2, got {rho_grid!r}.")

    rhos = rho_grid_points(rho_grid)
    logger.info("[Exponent] ▶ R=%.6g | %d ρ-points | algorithm=%s", rate, len(rhos), Algorithm(algorithm).value)

    e0 = [0.0] * len(rhos)
    with ThreadPoolExecutor(max_workers=max_workers, thread_name_prefix="rho-sweep") as executor:
        future_to_index = {
            executor.submit(min_e0, rho, w, cfg, algorithm): i
            for i, rho in enumerate(rhos)
        }
        for future in as_completed(future_to_index):
            e0[future_to_index[future]] = future.result()

    bracket = [-rho * rate + value for rho, value in zip(rhos, e0)]
    best = max(range(len(rhos)), key=lambda i: bracket[i])
    lo = rhos[max(best - 1, 0)]
    hi = rhos[min(best + 1, len(rhos) - 1)]
    rho_star, refined = _bounded_max(lambda rho: -rho * rate + min_e0(rho, w, cfg, algorithm), lo, hi,
                                        tol=1e-3 / rho_grid)
    if bracket[best] >= refined:
        rho_star, refined = rhos[best], bracket[best]

    # the bracket tends to 0 as ρ → 0⁻, so the supremum is never negative
    value = max(refined, 0.0)
    logger.info("[Exponent] ✔ G_AR(%.6g)=%.9g at ρ*=%.6g", rate, value, rho_star)
    return ExponentResult(rate=rate, value=value, rho_star=rho_star, sweep=tuple(zip(rhos, e0)))


def correct_decoding_exponent(
    rate: float,
    w: Channel,
    cfg: SolverConfig,
    rho_grid: int,
    algorithm: Algorithm | str = Algorithm.ARIMOTO,
) -> float:
    return exponent_sweep(rate, w, cfg, rho_grid, algorithm).value


def _bounded_max(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Maximize a concave f on [lo, hi]; returns (argmax, max)."""
    res = minimize_scalar(lambda rho: -f(rho), bounds=(lo, hi), method="bounded", options={"xatol": tol})
    return float(res.x), float(-res.fun)
