"""
solver/compare.py – Side-by-side convergence comparison of the α-capacity solvers.

Runs every registered (algorithm, initialization) configuration at every
requested order α concurrently, and returns the rows in registry order
regardless of completion order.

Pipeline:
    1. Expand the preset into (configuration, α) jobs
    2. Dispatch the jobs to a thread pool
    3. Each job runs one solver and times it
    4. Runs that hit max_iter keep their partial result
    5. Return rows sorted by (preset position, α position)
"""

import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass

from core.prob import Channel
from errors import MaxIterationsExceeded, ValidationError
from solver.algorithms import Algorithm, InitKind, InitSpec, SolverConfig, SolverResult, run_solver

logger = logging.getLogger(__name__)

MAX_WORKERS = int(os.getenv("ALPHACAP_WORKERS", "4"))

DEFAULT_ALPHAS = (1.03, 1.5, 2.0, 5.0)

# ─── Preset Registry ─────────────────────────────────────────────────────────
# The five (algorithm, initialization) rows of the reference comparison table.

TABLE1_PRESET = [
    {
        "run_id": "arimoto_uniform_x",
        "algorithm": Algorithm.ARIMOTO,
        "init": InitKind.UNIFORM_X,
        "label": "Arimoto, p0 = u_X",
    },
    {
        "run_id": "jo_uniform_xy",
        "algorithm": Algorithm.JO,
        "init": InitKind.UNIFORM_XY,
        "label": "Jitsumatsu-Oohama, q0 = u_XY",
    },
    {
        "run_id": "jo_product",
        "algorithm": Algorithm.JO,
        "init": InitKind.PRODUCT,
        "label": "Jitsumatsu-Oohama, q0 = u_X x p_Y|X",
    },
    {
        "run_id": "csiszar_uniform_xy",
        "algorithm": Algorithm.CSISZAR,
        "init": InitKind.UNIFORM_XY,
        "label": "Augustin-Csiszar, p0 q0 = u_XY",
    },
    {
        "run_id": "csiszar_product",
        "algorithm": Algorithm.CSISZAR,
        "init": InitKind.PRODUCT,
        "label": "Augustin-Csiszar, p0 q0 = u_X x p_Y|X",
    },
]

PRESETS = {"table1": TABLE1_PRESET}


@dataclass(frozen=True)
class ComparisonRow:
    run_id: str
    label: str
    algorithm: Algorithm
    init: InitKind
    alpha: float
    result: SolverResult
    wall_time_ms: float


# ─── Core Functions ───────────────────────────────────────────────────────────

def run_comparison(
    w: Channel,
    alphas=DEFAULT_ALPHAS,
    epsilon: float | None = None,
    max_iter: int | None = None,
    preset: str = "table1",
    max_workers: int = MAX_WORKERS,
) -> list[ComparisonRow]:
    """
    Run every configuration of `preset` at every α against the same channel.

    Returns:
        One ComparisonRow per (configuration, α), ordered by preset position
        then by position in `alphas`.
    """
    if preset not in PRESETS:
        raise ValidationError(f"Unknown preset '{preset}'. Known presets: {', '.join(PRESETS)}.")
    configs = PRESETS[preset]
    overrides = {}
    if epsilon is not None:
        overrides["epsilon"] = epsilon
    if max_iter is not None:
        overrides["max_iter"] = max_iter

    jobs = [(ci, ai, cfg, alpha) for ci, cfg in enumerate(configs) for ai, alpha in enumerate(alphas)]
    logger.info("[Compare] ▶ Dispatching %d runs (%d configurations × %d orders)",
                len(jobs), len(configs), len(alphas))

    rows: dict[tuple[int, int], ComparisonRow] = {}
    with ThreadPoolExecutor(max_workers=max_workers, thread_name_prefix="compare") as executor:
        future_to_job = {
            executor.submit(_run_one, run_cfg, w, SolverConfig(alpha=alpha, **overrides)): (ci, ai)
            for ci, ai, run_cfg, alpha in jobs
        }
        for future in as_completed(future_to_job):
            rows[future_to_job[future]] = future.result()

    ordered = [rows[key] for key in sorted(rows)]
    unfinished = sum(1 for row in ordered if not row.result.converged)
    logger.info("[Compare] ✔ %d runs finished, %d hit max_iter", len(ordered), unfinished)
    return ordered


def _run_one(run_cfg: dict, w: Channel, solver_cfg: SolverConfig) -> ComparisonRow:
    """Run one configuration and time it; a max_iter stop keeps its partial result."""
    started = time.perf_counter()
    try:
        result = run_solver(run_cfg["algorithm"], w, solver_cfg, InitSpec(run_cfg["init"]))
    except MaxIterationsExceeded as e:
        logger.warning("[Compare] '%s' at α=%.6g hit max_iter=%d",
                       run_cfg["run_id"], solver_cfg.alpha, e.limit)
        result = e.result
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    return ComparisonRow(
        run_id=run_cfg["run_id"],
        label=run_cfg["label"],
        algorithm=run_cfg["algorithm"],
        init=run_cfg["init"],
        alpha=solver_cfg.alpha,
        result=result,
        wall_time_ms=elapsed_ms,
    )
