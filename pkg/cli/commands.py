"""
cli/commands.py – Handlers for the alphacap subcommands.

Each handler takes the parsed argparse namespace and returns the process exit
code:
    0   success
    1   input error (bad flag, unreadable or invalid file, grid too large)
    2   a solver stopped at max_iter; the partial result is still emitted

Data goes to stdout; diagnostics go through logging to stderr.
"""

import functools
import logging
import time
from pathlib import Path

import numpy as np

import records
from core.prob import Channel
from errors import AlphaCapError, DimensionMismatch, GridTooLarge, MaxIterationsExceeded, ValidationError
from solver.algorithms import Algorithm, InitKind, InitSpec, SolverConfig, run_solver
from solver.compare import ComparisonRow, run_comparison
from solver.exponent import exponent_sweep
from utils.oracle import GridSpec, certify, grid_capacity
from utils.validation import (
    parse_alphas,
    validate_alpha,
    validate_dimensions,
    validate_rate,
    validate_rho_grid,
    validate_solver_limits,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_MAX_ITER = 2

DEFAULT_INITS = {
    Algorithm.ARIMOTO: InitKind.UNIFORM_X,
    Algorithm.JO: InitKind.UNIFORM_XY,
    Algorithm.CSISZAR: InitKind.PRODUCT,
}

NAMED_INITS = {kind.value for kind in InitKind if kind is not InitKind.CUSTOM}

# α used only to build a SolverConfig; the ρ-sweep sets it per point
_SWEEP_PLACEHOLDER_ALPHA = 2.0


def _fail(message: str) -> int:
    logger.error("[CLI] ✘ %s", message)
    return EXIT_INPUT


def _input_errors(handler):
    """Map input-side exceptions to exit code 1 with a one-line diagnostic."""
    @functools.wraps(handler)
    def wrapper(args) -> int:
        try:
            return handler(args)
        except (ValidationError, DimensionMismatch, GridTooLarge) as e:
            return _fail(str(e))
        except OSError as e:
            return _fail(f"Cannot read or write file: {e}")
        except MaxIterationsExceeded as e:
            logger.error("[CLI] ✘ %s", e)
            return EXIT_MAX_ITER
        except AlphaCapError as e:
            return _fail(f"Solver failed: {e}")
    return wrapper


def _resolve_init(value: str | None, algorithm: Algorithm) -> InitSpec:
    if value is None:
        return InitSpec(DEFAULT_INITS[algorithm])
    if value in NAMED_INITS:
        return InitSpec(InitKind(value))
    return InitSpec(InitKind.CUSTOM, records.load_init(value))


# ─── capacity ─────────────────────────────────────────────────────────────────

@_input_errors
def cmd_capacity(args) -> int:
    """
    Run one solver and print its RunRecord as JSON.

    Flow:
        1. Validate α for the algorithm and the solver limits
        2. Load the channel and the initialization
        3. Run the solver (a max_iter stop keeps the partial result)
        4. Write the trace CSV if asked
        5. Print the record
    """
    # ── 1. Validate ───────────────────────────────────────────────────────────
    ok, err = validate_alpha(args.algorithm, args.alpha)
    if not ok:
        return _fail(err)
    ok, err = validate_solver_limits(args.epsilon, args.max_iter)
    if not ok:
        return _fail(err)
    algorithm = Algorithm(args.algorithm)

    # ── 2. Load ───────────────────────────────────────────────────────────────
    w = records.load_channel(args.channel)
    digest = records.channel_digest(args.channel)
    init = _resolve_init(args.init, algorithm)
    cfg = SolverConfig(alpha=float(args.alpha), epsilon=float(args.epsilon), max_iter=args.max_iter)

    # ── 3. Run ────────────────────────────────────────────────────────────────
    exit_code = EXIT_OK
    started = time.perf_counter()
    try:
        result = run_solver(algorithm, w, cfg, init)
    except MaxIterationsExceeded as e:
        logger.warning("[CLI] %s stopped at max_iter=%d; emitting the partial result", algorithm.value, e.limit)
        result, exit_code = e.result, EXIT_MAX_ITER
    wall_time_ms = (time.perf_counter() - started) * 1000.0

    # ── 4. Trace ──────────────────────────────────────────────────────────────
    if args.trace:
        records.write_trace(args.trace, result.trace)

    # ── 5. Emit ───────────────────────────────────────────────────────────────
    record = records.RunRecord.from_result(
        result, cfg.epsilon, init.descriptor, wall_time_ms, digest, bits=args.bits,
    )
    print(record.to_json())
    return exit_code


# ─── compare ──────────────────────────────────────────────────────────────────

def _trace_name(row: ComparisonRow) -> str:
    return f"{row.run_id}_alpha{row.alpha:g}.csv"


def _format_csv(rows: list[ComparisonRow]) -> list[str]:
    lines = ["algorithm,init,alpha,value,iterations,termination,wall_time_ms"]
    for row in rows:
        r = row.result
        lines.append(
            f"{row.algorithm.value},{row.init.value},{row.alpha:g},{r.value:.9f},"
            f"{r.iterations},{r.termination.value},{row.wall_time_ms:.3f}"
        )
    return lines


def _format_text(rows: list[ComparisonRow], alphas: list[float]) -> list[str]:
    """One line per configuration, one (value, N) cell per α."""
    by_config: dict[str, list[ComparisonRow]] = {}
    labels: dict[str, str] = {}
    for row in rows:
        by_config.setdefault(row.run_id, []).append(row)
        labels[row.run_id] = row.label

    label_width = max(len(label) for label in labels.values())
    cells = {
        run_id: [f"({r.result.value:.9f}, {r.result.iterations})" for r in runs]
        for run_id, runs in by_config.items()
    }
    cell_width = max(len(c) for cs in cells.values() for c in cs)
    header = " " * label_width + "  " + "  ".join(f"α={a:g}".ljust(cell_width) for a in alphas)
    lines = [header.rstrip()]
    for run_id, cs in cells.items():
        lines.append((labels[run_id].ljust(label_width) + "  " + "  ".join(c.ljust(cell_width) for c in cs)).rstrip())
    return lines


@_input_errors
def cmd_compare(args) -> int:
    """Run the preset configurations over the α list and print the table."""
    alphas, err = parse_alphas(args.alphas)
    if err:
        return _fail(err)
    ok, err = validate_solver_limits(args.epsilon, args.max_iter)
    if not ok:
        return _fail(err)

    w = records.load_channel(args.channel)
    rows = run_comparison(w, alphas, epsilon=float(args.epsilon), max_iter=args.max_iter, preset=args.preset)

    if args.traces_dir:
        traces_dir = Path(args.traces_dir)
        for row in rows:
            records.write_trace(traces_dir / _trace_name(row), row.result.trace)

    lines = _format_csv(rows) if args.format == "csv" else _format_text(rows, alphas)
    print("\n".join(lines))
    return EXIT_OK if all(row.result.converged for row in rows) else EXIT_MAX_ITER


# ─── exponent ─────────────────────────────────────────────────────────────────

@_input_errors
def cmd_exponent(args) -> int:
    """
    Sweep min E₀ over the ρ-grid and print the G_AR(R) summary as JSON.

    The `rho,min_e0` sweep goes to stdout ahead of the summary line, or to
    --csv PATH when given.
    """
    ok, err = validate_rate(args.rate)
    if not ok:
        return _fail(err)
    ok, err = validate_rho_grid(args.rho_grid)
    if not ok:
        return _fail(err)
    ok, err = validate_solver_limits(args.epsilon, args.max_iter)
    if not ok:
        return _fail(err)
    if args.algorithm not in {a.value for a in DEFAULT_INITS}:
        return _fail(f"Unknown algorithm '{args.algorithm}'.")

    w = records.load_channel(args.channel)
    cfg = SolverConfig(alpha=_SWEEP_PLACEHOLDER_ALPHA, epsilon=float(args.epsilon), max_iter=args.max_iter)
    try:
        sweep = exponent_sweep(float(args.rate), w, cfg, args.rho_grid, args.algorithm)
    except MaxIterationsExceeded as e:
        logger.error("[CLI] ✘ A ρ-point did not converge within max_iter=%d", e.limit)
        return EXIT_MAX_ITER

    lines = ["rho,min_e0"] + [f"{rho!r},{value!r}" for rho, value in sweep.sweep]
    if args.csv:
        path = Path(args.csv)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        logger.info("[CLI] Wrote %d sweep rows to %s", len(sweep.sweep), path)
    else:
        print("\n".join(lines))

    print(records.canonical_json({
        "algorithm": args.algorithm,
        "rate": sweep.rate,
        "rho_grid": args.rho_grid,
        "rho_star": sweep.rho_star,
        "units": "nats",
        "value": sweep.value,
    }))
    return EXIT_OK


# ─── gen-channel ──────────────────────────────────────────────────────────────

@_input_errors
def cmd_gen_channel(args) -> int:
    """
    Print a random row-stochastic matrix.

    Rows are normalized uniform variates from numpy's PCG64 generator seeded
    with --seed, printed with 17 significant digits; the same seed always
    gives the same bytes.
    """
    ok, err = validate_dimensions(args.rows, args.cols)
    if not ok:
        return _fail(err)
    rng = np.random.default_rng(args.seed)
    raw = rng.random((args.rows, args.cols))
    matrix = raw / raw.sum(axis=1, keepdims=True)
    print("\n".join(",".join(f"{v:.17g}" for v in row) for row in matrix))
    return EXIT_OK


# ─── oracle ───────────────────────────────────────────────────────────────────

@_input_errors
def cmd_oracle(args) -> int:
    """Grid-search the Sibson capacity; optionally certify a solver against it."""
    if args.certify:
        ok, err = validate_alpha(args.certify, args.alpha)
        if not ok:
            return _fail(err)
    grid = GridSpec(step=float(args.step), refine=args.refine)
    w: Channel = records.load_channel(args.channel)

    value, argmax = grid_capacity(w, float(args.alpha), grid)
    payload = {"value": value, "argmax": [float(v) for v in argmax.probs]}

    exit_code = EXIT_OK
    if args.certify:
        cfg = SolverConfig(alpha=float(args.alpha), epsilon=float(args.epsilon), max_iter=args.max_iter)
        try:
            result = run_solver(args.certify, w, cfg)
        except MaxIterationsExceeded as e:
            result, exit_code = e.result, EXIT_MAX_ITER
        certified, reason = certify(result.value, w, float(args.alpha), grid, tol=args.tol, oracle_value=value)
        payload.update({
            "algorithm": args.certify,
            "solver_value": result.value,
            "certified": certified,
            "reason": reason,
        })

    print(records.canonical_json(payload))
    return exit_code
