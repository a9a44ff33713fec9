"""
utils/validation.py – Argument validation for the command-line handlers.

Every check returns a tuple instead of raising, so a handler can report the
first problem and exit with code 1 without a traceback.
"""

import math
from typing import Any

ABOVE_ONE_ALGORITHMS = {"jo", "csiszar"}

ALLOWED_ALGORITHMS = {"arimoto", "jo", "csiszar"}

MAX_GEN_DIMENSION = 10_000


def _as_float(value: Any) -> float | None:
    try:
        out = float(value)
    except (TypeError, ValueError):
        return None
    return out if math.isfinite(out) else None


def validate_alpha(algorithm: str, alpha: Any) -> tuple[bool, str | None]:
    """
    Check that α is usable with `algorithm`.

    Returns:
        (True, None)           – α is valid
        (False, error_message) – α is invalid; the message names the valid range
    """
    if algorithm not in ALLOWED_ALGORITHMS:
        return False, f"Unknown algorithm '{algorithm}'. Choose one of: {', '.join(sorted(ALLOWED_ALGORITHMS))}."
    a = _as_float(alpha)
    if a is None:
        return False, f"Alpha must be a finite number, got {alpha!r}."
    if algorithm in ABOVE_ONE_ALGORITHMS:
        if a <= 1.0:
            return False, f"Algorithm '{algorithm}' requires alpha in (1, inf), got {a!r}."
    elif a <= 0.0 or a == 1.0:
        return False, f"Algorithm '{algorithm}' requires alpha in (0, 1) or (1, inf), got {a!r}."
    return True, None


def parse_alphas(text: str) -> tuple[list[float] | None, str | None]:
    """Parse a comma-separated α list; every entry must exceed 1."""
    parts = [p.strip() for p in (text or "").split(",")]
    if not parts or any(not p for p in parts):
        return None, "Field 'alphas' must be a comma-separated list of numbers."
    alphas = []
    for p in parts:
        a = _as_float(p)
        if a is None:
            return None, f"Alpha '{p}' is not a finite number."
        if a <= 1.0:
            return None, f"Alpha {a!r} must lie in (1, inf) to run every algorithm."
        alphas.append(a)
    return alphas, None


def validate_dimensions(rows: Any, cols: Any) -> tuple[bool, str | None]:
    for name, value in (("rows", rows), ("cols", cols)):
        if not isinstance(value, int) or isinstance(value, bool):
            return False, f"Field '{name}' must be an integer."
        if value < 1:
            return False, f"Field '{name}' must be at least 1, got {value}."
        if value > MAX_GEN_DIMENSION:
            return False, f"Field '{name}' must not exceed {MAX_GEN_DIMENSION:,}."
    return True, None


def validate_rho_grid(rho_grid: Any) -> tuple[bool, str | None]:
    if not isinstance(rho_grid, int) or isinstance(rho_grid, bool) or rho_grid < 2:
        return False, f"Field 'rho-grid' must be an integer ≥ 2, got {rho_grid!r}."
    return True, None


def validate_rate(rate: Any) -> tuple[bool, str | None]:
    r = _as_float(rate)
    if r is None or r < 0:
        return False, f"Rate must be a finite non-negative number of nats, got {rate!r}."
    return True, None


def validate_solver_limits(epsilon: Any, max_iter: Any) -> tuple[bool, str | None]:
    e = _as_float(epsilon)
    if e is None or e <= 0:
        return False, f"Epsilon must be a positive number, got {epsilon!r}."
    if not isinstance(max_iter, int) or isinstance(max_iter, bool) or max_iter < 1:
        return False, f"max-iter must be a positive integer, got {max_iter!r}."
    return True, None
