"""
records.py – File persistence for channels, initial distributions, traces and
run records.

Channel files:
    CSV   one row of p_{Y|X}(·|x) per line, no header
    JSON  {"matrix": [[...], ...]}

Run records are emitted as canonical JSON: sorted keys, floats rounded to 12
significant digits, so parsing and re-serializing a record reproduces it
byte for byte.
"""

import csv
import hashlib
import json
import logging
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from core.prob import Channel, Distribution, JointDistribution, validate
from errors import ValidationError
from solver.algorithms import ConvergenceTrace, SolverResult

logger = logging.getLogger(__name__)

NATS_PER_BIT = math.log(2.0)

SIGNIFICANT_DIGITS = 12


# ─── Reading ──────────────────────────────────────────────────────────────────

def _read_rows(path: str | Path, key: str) -> list[list[float]]:
    """Parse a CSV matrix or the `key` entry of a JSON object into float rows."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ValidationError(f"{path}: invalid JSON ({e.msg}).") from e
        if not isinstance(data, dict) or key not in data:
            raise ValidationError(f"{path}: expected a JSON object with a '{key}' field.")
        rows = data[key]
        if rows and not isinstance(rows[0], list):
            rows = [rows]
    else:
        rows = [row for row in csv.reader(text.splitlines()) if any(cell.strip() for cell in row)]

    try:
        parsed = [[float(cell) for cell in row] for row in rows]
    except (TypeError, ValueError) as e:
        raise ValidationError(f"{path}: non-numeric entry ({e}).") from e
    if not parsed:
        raise ValidationError(f"{path}: no rows found.")
    widths = {len(row) for row in parsed}
    if len(widths) != 1:
        raise ValidationError(f"{path}: rows have different lengths {sorted(widths)}.")
    return parsed


def load_channel(path: str | Path, renormalize: bool = False) -> Channel:
    """Read and validate a channel file."""
    rows = _read_rows(path, "matrix")
    w = validate(np.array(rows, dtype=np.float64), renormalize=renormalize)
    logger.info("[Records] Loaded %d×%d channel from %s", w.n_inputs, w.n_outputs, path)
    return w


def load_init(path: str | Path) -> Distribution | JointDistribution:
    """
    Read a custom initialization.

    A single row is an input distribution p_X; several rows are a joint
    distribution q_{X,Y} laid out like the channel.
    """
    rows = _read_rows(path, "probs")
    if len(rows) == 1:
        return Distribution(np.array(rows[0], dtype=np.float64))
    return JointDistribution(np.array(rows, dtype=np.float64))


def channel_digest(path: str | Path) -> str:
    """sha256 of the raw file bytes."""
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


# ─── Writing ──────────────────────────────────────────────────────────────────

def write_trace(path: str | Path, trace: ConvergenceTrace) -> None:
    """Write the (k, F^(k)) rows with header "k,F"; one row per recorded iterate."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["k", "F"])
        for k, value in trace.rows():
            writer.writerow([k, repr(float(value))])
    logger.info("[Records] Wrote %d trace rows to %s", len(trace), path)


def round_significant(value: float, digits: int = SIGNIFICANT_DIGITS) -> float:
    if not math.isfinite(value):
        return value
    return float(f"{value:.{digits}g}")


def to_bits(nats: float) -> float:
    return nats / NATS_PER_BIT


@dataclass(frozen=True)
class RunRecord:
    algorithm: str
    alpha: float
    epsilon: float
    init: str
    value: float
    units: str
    iterations: int
    termination: str
    wall_time_ms: float
    channel_digest: str

    @classmethod
    def from_result(
        cls,
        result: SolverResult,
        epsilon: float,
        init: str,
        wall_time_ms: float,
        digest: str,
        bits: bool = False,
    ) -> "RunRecord":
        return cls(
            algorithm=result.algorithm.value,
            alpha=result.alpha,
            epsilon=epsilon,
            init=init,
            value=to_bits(result.value) if bits else result.value,
            units="bits" if bits else "nats",
            iterations=result.iterations,
            termination=result.termination.value,
            wall_time_ms=wall_time_ms,
            channel_digest=digest,
        )

    def to_json(self) -> str:
        return canonical_json(asdict(self))


def canonical_json(data: dict) -> str:
    """Sorted keys, floats at 12 significant digits."""
    return json.dumps(_clean(data), sort_keys=True, ensure_ascii=False)


def _clean(value):
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, float):
        return round_significant(value)
    return value
