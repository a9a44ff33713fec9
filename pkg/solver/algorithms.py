"""
solver/algorithms.py – Alternating-optimization α-capacity solvers.

    arimoto_capacity   C_α^S by maximizing F^S1 (or its S2/A1/A2 variants), α ∈ (0,1)∪(1,∞)
    jo_capacity        C_α^S by maximizing F̃^JO over (q, q̃), α > 1
    csiszar_capacity   C_α^C by maximizing F̃^C over (p, q̃, r), α > 1
    shannon_capacity   Blahut–Arimoto baseline for α = 1

Every loop follows the same contract: F^(0) is evaluated at the initial
point, k is incremented once per sweep, and the run stops at the first k with
|F^(k) − F^(k−1)| < ε. The trace always holds F^(0..N).
"""

from __future__ import annotations

import logging
import os
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from core.functionals import Objective, ObjectiveKind, f_c_tilde, f_jo_tilde
from core.measures import require_alpha, shannon_mi, tilt, tilt_reverse
from core.prob import (
    Channel,
    Distribution,
    JointDistribution,
    conditional_y_given_x,
)
from errors import AllMassVanished, DimensionMismatch, MaxIterationsExceeded, ValidationError, ZeroSupportInit
from solver.updates import (
    arimoto_update_p,
    arimoto_update_r,
    blahut_update_p,
    jo_update_q,
    update_p,
    update_qt,
    update_r,
)

logger = logging.getLogger(__name__)

DEFAULT_EPSILON  = float(os.getenv("ALPHACAP_EPSILON", "1e-9"))
DEFAULT_MAX_ITER = int(os.getenv("ALPHACAP_MAX_ITER", "1000000"))


# ─── Configuration & Results ──────────────────────────────────────────────────

class Algorithm(str, Enum):
    ARIMOTO = "arimoto"
    JO = "jo"
    CSISZAR = "csiszar"
    SHANNON = "shannon"


class Termination(str, Enum):
    CONVERGED = "Converged"
    MAX_ITERATIONS = "MaxIterations"


class InitKind(str, Enum):
    UNIFORM_X = "uniform-x"
    UNIFORM_XY = "uniform-xy"
    PRODUCT = "product"
    CUSTOM = "custom"


@dataclass(frozen=True)
class SolverConfig:
    alpha: float
    epsilon: float = DEFAULT_EPSILON
    max_iter: int = DEFAULT_MAX_ITER

    def __post_init__(self) -> None:
        if not self.epsilon > 0:
            raise ValidationError(f"epsilon must be positive, got {self.epsilon!r}.")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ValidationError(f"max_iter must be a positive integer, got {self.max_iter!r}.")


@dataclass(frozen=True)
class InitSpec:
    kind: InitKind = InitKind.UNIFORM_X
    payload: Distribution | JointDistribution | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", InitKind(self.kind))
        if self.kind is InitKind.CUSTOM and self.payload is None:
            raise ValidationError("A custom initialization needs a payload.")
        if self.kind is not InitKind.CUSTOM and self.payload is not None:
            raise ValidationError(f"Init kind '{self.kind.value}' takes no payload.")

    @property
    def descriptor(self) -> str:
        return self.kind.value


@dataclass(frozen=True)
class ConvergenceTrace:
    values: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.values)

    @property
    def last(self) -> float:
        return self.values[-1]

    def rows(self):
        """(k, F^(k)) pairs for k = 0..N."""
        return enumerate(self.values)

    def is_ascending(self, slack: float = 1e-12) -> bool:
        v = np.asarray(self.values)
        finite = v[np.isfinite(v)]
        return bool(np.all(np.diff(finite) >= -slack))


@dataclass(frozen=True)
class SolverResult:
    algorithm: Algorithm
    alpha: float
    value: float
    iterations: int
    trace: ConvergenceTrace
    termination: Termination
    final_input: Distribution | None = field(default=None, repr=False)

    @property
    def converged(self) -> bool:
        return self.termination is Termination.CONVERGED


# ─── Shared Loop ──────────────────────────────────────────────────────────────

def _ascend(
    algorithm: Algorithm,
    cfg: SolverConfig,
    alpha: float,
    state,
    step: Callable,
    evaluate: Callable,
    final_input: Callable,
    tag: str,
) -> SolverResult:
    started = time.perf_counter()
    values = [evaluate(state)]
    k = 0
    while True:
        state = step(state)
        k += 1
        values.append(evaluate(state))
        if abs(values[k] - values[k - 1]) < cfg.epsilon:
            termination = Termination.CONVERGED
            break
        if k >= cfg.max_iter:
            termination = Termination.MAX_ITERATIONS
            break
        if k % 10_000 == 0:
            logger.debug("[%s] k=%d F=%.12g ΔF=%.3g", tag, k, values[k], values[k] - values[k - 1])

    result = SolverResult(
        algorithm=algorithm,
        alpha=alpha,
        value=values[-1],
        iterations=k,
        trace=ConvergenceTrace(tuple(values)),
        termination=termination,
        final_input=final_input(state),
    )
    elapsed = time.perf_counter() - started
    if termination is Termination.MAX_ITERATIONS:
        logger.warning("[%s] ✘ stopped at max_iter=%d | F=%.12g | %.3fs", tag, k, result.value, elapsed)
        raise MaxIterationsExceeded(cfg.max_iter, result)
    logger.info("[%s] ✔ α=%.6g F=%.12g N=%d | %.3fs", tag, alpha, result.value, k, elapsed)
    return result


# ─── Initialization ───────────────────────────────────────────────────────────

def _custom_input(payload, w: Channel) -> Distribution:
    p = payload.marginal_x() if isinstance(payload, JointDistribution) else payload
    if p.size != w.n_inputs:
        raise DimensionMismatch(f"Initial input has {p.size} symbols, channel has {w.n_inputs} rows.")
    if not p.has_full_support():
        raise ZeroSupportInit("Initial input distribution must be strictly positive.")
    return p


def initial_input(init: InitSpec, w: Channel) -> Distribution:
    """p^(0) for the Arimoto and Blahut–Arimoto loops."""
    if init.kind is InitKind.CUSTOM:
        return _custom_input(init.payload, w)
    return Distribution.uniform(w.n_inputs)


def initial_joint(init: InitSpec, w: Channel) -> JointDistribution:
    """q^(0) for the Jitsumatsu–Oohama loop."""
    if init.kind is InitKind.UNIFORM_XY:
        return JointDistribution.uniform(*w.shape)
    if init.kind is not InitKind.CUSTOM:
        return JointDistribution.product(Distribution.uniform(w.n_inputs), w)
    if isinstance(init.payload, Distribution):
        return JointDistribution.product(_custom_input(init.payload, w), w)
    q = init.payload
    if q.shape != w.shape:
        raise DimensionMismatch(f"Initial joint has shape {q.shape}, channel has {w.shape}.")
    if np.any(q.probs[w.matrix > 0] == 0):
        raise ZeroSupportInit("Initial joint must be positive wherever the channel is.")
    return q


def initial_pair(init: InitSpec, w: Channel) -> tuple[Distribution, Channel]:
    """(p^(0), q̃^(0)) for the Augustin–Csiszár loop."""
    if init.kind is InitKind.UNIFORM_XY:
        return Distribution.uniform(w.n_inputs), Channel.uniform(*w.shape)
    if init.kind is not InitKind.CUSTOM:
        return Distribution.uniform(w.n_inputs), w
    if isinstance(init.payload, Distribution):
        return _custom_input(init.payload, w), w
    q = init.payload
    if q.shape != w.shape:
        raise DimensionMismatch(f"Initial joint has shape {q.shape}, channel has {w.shape}.")
    qt = conditional_y_given_x(q)
    if np.any(qt.matrix[w.matrix > 0] == 0):
        raise ZeroSupportInit("Initial q̃ must be positive wherever the channel is.")
    return _custom_input(q, w), qt


# ─── Solvers ──────────────────────────────────────────────────────────────────

def arimoto_capacity(
    w: Channel,
    cfg: SolverConfig,
    init: InitSpec = InitSpec(),
    variant: ObjectiveKind = ObjectiveKind.S1,
) -> SolverResult:
    """
    Arimoto's alternating maximization of F^S1 (default) or one of its
    tilted variants.

    The variants substitute (p_α, r), (p, r_α) or (p_α, r_α) into F^S1; each
    block update is the S1 maximizer mapped back through the inverse tilt
    (order 1/α).
    """
    alpha = require_alpha(cfg.alpha)
    objective = Objective(variant, alpha)
    if objective.kind not in (ObjectiveKind.S1, ObjectiveKind.S2, ObjectiveKind.A1, ObjectiveKind.A2):
        raise ValidationError(f"arimoto_capacity does not run objective {objective.kind.value}.")

    def r_step(p: Distribution):
        p_eff = tilt(p, alpha) if objective.tilts_input else p
        r_eff = arimoto_update_r(p_eff, w, alpha)
        return tilt_reverse(r_eff, 1.0 / alpha) if objective.tilts_reverse else r_eff

    def p_step(r) -> Distribution:
        r_eff = tilt_reverse(r, alpha) if objective.tilts_reverse else r
        p_eff = arimoto_update_p(r_eff, w, alpha)
        return tilt(p_eff, 1.0 / alpha) if objective.tilts_input else p_eff

    def step(state):
        _, r = state
        p_next = p_step(r)
        return p_next, r_step(p_next)

    p0 = initial_input(init, w)
    logger.info("[Arimoto] ▶ α=%.6g |X|=%d |Y|=%d init=%s variant=%s",
                alpha, w.n_inputs, w.n_outputs, init.descriptor, objective.kind.value)
    return _ascend(
        Algorithm.ARIMOTO, cfg, alpha,
        state=(p0, r_step(p0)),
        step=step,
        evaluate=lambda s: objective(s[0], s[1], w),
        final_input=lambda s: s[0],
        tag="Arimoto",
    )


def jo_capacity(w: Channel, cfg: SolverConfig, init: InitSpec = InitSpec(InitKind.UNIFORM_XY)) -> SolverResult:
    """Jitsumatsu–Oohama loop: q^(k+1) from q̃^(k), then q̃^(k+1) = q^(k+1)."""
    alpha = require_alpha(cfg.alpha, above_one=True)
    q0 = initial_joint(init, w)
    logger.info("[JO] ▶ α=%.6g |X|=%d |Y|=%d init=%s", alpha, w.n_inputs, w.n_outputs, init.descriptor)

    def step(state):
        _, qt = state
        q_next = jo_update_q(qt, w, alpha)
        return q_next, q_next

    return _ascend(
        Algorithm.JO, cfg, alpha,
        state=(q0, q0),
        step=step,
        evaluate=lambda s: f_jo_tilde(alpha, s[0], s[1], w),
        final_input=lambda s: s[0].marginal_x(),
        tag="JO",
    )


def csiszar_capacity(
    w: Channel,
    cfg: SolverConfig,
    init: InitSpec = InitSpec(InitKind.PRODUCT),
) -> SolverResult:
    """
    Triple alternating maximization of F̃^C(p, q̃, r).

    Sweep order: p^(k+1) from (q̃^(k), r^(k)); q̃^(k+1) from r^(k); then
    r^(k+1) from (p^(k+1), q̃^(k+1)). The q̃-update ignores the fresh p.

    A q̃^(0) that puts mass where w(y|x) = 0 (uniform-xy on a sparse channel)
    leaves no input weight on the first p-update; p^(0) is then carried into
    the first sweep.
    """
    alpha = require_alpha(cfg.alpha, above_one=True)
    p0, qt0 = initial_pair(init, w)
    logger.info("[Csiszar] ▶ α=%.6g |X|=%d |Y|=%d init=%s", alpha, w.n_inputs, w.n_outputs, init.descriptor)

    def step(state):
        p, qt, r = state
        try:
            p_next = update_p(qt, r, w, alpha)
        except AllMassVanished:
            # q̃ off supp(w) zeroes every g(x); update_qt restores the support this sweep
            logger.debug("[Csiszar] every g(x) vanished, holding p for one sweep")
            p_next = p
        qt_next = update_qt(r, w, alpha)
        return p_next, qt_next, update_r(p_next, qt_next)

    return _ascend(
        Algorithm.CSISZAR, cfg, alpha,
        state=(p0, qt0, update_r(p0, qt0)),
        step=step,
        evaluate=lambda s: f_c_tilde(s[0], s[1], s[2], w, alpha),
        final_input=lambda s: s[0],
        tag="Csiszar",
    )


def shannon_capacity(w: Channel, cfg: SolverConfig, init: InitSpec = InitSpec()) -> SolverResult:
    """Blahut–Arimoto; cfg.alpha is ignored and reported as 1."""
    p0 = initial_input(init, w)
    logger.info("[Shannon] ▶ |X|=%d |Y|=%d", w.n_inputs, w.n_outputs)

    def step(state):
        _, r = state
        p_next = blahut_update_p(r, w)
        return p_next, update_r(p_next, w)

    return _ascend(
        Algorithm.SHANNON, cfg, 1.0,
        state=(p0, update_r(p0, w)),
        step=step,
        evaluate=lambda s: shannon_mi(s[0], w),
        final_input=lambda s: s[0],
        tag="Shannon",
    )


SOLVERS: dict[Algorithm, Callable[..., SolverResult]] = {
    Algorithm.ARIMOTO: arimoto_capacity,
    Algorithm.JO: jo_capacity,
    Algorithm.CSISZAR: csiszar_capacity,
    Algorithm.SHANNON: shannon_capacity,
}


def run_solver(algorithm: Algorithm | str, w: Channel, cfg: SolverConfig, init: InitSpec | None = None) -> SolverResult:
    """Dispatch to the solver registered for `algorithm`."""
    solver = SOLVERS[Algorithm(algorithm)]
    if init is None:
        return solver(w, cfg)
    return solver(w, cfg, init)
