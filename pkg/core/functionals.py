"""
core/functionals.py – Objective functions maximized by the alternating solvers.

    f_s1 / f_s2 / f_a1 / f_a2   Sibson / Arimoto variational forms in (p_X, r_{X|Y})
    f_jo / f_jo_tilde           Gallager-function form in (q_{X,Y}, q̃_{X,Y})
    f_c_tilde                   Augustin–Csiszár form in (p_X, q̃_{Y|X}, r_{X|Y})

Values are extended reals: a functional returns ±∞ instead of raising when an
iterate puts weight on a zero-probability coordinate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from core.measures import require_alpha, require_rho, rho_from_alpha, tilt, tilt_reverse
from core.prob import (
    Channel,
    Distribution,
    JointDistribution,
    ReverseChannel,
    conditional_y_given_x,
    log_sum_exp,
    marginal_y,
)
from errors import DimensionMismatch


class ObjectiveKind(str, Enum):
    S1 = "S1"
    S2 = "S2"
    A1 = "A1"
    A2 = "A2"
    JO_TILDE = "JO_tilde"
    C_TILDE = "C_tilde"


_ABOVE_ONE = {ObjectiveKind.JO_TILDE, ObjectiveKind.C_TILDE}


@dataclass(frozen=True)
class Objective:
    kind: ObjectiveKind
    alpha: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", ObjectiveKind(self.kind))
        object.__setattr__(self, "alpha", require_alpha(self.alpha, above_one=self.kind in _ABOVE_ONE))

    @property
    def tilts_input(self) -> bool:
        return self.kind in (ObjectiveKind.A1, ObjectiveKind.A2)

    @property
    def tilts_reverse(self) -> bool:
        return self.kind in (ObjectiveKind.S2, ObjectiveKind.A2)

    def __call__(self, *args) -> float:
        return _DISPATCH[self.kind](*args, self.alpha)


def _check_pair(shape_a: tuple, shape_b: tuple, what: str) -> None:
    if shape_a != shape_b:
        raise DimensionMismatch(f"{what}: shapes {shape_a} and {shape_b} differ.")


# ─── Sibson / Arimoto Forms ───────────────────────────────────────────────────

def f_s1(p: Distribution, r: ReverseChannel, w: Channel, alpha: float) -> float:
    """F^S1(p, r) = (α/(α−1)) log Σ_{x,y} p(x)^{1/α} w(y|x) r(x|y)^{1−1/α}."""
    alpha = require_alpha(alpha)
    _check_pair(r.shape, w.shape, "f_s1 reverse channel vs channel")
    if p.size != w.n_inputs:
        raise DimensionMismatch(f"f_s1: |X|={p.size} but channel has {w.n_inputs} rows.")

    weight = (p.probs > 0)[:, None] & (w.matrix > 0)
    r_live = r.matrix[weight]
    if alpha < 1.0 and np.any(r_live == 0):
        # negative exponent on r: a zero blows the sum up
        return -math.inf
    p_live = np.broadcast_to(p.probs[:, None], w.shape)[weight]
    with np.errstate(divide="ignore"):
        terms = np.log(p_live) / alpha + np.log(w.matrix[weight]) + (1.0 - 1.0 / alpha) * np.log(r_live)
    return (alpha / (alpha - 1.0)) * log_sum_exp(terms)


def f_s2(p: Distribution, r: ReverseChannel, w: Channel, alpha: float) -> float:
    return f_s1(p, tilt_reverse(r, alpha), w, alpha)


def f_a1(p: Distribution, r: ReverseChannel, w: Channel, alpha: float) -> float:
    return f_s1(tilt(p, alpha), r, w, alpha)


def f_a2(p: Distribution, r: ReverseChannel, w: Channel, alpha: float) -> float:
    return f_s1(tilt(p, alpha), tilt_reverse(r, alpha), w, alpha)


# ─── Gallager-function Form ───────────────────────────────────────────────────

def f_jo(rho: float, q: JointDistribution, qt: JointDistribution, w: Channel) -> float:
    """
    F^JO_ρ(q, q̃) = E_q[log q̃_{Y|X}^{1+ρ} q̃_Y^{−ρ} / w] + D(q || q̃).

    +∞ when q puts mass where q̃ or w has none.
    """
    rho = require_rho(rho, negative=True)
    _check_pair(q.shape, w.shape, "f_jo q vs channel")
    _check_pair(qt.shape, w.shape, "f_jo q̃ vs channel")

    live = q.probs > 0
    if np.any(qt.probs[live] == 0) or np.any(w.matrix[live] == 0):
        return math.inf
    qt_cond = conditional_y_given_x(qt).matrix
    qt_y = np.broadcast_to(marginal_y(qt).probs, w.shape)

    mass = q.probs[live]
    integrand = (
        (1.0 + rho) * np.log(qt_cond[live])
        - rho * np.log(qt_y[live])
        - np.log(w.matrix[live])
        + np.log(mass)
        - np.log(qt.probs[live])
    )
    return float(np.sum(mass * integrand))


def f_jo_tilde(alpha: float, q: JointDistribution, qt: JointDistribution, w: Channel) -> float:
    """F̃^JO_α = (α/(1−α)) F^JO_{1/α−1}; −∞ where F^JO is +∞."""
    alpha = require_alpha(alpha, above_one=True)
    value = f_jo(rho_from_alpha(alpha), q, qt, w)
    if value == math.inf:
        return -math.inf
    return (alpha / (1.0 - alpha)) * value


# ─── Augustin–Csiszár Form ────────────────────────────────────────────────────

def f_c_tilde(p: Distribution, qt: Channel, r: ReverseChannel, w: Channel, alpha: float) -> float:
    """
    F̃^C(p, q̃, r) = E_{p q̃}[log r(X|Y)/p(X)] + (α/(1−α)) D(p q̃ || p w).
    """
    alpha = require_alpha(alpha, above_one=True)
    _check_pair(qt.shape, w.shape, "f_c_tilde q̃ vs channel")
    _check_pair(r.shape, w.shape, "f_c_tilde reverse channel vs channel")
    if p.size != w.n_inputs:
        raise DimensionMismatch(f"f_c_tilde: |X|={p.size} but channel has {w.n_inputs} rows.")

    joint = p.probs[:, None] * qt.matrix
    live = joint > 0
    if np.any(r.matrix[live] == 0) or np.any(w.matrix[live] == 0):
        return -math.inf
    mass = joint[live]
    p_live = np.broadcast_to(p.probs[:, None], w.shape)[live]
    first = np.sum(mass * (np.log(r.matrix[live]) - np.log(p_live)))
    divergence = np.sum(mass * (np.log(qt.matrix[live]) - np.log(w.matrix[live])))
    return float(first + (alpha / (1.0 - alpha)) * divergence)


_DISPATCH = {
    ObjectiveKind.S1: f_s1,
    ObjectiveKind.S2: f_s2,
    ObjectiveKind.A1: f_a1,
    ObjectiveKind.A2: f_a2,
    ObjectiveKind.JO_TILDE: lambda q, qt, w, alpha: f_jo_tilde(alpha, q, qt, w),
    ObjectiveKind.C_TILDE: f_c_tilde,
}
