"""
core/measures.py – Closed-form information measures in nats.

Rényi divergence and entropy, Arimoto conditional entropy, the Gallager
function E₀(ρ, p_X), α-tilting, and the Sibson / Arimoto / Augustin–Csiszár
α-mutual informations. Shannon quantities are kept alongside as the α → 1
baseline.

Everything is evaluated in the log domain from masked logarithms so orders up
to a few hundred do not overflow.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from core.prob import (
    Channel,
    Distribution,
    ReverseChannel,
    check_compatible,
    log_sum_exp,
    normalize_log,
    safe_log,
)
from errors import AlphaOutOfRange, AlphabetMismatch, MaxIterationsExceeded

logger = logging.getLogger(__name__)

CSISZAR_INNER_TOL = 1e-10
CSISZAR_INNER_MAX_ITER = 1_000_000


# ─── Order Parameters ─────────────────────────────────────────────────────────

def require_alpha(alpha: float, above_one: bool = False) -> float:
    """Return alpha as float if it is a finite order in (0,1)∪(1,∞) (or (1,∞))."""
    alpha = float(alpha)
    if above_one:
        if not (math.isfinite(alpha) and alpha > 1.0):
            raise AlphaOutOfRange(alpha, "(1, ∞)")
    elif not (math.isfinite(alpha) and alpha > 0.0 and alpha != 1.0):
        raise AlphaOutOfRange(alpha, "(0, 1) ∪ (1, ∞)")
    return alpha


def require_rho(rho: float, negative: bool = False) -> float:
    rho = float(rho)
    if negative:
        if not (math.isfinite(rho) and -1.0 < rho < 0.0):
            raise AlphaOutOfRange(rho, "ρ ∈ (−1, 0)")
    elif not (math.isfinite(rho) and rho > -1.0):
        raise AlphaOutOfRange(rho, "ρ ∈ (−1, ∞)")
    return rho


def rho_from_alpha(alpha: float) -> float:
    return 1.0 / alpha - 1.0


def alpha_from_rho(rho: float) -> float:
    return 1.0 / (1.0 + rho)


# ─── Shannon Baseline ─────────────────────────────────────────────────────────

def shannon_entropy(p: Distribution) -> float:
    live = p.probs > 0
    return float(-np.sum(p.probs[live] * np.log(p.probs[live])))


def kl_divergence(p: Distribution, q: Distribution) -> float:
    """D(p||q); +∞ when p puts mass where q has none."""
    if p.size != q.size:
        raise AlphabetMismatch(f"Alphabet sizes differ: {p.size} vs {q.size}.")
    live = p.probs > 0
    if np.any(q.probs[live] == 0):
        return math.inf
    return float(np.sum(p.probs[live] * (np.log(p.probs[live]) - np.log(q.probs[live]))))


def shannon_mi(p: Distribution, w: Channel) -> float:
    """I(p, w) = Σ p(x) w(y|x) log(w(y|x) / p_Y(y))."""
    check_compatible(p, w)
    joint = p.probs[:, None] * w.matrix
    p_y = joint.sum(axis=0)
    live = joint > 0
    ratio = w.matrix[live] / np.broadcast_to(p_y, joint.shape)[live]
    return float(np.sum(joint[live] * np.log(ratio)))


# ─── Rényi Measures ───────────────────────────────────────────────────────────

def renyi_divergence(p: Distribution, q: Distribution, alpha: float) -> float:
    """D_α(p||q) = (1/(α−1)) log Σ p^α q^{1−α}."""
    alpha = require_alpha(alpha)
    if p.size != q.size:
        raise AlphabetMismatch(f"Alphabet sizes differ: {p.size} vs {q.size}.")
    live_p = p.probs > 0
    if alpha > 1.0 and np.any(q.probs[live_p] == 0):
        return math.inf
    both = live_p & (q.probs > 0)
    if not np.any(both):
        return math.inf
    terms = alpha * np.log(p.probs[both]) + (1.0 - alpha) * np.log(q.probs[both])
    return log_sum_exp(terms) / (alpha - 1.0)


def renyi_entropy(p: Distribution, alpha: float) -> float:
    """H_α(p) = (1/(1−α)) log Σ p^α."""
    alpha = require_alpha(alpha)
    return log_sum_exp(alpha * safe_log(p.probs)) / (1.0 - alpha)


def arimoto_conditional_entropy(p: Distribution, w: Channel, alpha: float) -> float:
    """H_α^A(X|Y) = (α/(1−α)) log Σ_y (Σ_x p(x)^α w(y|x)^α)^{1/α}."""
    alpha = require_alpha(alpha)
    check_compatible(p, w)
    log_terms = alpha * (safe_log(p.probs)[:, None] + safe_log(w.matrix))
    per_y = log_sum_exp(log_terms, axis=0) / alpha
    return (alpha / (1.0 - alpha)) * log_sum_exp(per_y)


def gallager_e0(rho: float, p: Distribution, w: Channel) -> float:
    """E₀(ρ, p) = −log Σ_y (Σ_x p(x) w(y|x)^{1/(1+ρ)})^{1+ρ}."""
    rho = require_rho(rho)
    check_compatible(p, w)
    if rho == 0.0:
        # inner sums telescope to Σ_y p_Y(y) = 1
        return 0.0
    log_terms = safe_log(p.probs)[:, None] + safe_log(w.matrix) / (1.0 + rho)
    per_y = log_sum_exp(log_terms, axis=0)
    return -log_sum_exp((1.0 + rho) * per_y)


# ─── Tilting ──────────────────────────────────────────────────────────────────

def tilt(p: Distribution, alpha: float) -> Distribution:
    """α-tilted distribution p_α(x) = p(x)^α / Σ p^α."""
    if not alpha > 0:
        raise AlphaOutOfRange(alpha, "(0, ∞)")
    if alpha == 1.0:
        return p
    return Distribution.trusted(normalize_log(alpha * safe_log(p.probs)))


def tilt_reverse(r: ReverseChannel, alpha: float) -> ReverseChannel:
    """Column-wise tilt: r_α(x|y) = r(x|y)^α / Σ_x r(x|y)^α."""
    if not alpha > 0:
        raise AlphaOutOfRange(alpha, "(0, ∞)")
    if alpha == 1.0:
        return r
    return ReverseChannel.trusted(normalize_log(alpha * safe_log(r.matrix), axis=0))


# ─── α-Mutual Informations ───────────────────────────────────────────────────

def sibson_mi(p: Distribution, w: Channel, alpha: float) -> float:
    """I_α^S = (α/(1−α)) E₀(1/α − 1, p)."""
    alpha = require_alpha(alpha)
    return (alpha / (1.0 - alpha)) * gallager_e0(rho_from_alpha(alpha), p, w)


def arimoto_mi(p: Distribution, w: Channel, alpha: float) -> float:
    """I_α^A = (α/(1−α)) E₀(1/α − 1, p_α)."""
    alpha = require_alpha(alpha)
    return sibson_mi(tilt(p, alpha), w, alpha)


def arimoto_mi_entropic(p: Distribution, w: Channel, alpha: float) -> float:
    """I_α^A = H_α(X) − H_α^A(X|Y); cross-check for arimoto_mi."""
    return renyi_entropy(p, alpha) - arimoto_conditional_entropy(p, w, alpha)


def csiszar_mi(
    p: Distribution,
    w: Channel,
    alpha: float,
    tol: float = CSISZAR_INNER_TOL,
    max_iter: int = CSISZAR_INNER_MAX_ITER,
) -> float:
    """
    Augustin–Csiszár α-MI for α > 1.

    Maximizes F̃^C(p, q̃, r) over (q̃_{Y|X}, r_{X|Y}) with p held fixed by
    alternating the q̃- and r-updates until successive values differ by less
    than `tol`. Inputs with p(x) = 0 carry no weight and are dropped first.

    Raises:
        MaxIterationsExceeded – no convergence within max_iter sweeps
    """
    from core.functionals import f_c_tilde
    from solver.updates import update_qt, update_r

    alpha = require_alpha(alpha, above_one=True)
    check_compatible(p, w)
    live = p.probs > 0
    p_live = Distribution.trusted(p.probs[live] / p.probs[live].sum())
    w_live = Channel.trusted(w.matrix[live])

    qt = w_live
    r = update_r(p_live, qt)
    prev = f_c_tilde(p_live, qt, r, w_live, alpha)
    for k in range(1, max_iter + 1):
        qt = update_qt(r, w_live, alpha)
        r = update_r(p_live, qt)
        value = f_c_tilde(p_live, qt, r, w_live, alpha)
        if abs(value - prev) < tol:
            logger.debug("[CsiszarMI] converged in %d sweeps: %.12g", k, value)
            return value
        prev = value
    raise MaxIterationsExceeded(max_iter)
