"""
solver/updates.py – Closed-form coordinate maximizers.

Augustin–Csiszár block updates (p, q̃, r) plus the single steps of the
Arimoto and Jitsumatsu–Oohama loops. Each function is a normalization of
weights computed in the log domain; zero-weight terms are masked out before
any logarithm is taken.
"""

from __future__ import annotations

import numpy as np

from core.prob import (
    Channel,
    Distribution,
    JointDistribution,
    ReverseChannel,
    log_sum_exp,
    normalize_log,
    safe_log,
)
from errors import AllMassVanished, DimensionMismatch, ZeroRow


def _normalize_columns_or_uniform(log_w: np.ndarray) -> np.ndarray:
    """Column-normalize exp(log_w); columns with no mass become uniform."""
    out = normalize_log(log_w, axis=0)
    dead = ~np.isfinite(log_sum_exp(log_w, axis=0))
    out[:, dead] = 1.0 / log_w.shape[0]
    return out


def _require_shape(a: tuple, b: tuple, what: str) -> None:
    if a != b:
        raise DimensionMismatch(f"{what}: shapes {a} and {b} differ.")


# ─── Augustin–Csiszár Blocks ──────────────────────────────────────────────────

def update_r(p: Distribution, qt: Channel) -> ReverseChannel:
    """r*(x|y) = p(x) q̃(y|x) / Σ_x p(x) q̃(y|x); zero-mass columns uniform."""
    if p.size != qt.n_inputs:
        raise DimensionMismatch(f"update_r: |X|={p.size} but q̃ has {qt.n_inputs} rows.")
    log_w = safe_log(p.probs)[:, None] + safe_log(qt.matrix)
    return ReverseChannel.trusted(_normalize_columns_or_uniform(log_w))


def update_qt(r: ReverseChannel, w: Channel, alpha: float) -> Channel:
    """q̃*(y|x) ∝ w(y|x) r(x|y)^{1−1/α}, normalized over y."""
    _require_shape(r.shape, w.shape, "update_qt")
    log_w = safe_log(w.matrix) + (1.0 - 1.0 / alpha) * safe_log(r.matrix)
    row_lse = log_sum_exp(log_w, axis=1)
    dead = np.flatnonzero(~np.isfinite(row_lse))
    if dead.size:
        raise ZeroRow(int(dead[0]))
    return Channel.trusted(np.exp(log_w - row_lse[:, None]))


def update_p(qt: Channel, r: ReverseChannel, w: Channel, alpha: float) -> Distribution:
    """
    p*(x) ∝ g(x) with
        log g(x) = Σ_y q̃(y|x) [ (α/(1−α)) log q̃(y|x) + log r(x|y) + (α/(α−1)) log w(y|x) ].

    Terms with q̃(y|x) = 0 are skipped; a −∞ term with positive weight sends
    g(x) to zero.

    Raises:
        AllMassVanished – g(x) = 0 for every x
    """
    _require_shape(qt.shape, w.shape, "update_p q̃ vs channel")
    _require_shape(r.shape, w.shape, "update_p reverse channel vs channel")
    weight = qt.matrix
    live = weight > 0
    inner = np.zeros(w.shape)
    inner[live] = (
        (alpha / (1.0 - alpha)) * np.log(weight[live])
        + safe_log(r.matrix[live])
        + (alpha / (alpha - 1.0)) * safe_log(w.matrix[live])
    )
    log_g = np.sum(np.where(live, weight * inner, 0.0), axis=1)
    if not np.any(np.isfinite(log_g)):
        raise AllMassVanished("update_p: every input weight vanished.")
    return Distribution.trusted(normalize_log(log_g))


# ─── Arimoto Steps ────────────────────────────────────────────────────────────

def arimoto_update_r(p: Distribution, w: Channel, alpha: float) -> ReverseChannel:
    """r(x|y) ∝ p(x) w(y|x)^α over x."""
    if p.size != w.n_inputs:
        raise DimensionMismatch(f"arimoto_update_r: |X|={p.size} but channel has {w.n_inputs} rows.")
    log_w = safe_log(p.probs)[:, None] + alpha * safe_log(w.matrix)
    return ReverseChannel.trusted(_normalize_columns_or_uniform(log_w))


def arimoto_update_p(r: ReverseChannel, w: Channel, alpha: float) -> Distribution:
    """p(x) ∝ (Σ_y w(y|x) r(x|y)^{1−1/α})^{α/(α−1)}."""
    _require_shape(r.shape, w.shape, "arimoto_update_p")
    live = w.matrix > 0
    log_terms = np.full(w.shape, -np.inf)
    with np.errstate(divide="ignore"):
        log_terms[live] = np.log(w.matrix[live]) + (1.0 - 1.0 / alpha) * np.log(r.matrix[live])
    log_s = log_sum_exp(log_terms, axis=1)
    # for α < 1 a zero r under the negative exponent gives log_s = +∞, hence p(x) = 0
    log_p = (alpha / (alpha - 1.0)) * log_s
    if not np.any(np.isfinite(log_p)):
        raise AllMassVanished("arimoto_update_p: every input weight vanished.")
    return Distribution.trusted(normalize_log(log_p))


# ─── Jitsumatsu–Oohama Step ──────────────────────────────────────────────────

def jo_update_q(qt: JointDistribution, w: Channel, alpha: float) -> JointDistribution:
    """q(x,y) ∝ q̃_{X|Y}(x|y)^{1−1/α} w(y|x) q̃_X(x)^{1/α}."""
    _require_shape(qt.shape, w.shape, "jo_update_q")
    log_qt = safe_log(qt.probs)
    log_qt_y = safe_log(qt.probs.sum(axis=0))
    log_qt_x = safe_log(qt.probs.sum(axis=1))
    live = (qt.probs > 0) & (w.matrix > 0)
    log_w = np.full(w.shape, -np.inf)
    log_cond = (log_qt - log_qt_y[None, :])[live]
    log_w[live] = (
        (1.0 - 1.0 / alpha) * log_cond
        + np.log(w.matrix[live])
        + np.broadcast_to(log_qt_x[:, None] / alpha, w.shape)[live]
    )
    if not np.any(live):
        raise AllMassVanished("jo_update_q: q̃ and the channel share no support.")
    return JointDistribution.trusted(normalize_log(log_w))


# ─── Blahut–Arimoto Step ─────────────────────────────────────────────────────

def blahut_update_p(r: ReverseChannel, w: Channel) -> Distribution:
    """p(x) ∝ exp(Σ_y w(y|x) log r(x|y)), the α = 1 member of the family."""
    _require_shape(r.shape, w.shape, "blahut_update_p")
    live = w.matrix > 0
    log_r = np.zeros(w.shape)
    log_r[live] = safe_log(r.matrix[live])
    log_p = np.sum(np.where(live, w.matrix * log_r, 0.0), axis=1)
    if not np.any(np.isfinite(log_p)):
        raise AllMassVanished("blahut_update_p: every input weight vanished.")
    return Distribution.trusted(normalize_log(log_p))
