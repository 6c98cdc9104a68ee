"""The Bellman candidate b_{p,C}: coefficient functions, branches, derivatives."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels as K
from .cup import CHORD_SCAN_POINTS, ChordCoords, CupPair
from .errors import DomainError, LemmaViolation
from .geometry import Parameters, SubdomainLabel, as_point
from .special import _cfg


@dataclass(frozen=True)
class BellmanValue:
    """Candidate value at a point with its label and foliation data.

    Exactly one of ``u`` (R1, R3), ``alphas`` (R2) or ``chord`` (R4) is set.
    """

    value: float
    label: SubdomainLabel
    u: Optional[float] = None
    alphas: Optional[tuple] = None
    chord: Optional[ChordCoords] = None

    @property
    def foliation(self) -> dict:
        if self.u is not None:
            return {"u": self.u}
        if self.alphas is not None:
            return {"alphas": list(self.alphas)}
        c = self.chord
        return {"chord": {"v": c.pair.v, "w": c.pair.w, "beta": c.beta}}


def m1(params: Parameters, z: float, cfg=None) -> float:
    """``(p/xi) e^{z/xi} int_z^inf s|s|^(p-2) e^{-s/xi} ds``."""
    return float(K.m1_kernel(params.p, params.xi, float(z), *_cfg(cfg).args()))


def m3(params: Parameters, tc, z: float, cfg=None) -> float:
    """Coefficient of the tangent family on R3, defined for ``z <= v_bar``."""
    if z > tc.v_bar:
        raise DomainError(f"m3 is defined for z <= v_bar = {tc.v_bar}, got {z}")
    return float(K.m3_kernel(params.p, params.xi, tc.v_bar, tc.m3_const, float(z),
                             *_cfg(cfg).args()))


def m_prime(params: Parameters, m_value: float, u: float) -> float:
    """``m'(u)`` from the ODE ``xi m' = m - p u|u|^(p-2)``."""
    p = params.p
    return (m_value - p * math.copysign(abs(u) ** (p - 1.0), u)) / params.xi


def _resolve(params, tc, x, label=None):
    x = as_point(x)
    params.require(x)
    lab, u, d = K.classify_kernel(params.p, params.xi, params.eta, params.C,
                                  tc.packed, x.x1, x.x2)
    if label is not None and label != lab:
        lab = int(label)
        if lab in (K.LABEL_R1, K.LABEL_R3):
            u, d = K.tangent_offset(params.xi, params.C, x.x1, x.x2)
    return x, lab, u, d


def bellman(params: Parameters, tc, x, cfg=None, *, label=None,
            nscan: int = CHORD_SCAN_POINTS) -> BellmanValue:
    """Evaluate ``b_{p,C}(x)``.

    With ``label`` given, that branch formula is evaluated at ``x`` instead of
    the one chosen by :func:`~jnbellman.geometry.classify`; this is how the
    two sides of a subdomain boundary are compared.
    """
    x, lab, u, d = _resolve(params, tc, x, label)
    val, a1, a2, a3 = K.branch_value(params.p, params.xi, params.eta, params.C,
                                     tc.packed, lab, x.x1, x.x2, u, d,
                                     *_cfg(cfg).args(), nscan)
    label = SubdomainLabel(lab)
    val, a1, a2, a3 = float(val), float(a1), float(a2), float(a3)
    if label in (SubdomainLabel.R1, SubdomainLabel.R3):
        return BellmanValue(val, label, u=a1)
    if label is SubdomainLabel.R2:
        return BellmanValue(val, label, alphas=(a1, a2, a3))
    v, w, beta = a1, a2, a3
    if math.isnan(w):
        raise LemmaViolation(f"no cup chord through ({x.x1}, {x.x2})")
    if w == 0.0:
        pair = CupPair(params.p, 0.0, 0.0, 0.0, 1.0, math.nan)
    else:
        q, r, dd = K.cup_slopes(params.p, v, w)
        pair = CupPair(params.p, w, v, q, r, dd)
    return BellmanValue(val, label, chord=ChordCoords(pair, beta))


def bellman_x2(params: Parameters, tc, x, cfg=None, *, label=None) -> float:
    """``db/dx2`` from the closed forms of each branch (no numerical differentiation)."""
    x, lab, u, d = _resolve(params, tc, x, label)
    aux_w = 0.0
    if lab == K.LABEL_R4:
        rm1 = x.x2 * math.exp(-x.x1) - 1.0
        _, aux_w, _, _ = K.chord_search(params.p, tc.w_bar, x.x1, rm1,
                                        CHORD_SCAN_POINTS)
    return float(K.branch_x2(params.p, params.xi, params.eta, params.C, tc.packed,
                             lab, x.x1, x.x2, u, d, aux_w, *_cfg(cfg).args()))


def bellman_x1_r4(params: Parameters, tc, x) -> float:
    """``db/dx1 = q - r D`` on R4."""
    x = as_point(x)
    rm1 = x.x2 * math.exp(-x.x1) - 1.0
    v, w, _, _ = K.chord_search(params.p, tc.w_bar, x.x1, rm1, CHORD_SCAN_POINTS)
    q, r, dd = K.cup_slopes(params.p, v, w)
    return float(q - r * dd)


def bellman_many(params: Parameters, tc, x1, x2, cfg=None, nscan: int = CHORD_SCAN_POINTS):
    """Vectorised :func:`bellman`; returns ``(values, labels)`` arrays.

    Points must already lie in ``Omega_C``; no per-point validation is done.
    """
    x1 = np.ascontiguousarray(x1, dtype=float)
    x2 = np.ascontiguousarray(x2, dtype=float)
    return K.bellman_batch(params.p, params.xi, params.eta, params.C, tc.packed,
                           x1, x2, *_cfg(cfg).args(), nscan)


def h1(params: Parameters, tc, u: float, cfg=None) -> float:
    """``H_1(u) e^{u/xi}``, a positive multiple of ``m_1' - m_1''``; positive for ``u >= w_bar``."""
    p, xi, eta = params.p, params.xi, params.eta
    tail = K.tail_scaled(p, xi, u, *_cfg(cfg).args())
    return xi * u ** (p - 2.0) - eta * xi * tail


def h3(params: Parameters, tc, u: float, cfg=None) -> float:
    """``H_3(u) e^{u/xi}``, a positive multiple of ``m_3' - m_3''``; positive for ``u <= v_bar``."""
    p, xi, eta = params.p, params.xi, params.eta
    cfg = _cfg(cfg)
    inner = K.pow_exp_integral(u, xi, p - 2.0, False, 0.0, (tc.v_bar - u) / xi,
                               *cfg.args())[0]
    tail = K.tail_scaled(p, xi, tc.w_bar, *cfg.args())
    expo = (u - tc.v_bar) / xi - (tc.w_bar - tc.v_bar)
    return xi * (-u) ** (p - 2.0) - eta * (xi * inner + xi * math.exp(expo) * tail)


def convexity_factor(params: Parameters, tc, u: float, cfg=None) -> float:
    """``m'(u) - m''(u)`` straight from the ODE, for ``m = m_1`` or ``m_3`` by the sign of ``u``."""
    p, xi = params.p, params.xi
    if u >= tc.w_bar:
        m = m1(params, u, cfg)
    elif u <= tc.v_bar:
        m = m3(params, tc, u, cfg)
    else:
        raise DomainError("u must lie outside (v_bar, w_bar)")
    mp_ = m_prime(params, m, u)
    mpp = (mp_ - p * (p - 1.0) * abs(u) ** (p - 2.0)) / xi
    return mp_ - mpp
