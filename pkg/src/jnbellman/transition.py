"""Constants of the transition regime: thresholds, brackets, w_*, w_bar, v_bar."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .cup import solve_v, w_limit
from .errors import DomainError, LemmaViolation
from .geometry import Parameters
from .special import _cfg


def threshold_eta(p: float) -> float:
    """``1 - xi_0(p) = 1/(3^(p+2) Gamma(p))``."""
    if not p > 2:
        raise DomainError(f"thresholds need p > 2, got {p}")
    return 1.0 / (3.0 ** (p + 2.0) * math.gamma(p))


def thresholds(p: float) -> tuple[float, float]:
    """``(xi_0(p), C_0(p))``; the construction needs ``C > C_0(p)``."""
    eta0 = threshold_eta(p)
    xi0 = 1.0 - eta0
    return xi0, math.exp(-xi0) / eta0


def _eta(xi, eta):
    return 1.0 - xi if eta is None else eta


def bracket_c(p: float, xi: float, eta: float | None = None) -> tuple[float, float]:
    """The brackets ``c_1 < c_2`` for the roots ``w_*`` and ``w_bar``."""
    eta = _eta(xi, eta)
    if not eta < threshold_eta(p):
        raise DomainError(f"xi={xi} does not exceed xi_0({p})")
    expo = 1.0 / (p - 2.0)
    c1 = xi * (math.e * eta * math.gamma(p - 1.0)) ** expo
    c2 = xi * (2.0 * math.e * eta * math.gamma(p)) ** expo
    return c1, c2


def tr0_lhs(p, xi, w, eta=None, cfg=None):
    """``(1/xi - 1) int_w^inf s^(p-2) e^{-s/xi} ds - w^(p-2) e^{-w/xi}``."""
    eta = _eta(xi, eta)
    return math.exp(-w / xi) * K.tr0_scaled(p, xi, eta, w, *_cfg(cfg).args())


def trolleybus_lhs(p, xi, w, eta=None, cfg=None):
    """``(1/xi - 1) p (p-1) e^{w(1/xi - 1)} int_w^inf s^(p-2) e^{-s/xi} ds``."""
    eta = _eta(xi, eta)
    return K.trolley_lhs(p, xi, eta, w, *_cfg(cfg).args())


@dataclass(frozen=True)
class TransitionConstants:
    p: float
    xi: float
    eta: float
    xi0: float
    c0: float
    c1: float
    c2: float
    w_star: float
    w_bar: float
    v_bar: float
    d_bar: float
    # cached quantities of the trolleybus R2 and the R3 constant
    q_bar: float
    r_bar: float
    m1_wbar: float
    m3_const: float
    r2_slope: float
    packed: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        arr = np.empty(K.TC_SIZE)
        arr[K.TC_XI0] = self.xi0
        arr[K.TC_C0] = self.c0
        arr[K.TC_C1] = self.c1
        arr[K.TC_C2] = self.c2
        arr[K.TC_WSTAR] = self.w_star
        arr[K.TC_WBAR] = self.w_bar
        arr[K.TC_VBAR] = self.v_bar
        arr[K.TC_DBAR] = self.d_bar
        arr[K.TC_QBAR] = self.q_bar
        arr[K.TC_RBAR] = self.r_bar
        arr[K.TC_M1W] = self.m1_wbar
        arr[K.TC_K3] = self.m3_const
        arr[K.TC_SLOPE] = self.r2_slope
        arr.flags.writeable = False
        object.__setattr__(self, "packed", arr)

    def invariant_checks(self, cfg=None) -> dict[str, tuple[bool, float]]:
        """Each structural invariant as ``name -> (holds, margin_or_residual)``."""
        p = self.p
        lam = (p - 1.0) / p
        tr0 = abs(tr0_lhs(p, self.xi, self.w_star, self.eta, cfg))
        trol = abs(trolleybus_lhs(p, self.xi, self.w_bar, self.eta, cfg) - self.d_bar)
        return {
            "0 < w_star < c1": (0 < self.w_star < self.c1, self.c1 - self.w_star),
            "c1 < c2 < xi": (self.c1 < self.c2 < self.xi, self.xi - self.c2),
            "c2 < (p-2)/(3p)": (self.c2 < w_limit(p), w_limit(p) - self.c2),
            "w_star < w_bar < c2": (self.w_star < self.w_bar < self.c2,
                                    min(self.w_bar - self.w_star, self.c2 - self.w_bar)),
            "-w_bar < v_bar < -lambda w_bar": (
                -self.w_bar < self.v_bar < -lam * self.w_bar,
                min(self.v_bar + self.w_bar, -lam * self.w_bar - self.v_bar)),
            "tr0 residual < 1e-10": (tr0 < 1e-10, tr0),
            "trolleybus residual < 1e-10": (trol < 1e-10, trol),
        }


def solve_transition(p: float, xi: float, eta: float | None = None, cfg=None) -> TransitionConstants:
    """Solve for ``w_*``, ``w_bar`` and ``v_bar`` on their guaranteed brackets."""
    eta = _eta(xi, eta)
    cfg = _cfg(cfg)
    xi0, c0 = thresholds(p)
    c1, c2 = bracket_c(p, xi, eta)
    qprm = np.array([p, xi, eta, cfg.abs_tol, cfg.rel_tol, float(cfg.max_depth)])

    lo = min(1e-12, 1e-6 * c1)
    if not K.residual_leaf(K.RES_TR0, lo, qprm) > 0:
        raise LemmaViolation(f"w_* equation is not positive near w=0 (p={p}, xi={xi})")
    if not K.residual_leaf(K.RES_TR0, c1, qprm) < 0:
        raise LemmaViolation(f"w_* equation is not negative at c1={c1} (p={p}, xi={xi})")
    w_star = K.bisect(K.RES_TR0, qprm, lo, c1, 0.0, 400)

    if not K.residual_cup(K.RES_TROLLEY, w_star, qprm) > 0:
        raise LemmaViolation(f"w_bar equation: left side does not exceed D at w_*={w_star}")
    if not K.residual_cup(K.RES_TROLLEY, c2, qprm) < 0:
        raise LemmaViolation(f"w_bar equation: left side is not below D at c2={c2}")
    w_bar = K.bisect(K.RES_TROLLEY, qprm, w_star, c2, 0.0, 400)

    pair = solve_v(p, w_bar)
    m1w = K.m1_kernel(p, xi, w_bar, *cfg.args())
    m3c = (math.exp(pair.v - w_bar) * (m1w - p * w_bar ** (p - 1.0))
           - p * (-pair.v) ** (p - 1.0))
    slope = (m1w - pair.q) / (math.exp(w_bar) / eta - pair.r)
    return TransitionConstants(
        p=p, xi=xi, eta=eta, xi0=xi0, c0=c0, c1=c1, c2=c2,
        w_star=w_star, w_bar=w_bar, v_bar=pair.v, d_bar=pair.d,
        q_bar=pair.q, r_bar=pair.r, m1_wbar=m1w, m3_const=m3c, r2_slope=slope,
    )


def construct(p: float, C: float, cfg=None) -> tuple[Parameters, TransitionConstants]:
    """Parameters and transition constants for ``C > C_0(p)``."""
    if not p > 2:
        raise DomainError(f"the construction needs p > 2, got {p}")
    _, c0 = thresholds(p)
    if not C > c0:
        raise DomainError(f"the construction needs C > C_0(p) = {c0!r}, got C={C!r}")
    params = Parameters(p, C)
    return params, solve_transition(p, params.xi, params.eta, cfg)
