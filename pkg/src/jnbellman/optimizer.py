"""Explicit optimizers phi_x on (0, 1) and their moments."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels as K
from .errors import DomainError
from .geometry import Parameters, SubdomainLabel, as_point
from .special import _cfg

CONST = 0
LOG = 1

A_INFTY_GRID = 256
A_INFTY_ITERS = 40


@dataclass(frozen=True)
class Piece:
    """One piece on ``(start, end)``.

    ``kind == CONST`` means the value ``offset``; ``kind == LOG`` means
    ``offset + xi*log(pivot/t)``.
    """

    start: float
    end: float
    kind: int
    offset: float
    pivot: float = 1.0

    @property
    def length(self) -> float:
        return self.end - self.start


def const_piece(a, b, value) -> Piece:
    return Piece(float(a), float(b), CONST, float(value))


def log_piece(a, b, offset, pivot) -> Piece:
    if not pivot > 0:
        raise DomainError(f"log piece needs a positive pivot, got {pivot}")
    return Piece(float(a), float(b), LOG, float(offset), float(pivot))


@dataclass(frozen=True)
class Moments:
    mean: float
    exp_mean: float
    p_mean: float


class PiecewiseTestFunction:
    """A function on ``(0, 1)`` made of constant and logarithmic pieces.

    Empty pieces are dropped on construction.

    Parameters
    ----------
    pieces : sequence of Piece
        Ordered pieces that partition ``(0, 1)``.
    xi : float
        Coefficient of the logarithm in the ``LOG`` pieces.
    """

    def __init__(self, pieces: Sequence[Piece], xi: float):
        self.pieces = tuple(pc for pc in pieces if pc.end > pc.start)
        self.xi = float(xi)
        if not self.pieces:
            raise DomainError("a test function needs at least one nonempty piece")

    def __repr__(self):
        return f"PiecewiseTestFunction({list(self.pieces)!r}, xi={self.xi!r})"

    def __len__(self):
        return len(self.pieces)

    def arrays(self):
        """``(starts, ends, kinds, offsets, pivots)`` as contiguous arrays."""
        ps = self.pieces
        return (np.array([pc.start for pc in ps]), np.array([pc.end for pc in ps]),
                np.array([pc.kind for pc in ps], dtype=np.int64),
                np.array([pc.offset for pc in ps]), np.array([pc.pivot for pc in ps]))

    @property
    def breakpoints(self) -> list[float]:
        return [self.pieces[0].start] + [pc.end for pc in self.pieces]

    def total_length(self) -> float:
        return math.fsum(pc.length for pc in self.pieces)

    def _piece_value(self, pc, t):
        if pc.kind == CONST:
            return np.full_like(t, pc.offset)
        return pc.offset + self.xi * np.log(pc.pivot / t)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.full(t.shape, np.nan)
        for pc in self.pieces:
            mask = (t > pc.start) & (t <= pc.end)
            if mask.any():
                out[mask] = self._piece_value(pc, t[mask])
        return out

    def value_limits(self, i):
        """One-sided limits ``(phi(start+), phi(end-))`` of piece ``i``."""
        pc = self.pieces[i]
        if pc.kind == CONST:
            return pc.offset, pc.offset
        left = math.inf if pc.start == 0 else pc.offset + self.xi * math.log(pc.pivot / pc.start)
        return left, pc.offset + self.xi * math.log(pc.pivot / pc.end)

    def jumps(self) -> list[float]:
        """Absolute jumps at the interior junctions."""
        return [abs(self.value_limits(i)[1] - self.value_limits(i + 1)[0])
                for i in range(len(self.pieces) - 1)]


def _r2_pieces(xi, tc, a1, a2, scale=1.0):
    # the R2 optimizer compressed to (0, scale)
    s1 = scale * a1
    s2 = scale * (a1 + a2)
    return [log_piece(0.0, s1, tc.w_bar, s1) if s1 > 0 else None,
            const_piece(s1, s2, tc.w_bar),
            const_piece(s2, scale, tc.v_bar)]


def build_optimizer(params: Parameters, tc, x, *, label=None) -> PiecewiseTestFunction:
    """The optimizer ``phi_x``: a test function with averages ``x`` attaining ``b(x)``.

    ``label`` forces the construction of a given subdomain, which is how the
    two formulas on a shared boundary are compared.
    """
    x = as_point(x)
    params.require(x)
    xi, eta = params.xi, params.eta
    if x.x2 * math.exp(-x.x1) - 1.0 <= 0.0 and label is None:
        return PiecewiseTestFunction([const_piece(0.0, 1.0, x.x1)], xi)
    lab, u, d = K.classify_kernel(params.p, xi, eta, params.C, tc.packed, x.x1, x.x2)
    if label is not None:
        lab = int(label)
        if lab in (K.LABEL_R1, K.LABEL_R3):
            u, d = K.tangent_offset(xi, params.C, x.x1, x.x2)
    lab = SubdomainLabel(lab)

    if lab is SubdomainLabel.R1:
        alpha = min(d / xi, 1.0)
        pieces = [log_piece(0.0, alpha, u, alpha)] if alpha > 0 else []
        pieces.append(const_piece(alpha, 1.0, u))
    elif lab is SubdomainLabel.R2:
        a1, a2, _ = K.barycentric(xi, eta, tc.packed, x.x1, x.x2)
        a1, a2 = _clip_weights(a1, a2)
        pieces = _r2_pieces(xi, tc, a1, a2)
    elif lab is SubdomainLabel.R3:
        alpha = min(d / xi, 1.0)
        tau = math.exp((u - tc.v_bar) / xi)
        ta = tau * alpha
        w1, w2, _ = K.corner_w_weights(xi, tc.packed)
        pieces = _r2_pieces(xi, tc, w1, w2, scale=ta)
        if alpha > ta:
            pieces.append(log_piece(ta, alpha, u, alpha))
        pieces.append(const_piece(alpha, 1.0, u))
    else:
        return chord_optimizer(params, tc, x.x1, x.x2 * math.exp(-x.x1) - 1.0)
    return PiecewiseTestFunction([pc for pc in pieces if pc is not None], xi)


def chord_optimizer(params: Parameters, tc, x1: float, rho: float) -> PiecewiseTestFunction:
    """The two-step optimizer of R4 at ``x2 = e^{x1}(1 + rho)``.

    Taking the height ``rho`` above ``Gamma_1`` directly keeps the chord
    well determined where R4 is thinner than the spacing of floats near ``x2``.
    """
    v, w, beta, _ = K.chord_search(params.p, tc.w_bar, x1, rho, 1024)
    return PiecewiseTestFunction([const_piece(0.0, beta, w), const_piece(beta, 1.0, v)],
                                 params.xi)


def _clip_weights(a1, a2):
    # rounding may push a weight of a boundary point slightly negative
    a1 = min(max(a1, 0.0), 1.0)
    a2 = min(max(a2, 0.0), 1.0 - a1)
    return a1, a2


def moments(phi: PiecewiseTestFunction, p: float, cfg=None) -> Moments:
    """``<phi>``, ``<e^phi>`` and ``<|phi|^p>`` over ``(0, 1)``.

    The first two are exact closed forms. For a log piece on ``(a, b)`` the
    substitution ``t = pivot*e^{-r}`` turns the third into a weighted
    integral of ``|offset + xi r|^p``, done by adaptive quadrature.
    """
    cfg = _cfg(cfg)
    lin, ex, pm = [], [], []
    for pc in phi.pieces:
        l_, e_ = K.piece_integrals(pc.kind, pc.offset, pc.pivot, phi.xi, pc.start, pc.end)
        lin.append(l_)
        ex.append(e_)
        if pc.kind == CONST:
            pm.append(abs(pc.offset) ** p * pc.length)
        else:
            r_lo = math.log(pc.pivot / pc.end)
            r_hi = math.inf if pc.start == 0 else math.log(pc.pivot / pc.start)
            val, _ = K.pow_exp_integral(pc.offset, phi.xi, float(p), False, r_lo, r_hi,
                                        *cfg.args())
            pm.append(pc.pivot * val)
    return Moments(math.fsum(lin), math.fsum(ex), math.fsum(pm))


def interval_characteristic(phi: PiecewiseTestFunction, a: float, b: float) -> float:
    """``<e^phi>_J exp(-<phi>_J)`` on ``J = (a, b)``."""
    if not 0 <= a < b <= 1:
        raise DomainError(f"need 0 <= a < b <= 1, got ({a}, {b})")
    return K.interval_char(*phi.arrays(), phi.xi, float(a), float(b))


def _search_grid(phi, n):
    pts = set(phi.breakpoints) | {0.0, 1.0}
    n_rest = max(n - len(pts), 8)
    lin = np.linspace(0.0, 1.0, n_rest // 2 + 1)
    logs = np.logspace(-12, 0, n_rest - n_rest // 2)
    grid = np.unique(np.concatenate([np.fromiter(pts, float), lin, logs]))
    return grid[(grid >= 0) & (grid <= 1)]


def a_infty_characteristic(phi: PiecewiseTestFunction, *, grid_size: int = A_INFTY_GRID,
                           iters: int = A_INFTY_ITERS, return_interval: bool = False):
    """Lower estimate of ``sup_J <e^phi>_J exp(-<phi>_J)`` over ``J`` in ``(0, 1)``.

    All pairs of a grid (breakpoints, uniform and log-spaced points) are
    scanned; the best pair is refined by golden-section sweeps on each end.
    """
    grid = _search_grid(phi, grid_size)
    best, a, b = K.a_infty_search(*phi.arrays(), phi.xi, grid, iters)
    return (best, (a, b)) if return_interval else best


def optimality_check(params: Parameters, tc, x, cfg=None) -> float:
    """``|<|phi_x|^p> - b(x)| / max(1, b(x))``."""
    from .candidate import bellman

    phi = build_optimizer(params, tc, x)
    b = bellman(params, tc, x, cfg).value
    return abs(moments(phi, params.p, cfg).p_mean - b) / max(1.0, b)
