"""Chord ("cup") pairs: the coupling F(v, w) = 0 and the quantities built on it."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from . import _kernels as K
from .errors import DomainError, LemmaViolation
from .geometry import Parameters, SubdomainLabel, as_point, classify

log = logging.getLogger(__name__)

CHORD_SCAN_POINTS = 1024


def bracket_lambda(p: float) -> float:
    """``(p - 1)/p``: the companion root lies in ``(-w, -lambda w)``."""
    return (p - 1.0) / p


def w_limit(p: float) -> float:
    """Right end ``(p - 2)/(3p)`` of the admissible range of ``w``."""
    return (p - 2.0) / (3.0 * p)


@dataclass(frozen=True)
class CupPair:
    p: float
    w: float
    v: float
    q: float
    r: float
    d: float

    def d_forms(self):
        """The three algebraically equal expressions for ``D(w)``."""
        return K.d_forms(self.p, self.v, self.w)


@dataclass(frozen=True)
class ChordCoords:
    pair: CupPair
    beta: float


def big_f(p: float, v: float, w: float) -> float:
    """``F(v, w)``; zero exactly when ``(v, w)`` is a cup pair.

    Evaluated in a regrouped form that avoids the leading-order cancellation
    of the defining expression near ``v = -w``; both forms agree algebraically.
    """
    if not (w > 0 and v < 0):
        raise DomainError(f"F(v, w) needs v < 0 < w, got v={v}, w={w}")
    return K.big_f(p, v, w)


def _pair(p, v, w):
    q, r, d = K.cup_slopes(p, v, w)
    return CupPair(p=p, w=w, v=v, q=q, r=r, d=d)


def solve_v(p: float, w: float) -> CupPair:
    """The unique companion ``v`` of ``w``, with the slopes ``q``, ``r`` and ``D``."""
    if not p > 2:
        raise DomainError(f"need p > 2, got {p}")
    if not 0 < w < w_limit(p):
        raise DomainError(f"w must lie in (0, (p-2)/(3p)) = (0, {w_limit(p)}), got {w}")
    v = K.solve_v(p, w)
    if math.isnan(v):
        raise LemmaViolation(
            f"F(., {w}) does not change sign on (-w, -w(p-1)/p) for p={p}")
    return _pair(p, v, w)


def d_of_w(p: float, w: float) -> float:
    return solve_v(p, w).d


def chord_coords(params: Parameters, tc, x, nscan: int = CHORD_SCAN_POINTS) -> ChordCoords:
    """The cup chord through a point of R4 and the position ``beta`` on it.

    The corner ``(0, 1)`` is a degenerate chord ``v = w = 0``; ``beta`` is
    reported as 1/2 there by convention.
    """
    x = as_point(x)
    if classify(params, tc, x) is not SubdomainLabel.R4:
        raise DomainError(f"({x.x1}, {x.x2}) is not in R4")
    p = params.p
    rm1 = x.x2 * math.exp(-x.x1) - 1.0
    if x.x1 == 0.0 and rm1 <= 0.0:
        return ChordCoords(CupPair(p=p, w=0.0, v=0.0, q=0.0, r=1.0, d=math.nan), 0.5)
    v, w, beta, changes = K.chord_search(p, tc.w_bar, x.x1, rm1, nscan)
    if changes == 0 or math.isnan(w):
        raise LemmaViolation(f"no cup chord passes through ({x.x1}, {x.x2})")
    if changes > 1:
        log.warning("chord residual changed sign %d times at (%r, %r)",
                    changes, x.x1, x.x2)
    return ChordCoords(_pair(p, v, w), beta)
