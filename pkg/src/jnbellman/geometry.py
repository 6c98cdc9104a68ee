"""The domain Omega_C, the tangency gap xi(C), and the tangent coordinate u."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .errors import DomainError

BOUNDARY_SLACK = 1e-12


class SubdomainLabel(enum.IntEnum):
    R1 = K.LABEL_R1
    R2 = K.LABEL_R2
    R3 = K.LABEL_R3
    R4 = K.LABEL_R4


def solve_eta(C: float) -> float:
    """``1 - xi(C)``: the root of ``C*eta = exp(eta - 1)`` in ``(0, 1]``.

    Working with ``eta`` keeps full relative precision when ``xi`` is close
    to 1, which is the regime of interest.
    """
    if not C >= 1:
        raise DomainError(f"C must be >= 1, got {C}")
    if C == 1:
        return 1.0
    prm = np.array([float(C)])
    eta = K.bisect(K.RES_XI, prm, 0.0, 1.0, 0.0, 200)
    # two safeguarded Newton polishes
    for _ in range(2):
        g = C * eta - math.exp(eta - 1.0)
        dg = C - math.exp(eta - 1.0)
        if dg > 0:
            nxt = eta - g / dg
            if 0.0 < nxt <= 1.0:
                eta = nxt
    return eta


def solve_xi(C: float) -> float:
    """The unique ``xi`` in ``[0, 1)`` with ``exp(-xi) = C (1 - xi)``."""
    return 1.0 - solve_eta(C)


@dataclass(frozen=True)
class Parameters:
    """The pair ``(p, C)`` with the derived gap ``xi`` (and ``eta = 1 - xi``)."""

    p: float
    C: float
    xi: float = field(init=False)
    eta: float = field(init=False)

    def __post_init__(self):
        if not self.C >= 1:
            raise DomainError(f"C must be >= 1, got {self.C}")
        if not self.p > 2:
            raise DomainError(f"p must exceed 2, got {self.p}")
        eta = solve_eta(self.C)
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "xi", 1.0 - eta)

    def k(self, z: float) -> float:
        """Slope of the tangent with foot ``(z, e^z)``."""
        return math.exp(z) / self.eta

    def contains(self, x1: float, x2: float, slack: float = BOUNDARY_SLACK) -> bool:
        lo = math.exp(x1)
        return lo * (1 - slack) <= x2 <= self.C * lo * (1 + slack)

    def require(self, x: "Point") -> None:
        if not self.contains(x.x1, x.x2):
            raise DomainError(
                f"point ({x.x1!r}, {x.x2!r}) is outside Omega_C: need "
                f"exp(x1) <= x2 <= C exp(x1) with C={self.C!r}")


@dataclass(frozen=True)
class Point:
    x1: float
    x2: float

    @classmethod
    def on_curve(cls, s: float, R: float = 1.0) -> "Point":
        """The point of ``Gamma_R`` above ``x1 = s``."""
        return cls(s, R * math.exp(s))


def as_point(x) -> Point:
    if isinstance(x, Point):
        return x
    x1, x2 = x
    return Point(float(x1), float(x2))


def tangent_u(params: Parameters, x) -> float:
    """The foot ``u`` of the right tangent to ``Gamma_C`` through ``x``.

    ``u`` lies in ``[x1 - xi, x1]``; the tangency point is
    ``(u + xi, C e^{u + xi})``.
    """
    x = as_point(x)
    params.require(x)
    u, _ = K.tangent_offset(params.xi, params.C, x.x1, x.x2)
    return u


def classify(params: Parameters, tc, x) -> SubdomainLabel:
    """Subdomain containing ``x``.

    R4 if ``x`` is on or below the closing chord; otherwise by the tangent
    foot ``u``: R1 for ``u >= w_bar``, R3 for ``u <= v_bar``, R2 in between.
    """
    x = as_point(x)
    params.require(x)
    label, _, _ = K.classify_kernel(params.p, params.xi, params.eta, params.C,
                                    tc.packed, x.x1, x.x2)
    return SubdomainLabel(label)
