"""Gamma-type integrals used by the Bellman construction.

All integrals are reduced to ``int pow_k(z + xi r) e^{-r} dr`` and handed to
the adaptive Gauss-Kronrod kernel in :mod:`jnbellman._kernels`.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

from . import _kernels as K
from .errors import DomainError


def _env_abs_tol() -> float:
    raw = os.environ.get("JNB_QUAD_TOL")
    if raw is None or raw.strip() == "":
        return 1e-12
    return float(raw)


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances for every adaptive integral.

    ``abs_tol`` defaults to ``1e-12`` and may be overridden with the
    ``JNB_QUAD_TOL`` environment variable.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    max_depth: int = 50

    def __post_init__(self):
        if not self.abs_tol > 0 or not self.rel_tol > 0:
            raise DomainError("quadrature tolerances must be positive")
        if self.max_depth < 10:
            raise DomainError("max_depth must be at least 10")

    @classmethod
    def from_env(cls) -> "QuadratureConfig":
        return cls(abs_tol=_env_abs_tol())

    def args(self):
        return self.abs_tol, self.rel_tol, self.max_depth


DEFAULT_CONFIG = QuadratureConfig.from_env()


def _cfg(cfg):
    return DEFAULT_CONFIG if cfg is None else cfg


def pow_exp_integral(z, xi, k, a, b, *, signed=False, cfg=None):
    """``int_a^b pow_k(z + xi r) e^{-r} dr``; ``b`` may be ``math.inf``.

    ``pow_k(s)`` is ``|s|**k``, or ``sign(s) |s|**k`` when ``signed``.
    """
    value, _ = K.pow_exp_integral(float(z), float(xi), float(k), bool(signed),
                                  float(a), float(b), *_cfg(cfg).args())
    return value


def gamma_fn(p: float) -> float:
    """Gamma function for ``p > 0``."""
    if not p > 0:
        raise DomainError(f"gamma_fn needs p > 0, got {p}")
    return math.gamma(p)


def _check_tail_args(p, xi):
    if not p > 2:
        raise DomainError(f"need p > 2, got {p}")
    if not 0 < xi <= 1:
        raise DomainError(f"need xi in (0, 1], got {xi}")


def tail_integral(p: float, xi: float, w: float, cfg=None) -> float:
    """``int_w^inf s^(p-2) exp(-s/xi) ds`` for ``w >= 0``."""
    _check_tail_args(p, xi)
    if not w >= 0:
        raise DomainError(f"need w >= 0, got {w}")
    scaled = K.tail_scaled(p, xi, w, *_cfg(cfg).args())
    return xi * math.exp(-w / xi) * scaled


def signed_tail(p: float, xi: float, z: float, cfg=None) -> float:
    """``int_z^inf s|s|^(p-2) exp(-s/xi) ds``, split at 0 when ``z < 0``."""
    _check_tail_args(p, xi)
    scaled = pow_exp_integral(z, xi, p - 1.0, 0.0, math.inf, signed=True, cfg=cfg)
    return xi * math.exp(-z / xi) * scaled


def exp_moment_unit(p: float, cfg=None) -> float:
    """``int_0^1 t^(p-1) e^t dt``, via ``t = 1 - r``."""
    return math.e * pow_exp_integral(1.0, -1.0, p - 1.0, 0.0, 1.0, cfg=cfg)


def omega(p: float, cfg=None) -> float:
    """The John-Nirenberg constant ``[(p/e)(Gamma(p) - int_0^1 t^(p-1) e^t dt) + 1]^(1/p)``."""
    if not p >= 1:
        raise DomainError(f"omega needs p >= 1, got {p}")
    bracket = p / math.e * (math.gamma(p) - exp_moment_unit(p, cfg)) + 1.0
    return bracket ** (1.0 / p)
