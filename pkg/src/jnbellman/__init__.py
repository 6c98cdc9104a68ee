"""Numerical Bellman-function construction for the John-Nirenberg constant of BMO^p."""

from ._jit import USING_NUMBA
from .candidate import BellmanValue, bellman, bellman_many, bellman_x2, m1, m3
from .cup import ChordCoords, CupPair, big_f, chord_coords, d_of_w, solve_v
from .errors import DomainError, LemmaViolation
from .geometry import Parameters, Point, SubdomainLabel, classify, solve_xi, tangent_u
from .optimizer import (Moments, Piece, PiecewiseTestFunction, a_infty_characteristic,
                        build_optimizer, moments, optimality_check)
from .special import (QuadratureConfig, exp_moment_unit, gamma_fn, omega, signed_tail,
                      tail_integral)
from .transition import TransitionConstants, bracket_c, construct, solve_transition, thresholds

__version__ = "0.1.0"


def eps0(p: float) -> float:
    """The John-Nirenberg constant of ``BMO^p``; equal to :func:`omega`."""
    return omega(p)


def __getattr__(name):
    # the verification layer imports the rest of the package; load it lazily
    if name in ("VerificationReport", "run_suite", "limit_scan", "bmo_norm_log",
                "dist_lower_bound"):
        from . import verification
        return getattr(verification, name)
    raise AttributeError(name)


__all__ = [
    "USING_NUMBA", "BellmanValue", "bellman", "bellman_many", "bellman_x2", "m1", "m3",
    "ChordCoords", "CupPair", "big_f", "chord_coords", "d_of_w", "solve_v",
    "DomainError", "LemmaViolation", "Parameters", "Point", "SubdomainLabel", "classify",
    "solve_xi", "tangent_u", "Moments", "Piece", "PiecewiseTestFunction",
    "a_infty_characteristic", "build_optimizer", "moments", "optimality_check",
    "QuadratureConfig", "exp_moment_unit", "gamma_fn", "omega", "signed_tail",
    "tail_integral", "TransitionConstants", "bracket_c", "construct", "solve_transition",
    "thresholds", "eps0", "VerificationReport", "run_suite", "limit_scan", "bmo_norm_log",
    "dist_lower_bound",
]
