"""The verification suite: every checkable identity and inequality, with residuals."""

from __future__ import annotations

import json
import math
import platform
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _kernels as K
from .candidate import (bellman, bellman_many, bellman_x2, convexity_factor,
                        h1, h3, m1, m3, m_prime)
from .cup import big_f, bracket_lambda, chord_coords, solve_v, w_limit
from .errors import DomainError
from .geometry import Parameters, Point, SubdomainLabel, classify
from .optimizer import (PiecewiseTestFunction, a_infty_characteristic, build_optimizer,
                        chord_optimizer, log_piece, moments)
from .special import _cfg, omega, pow_exp_integral
from .transition import construct, thresholds, tr0_lhs, trolleybus_lhs

EPS = np.finfo(float).eps

CONVEXITY_SEGMENTS = 10_000
LOCAL_SEGMENTS = 2_000
BOUNDARY_POINTS = 100
OPTIMIZER_POINTS = 200
BOUNDARY_GRID = 601


@dataclass
class Entry:
    """One check.

    ``worst_residual`` is the largest error for identities; for inequalities
    it is the largest normalised ``lhs - rhs``, so it is negative when the
    inequality holds with room to spare.
    """

    name: str
    passed: bool
    worst_residual: float
    samples: int
    tolerance: float = 0.0


@dataclass
class VerificationReport:
    p: float
    C: float
    seed: int
    entries: list[Entry] = field(default_factory=list)
    versions: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def failures(self) -> list[Entry]:
        return [e for e in self.entries if not e.passed]

    def add(self, name, passed, worst, samples, tol=0.0):
        self.entries.append(Entry(name, bool(passed), float(worst), int(samples), float(tol)))

    def to_dict(self) -> dict:
        return {"p": self.p, "C": self.C, "seed": self.seed, "passed": self.passed,
                "versions": self.versions, "entries": [asdict(e) for e in self.entries]}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), default=_json_float, **kw)


def _json_float(x):
    return float(x)


def _versions():
    from . import __version__
    from ._jit import USING_NUMBA, numba
    return {"jnbellman": __version__, "numpy": np.__version__,
            "numba": numba.__version__ if numba is not None else None,
            "jit": USING_NUMBA, "python": platform.python_version()}


# ------------------------------------------------------------------ samplers


def tangent_point(params: Parameters, u: float, d: float) -> Point:
    """The point at offset ``d`` in ``x1`` along the tangent with foot ``u``."""
    return Point(u + d, math.exp(u) + params.k(u) * d)


def chord_point(v: float, w: float, beta: float) -> Point:
    return Point(beta * w + (1 - beta) * v, beta * math.exp(w) + (1 - beta) * math.exp(v))


def sample_subdomain(params, tc, label, n, rng, span=3.0):
    """``n`` points strictly inside one subdomain, deterministic given ``rng``."""
    xi, out = params.xi, []
    label = SubdomainLabel(label)
    while len(out) < n:
        if label is SubdomainLabel.R1:
            x = tangent_point(params, tc.w_bar + rng.uniform(0, span), xi * rng.uniform(0.01, 1))
        elif label is SubdomainLabel.R3:
            x = tangent_point(params, tc.v_bar - rng.uniform(0, span), xi * rng.uniform(0.01, 1))
        elif label is SubdomainLabel.R2:
            a = rng.dirichlet((1.0, 1.0, 1.0))
            pts = [(tc.w_bar + xi, math.exp(tc.w_bar) / params.eta),
                   (tc.w_bar, math.exp(tc.w_bar)), (tc.v_bar, math.exp(tc.v_bar))]
            x = Point(sum(a[i] * pts[i][0] for i in range(3)),
                      sum(a[i] * pts[i][1] for i in range(3)))
        else:
            w0 = tc.w_bar * rng.uniform(0.05, 0.95)
            x = chord_point(K.solve_v(params.p, w0), w0, rng.uniform(0.05, 0.95))
        if params.contains(x.x1, x.x2, 0.0) and classify(params, tc, x) is label:
            out.append(x)
    return out


def boundary_points(params, tc, which, n):
    """``n`` points on an internal boundary: ``"R1|R2"``, ``"R2|R3"`` or ``"R2|R4"``."""
    t = (np.arange(n) + 0.5) / n
    if which == "R1|R2":
        return [tangent_point(params, tc.w_bar, params.xi * s) for s in t]
    if which == "R2|R3":
        return [tangent_point(params, tc.v_bar, params.xi * s) for s in t]
    if which == "R2|R4":
        return [chord_point(tc.v_bar, tc.w_bar, s) for s in t]
    raise ValueError(which)


_BOUNDARY_LABELS = {"R1|R2": (1, 2), "R2|R3": (2, 3), "R2|R4": (2, 4)}


# ------------------------------------------------------------------ inequality grids


def _log_grid(lo, hi, n):
    return np.exp(np.linspace(math.log(lo), math.log(hi), n))


def _ratio(p, v, w):
    return (w ** (p - 1) + (-v) ** (p - 1)) / -math.expm1(v - w) * math.exp(-w)


def check_ratio_bounds(p, n=40):
    """The two upper bounds on ``(w^(p-1) + (-v)^(p-1))/(e^w - e^v)``."""
    lam = bracket_lambda(p)
    worst1 = worst2 = -math.inf
    cnt1 = cnt2 = 0
    for w in _log_grid(1e-4, 2.0, n):
        for th in np.linspace(lam, 1.0, n + 2)[1:-1]:
            v = -th * w
            rhs = (p - 1) * (-v) ** (p - 2) * math.exp(-v)
            worst1 = max(worst1, (_ratio(p, v, w) - rhs) / rhs)
            cnt1 += 1
    for w in _log_grid(1e-4, (p - 2) / (p - 1), n):
        rhs = (p - 1) * w ** (p - 2) * math.exp(-w)
        for th in np.linspace(0.0, 1.0, n + 2)[1:-1]:
            worst2 = max(worst2, (_ratio(p, -th * w, w) - rhs) / rhs)
            cnt2 += 1
    return (worst1, cnt1), (worst2, cnt2)


def check_cup_brackets(p, n=60):
    lam = bracket_lambda(p)
    worst = -math.inf
    for w in _log_grid(1e-4, w_limit(p) * (1 - 1e-9), n):
        scale = p * w ** (p + 2)
        worst = max(worst, -big_f(p, -w, w) / scale, big_f(p, -lam * w, w) / scale)
    return worst, n


def check_cup_pairs(p, n=60):
    """Bracket placement, ``|F|`` residual, D-form agreement, D bounds and monotonicity."""
    lam = bracket_lambda(p)
    res_f = res_d = 0.0
    bracket = bound_hi_v = bound_hi_w = bound_lo = -math.inf
    prev, mono = -math.inf, -math.inf
    grid = _log_grid(1e-4, w_limit(p) * (1 - 1e-6), n)
    for w in grid:
        pair = solve_v(p, w)
        v, d = pair.v, pair.d
        res_f = max(res_f, abs(big_f(p, v, w)) / (p * w ** p))
        forms = pair.d_forms()
        res_d = max(res_d, max(abs(f - d) for f in forms) / abs(d))
        bracket = max(bracket, (v + w) * -1 / w, (v + lam * w) / w)
        bound_hi_v = max(bound_hi_v, d / (p * (p - 1) * (-v) ** (p - 2) * math.exp(-v)) - 1)
        bound_hi_w = max(bound_hi_w, d / (p * (p - 1) * w ** (p - 2) * math.exp(-w)) - 1)
        bound_lo = max(bound_lo, 1 - d / (0.5 * p * math.exp(-w) * w ** (p - 2)))
        mono = max(mono, (prev - d) / d)
        prev = d
    return {"bracket": bracket, "F": res_f, "D forms": res_d, "D upper (v)": bound_hi_v,
            "D upper (w)": bound_hi_w, "D lower": bound_lo, "D increasing": mono}, n


def check_transition_brackets(params, tc, cfg=None, n=60):
    p, xi, eta = params.p, params.xi, params.eta
    d_star = solve_v(p, tc.w_star).d
    d_c2 = solve_v(p, tc.c2).d
    lo = min(1e-12, 1e-6 * tc.c1)
    out = {
        "tr0 positive near 0": -tr0_lhs(p, xi, lo, eta, cfg) / (lo ** (p - 2) * math.exp(-lo / xi)),
        "tr0 negative at c1": tr0_lhs(p, xi, tc.c1, eta, cfg) / (tc.c1 ** (p - 2) * math.exp(-tc.c1 / xi)),
        "trolleybus above D at w_*": (d_star - trolleybus_lhs(p, xi, tc.w_star, eta, cfg)) / d_star,
        "trolleybus below D at c2": (trolleybus_lhs(p, xi, tc.c2, eta, cfg) - d_c2) / d_c2,
        "D(c2) lower bound": 1 - d_c2 / (0.5 * p * math.exp(-tc.c2) * tc.c2 ** (p - 2)),
    }
    ws = np.linspace(tc.w_star, tc.c2, n)
    vals = [trolleybus_lhs(p, xi, w, eta, cfg) for w in ws]
    out["trolleybus decreasing on [w_*, c2]"] = max(
        (vals[i + 1] - vals[i]) / vals[i] for i in range(n - 1))
    return out, n


# ------------------------------------------------------------------ candidate checks


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def _rounding_floor(params, tc, x, b):
    # |db| caused by one ulp in the inputs, for branches whose value is tiny
    return 64 * EPS * (abs(tc.d_bar) * abs(x.x2) + abs(tc.q_bar - tc.r_bar * tc.d_bar) * abs(x.x1)
                       + abs(b))


def _chord_sides(params, tc, x1):
    """R2 and R4 values and ``b_x2`` at the point of the chord YZ above ``x1``.

    The point is represented as ``x2 = e^{x1}(1 + rho)`` with ``rho`` exact,
    so the check does not depend on how well ``x2`` resolves the chord.
    """
    p = params.p
    rho = K.chord_gap(tc.v_bar, tc.w_bar, x1)
    b2 = tc.q_bar * (x1 - tc.w_bar) + tc.w_bar ** p
    v, w, _, _ = K.chord_search(p, tc.w_bar, x1, rho, 1024)
    q, _, d = K.cup_slopes(p, v, w)
    b4 = q * (x1 - w) + w ** p
    return (b2, b4), (tc.r2_slope, d)


def check_boundary_continuity(params, tc, which, cfg=None, n=BOUNDARY_POINTS):
    """``max |b_left - b_right| / (1e-8 |b| + rounding floor)``: passes when <= 1."""
    la, lb = _BOUNDARY_LABELS[which]
    worst_rel = worst_ratio = 0.0
    for x in boundary_points(params, tc, which, n):
        if which == "R2|R4":
            (va, vb), _ = _chord_sides(params, tc, x.x1)
            floor = 64 * EPS * abs(va)
        else:
            va = bellman(params, tc, x, cfg, label=la).value
            vb = bellman(params, tc, x, cfg, label=lb).value
            floor = _rounding_floor(params, tc, x, va)
        diff = abs(va - vb)
        worst_rel = max(worst_rel, diff / max(abs(va), 1e-300))
        worst_ratio = max(worst_ratio, diff / (1e-8 * abs(va) + floor))
    return worst_rel, worst_ratio, n


def check_c1_matching(params, tc, which, cfg=None, n=BOUNDARY_POINTS):
    la, lb = _BOUNDARY_LABELS[which]
    worst = 0.0
    for x in boundary_points(params, tc, which, n):
        if which == "R2|R4":
            _, sides = _chord_sides(params, tc, x.x1)
        else:
            sides = [bellman_x2(params, tc, x, cfg, label=lab) for lab in (la, lb)]
        worst = max(worst, *(abs(s - tc.d_bar) for s in sides))
    return worst, 2 * n


def _segment_ok(params, x, y, k=9):
    for s in np.linspace(0.0, 1.0, k):
        z1 = (1 - s) * x[0] + s * y[0]
        z2 = (1 - s) * x[1] + s * y[1]
        if not params.contains(z1, z2, 0.0):
            return False
    return True


def random_segments(params, tc, n_global, n_local, rng):
    """Endpoint arrays of segments inside ``Omega_C``.

    Global segments join two points with ``x1`` uniform in a window covering
    every subdomain and ``log(x2 e^{-x1})`` uniform in ``[0, log C]``; local
    segments are short and centred in the transition region.
    """
    half = tc.w_bar + params.xi + 3.0
    logc = math.log(params.C)
    xs, ys = [], []

    def draw(x1):
        return (x1, math.exp(x1 + rng.uniform(0.0, logc)))

    while len(xs) < n_global:
        x, y = draw(rng.uniform(-half, half)), draw(rng.uniform(-half, half))
        if _segment_ok(params, x, y):
            xs.append(x)
            ys.append(y)
    lo, hi = tc.v_bar - params.xi, tc.w_bar + 2 * params.xi
    scales = (tc.w_bar, params.xi)
    got = 0
    while got < n_local:
        c1 = rng.uniform(lo, hi)
        # bias the centre towards Gamma_1, where R2 and R4 sit
        c = (c1, math.exp(c1) * (1 + (params.C - 1) * rng.uniform() ** 4))
        length = scales[got % 2] * math.exp(rng.uniform(-6, 0))
        ang = rng.uniform(0, math.pi)
        dx, dy = length * math.cos(ang), length * math.sin(ang) * math.exp(c1)
        x, y = (c[0] - dx, c[1] - dy), (c[0] + dx, c[1] + dy)
        if _segment_ok(params, x, y):
            xs.append(x)
            ys.append(y)
            got += 1
    return np.array(xs), np.array(ys)


def check_convexity(params, tc, rng, cfg=None, n_global=CONVEXITY_SEGMENTS, n_local=LOCAL_SEGMENTS):
    """Worst ``b(mid) - (b(x) + b(y))/2`` over random segments."""
    xs, ys = random_segments(params, tc, n_global, n_local, rng)
    mid = 0.5 * (xs + ys)
    bx, _ = bellman_many(params, tc, xs[:, 0], xs[:, 1], cfg)
    by, _ = bellman_many(params, tc, ys[:, 0], ys[:, 1], cfg)
    bm, _ = bellman_many(params, tc, mid[:, 0], mid[:, 1], cfg)
    return float(np.max(bm - 0.5 * (bx + by))), len(xs)


def check_h_positivity(params, tc, cfg=None, n=60):
    """Smallest relative value of ``H1`` on ``[w_bar, w_bar + 10]`` and ``H3`` on ``[v_bar - 10, v_bar]``."""
    p, xi = params.p, params.xi
    w1 = w3 = math.inf
    for s in np.linspace(0.0, 10.0, n):
        u = tc.w_bar + s
        w1 = min(w1, h1(params, tc, u, cfg) / (xi * u ** (p - 2)))
        u = tc.v_bar - s
        w3 = min(w3, h3(params, tc, u, cfg) / (xi * (-u) ** (p - 2)))
    return w1, w3, n


def check_ode(params, tc, cfg=None):
    """Central-difference residual of ``xi m' = m - p u|u|^(p-2)`` for ``m1`` and ``m3``."""
    out = 0.0
    pts = [(z, lambda s: m1(params, s, cfg)) for z in (0.5, 1.0, 2.0)]
    pts.append((tc.v_bar - 0.3, lambda s: m3(params, tc, s, cfg)))
    for z, fn in pts:
        h = 1e-4
        deriv = (fn(z + h) - fn(z - h)) / (2 * h)
        out = max(out, abs(params.xi * deriv - params.xi * m_prime(params, fn(z), z)))
    return out, len(pts)


def _r4_gradient(params, tc, x1, rho):
    # (b_x1, b_x2) in R4 at x2 = e^{x1} (1 + rho); rho is kept exact so the
    # chord is well determined even when R4 is thinner than an ulp of x2
    v, w, _, _ = K.chord_search(params.p, tc.w_bar, x1, rho, 1024)
    q, r, d = K.cup_slopes(params.p, v, w)
    return np.array([q - r * d, d])


def r4_samples(params, tc, n, rng):
    """Interior points of R4 as ``(x1, rho)`` with ``x2 = e^{x1}(1 + rho)``."""
    out = []
    for _ in range(n):
        w0 = tc.w_bar * rng.uniform(0.05, 0.95)
        v0 = K.solve_v(params.p, w0)
        beta = rng.uniform(0.05, 0.95)
        x1 = beta * w0 + (1 - beta) * v0
        out.append((x1, K.chord_gap(v0, w0, x1)))
    return out


def check_monge_ampere(params, tc, rng, n=40):
    """Degenerate Hessian in R4 from central differences of the analytic gradient.

    Differences are taken in ``(x1, rho)`` with steps of ``1e-4`` times the
    distance to the edges of R4, then mapped to ``(x1, x2)`` by the chain rule.
    Returns ``(worst |det| / (1 + |b11 b22|), worst -b22)``.
    """
    worst_det = worst_b22 = -math.inf
    for x1, rho in r4_samples(params, tc, n, rng):
        top = K.chord_gap(tc.v_bar, tc.w_bar, x1)
        h1 = 1e-4 * min(x1 - tc.v_bar, tc.w_bar - x1)
        hr = 1e-4 * min(rho, top - rho)
        g_x1 = (_r4_gradient(params, tc, x1 + h1, rho) - _r4_gradient(params, tc, x1 - h1, rho)) / (2 * h1)
        g_rho = (_r4_gradient(params, tc, x1, rho + hr) - _r4_gradient(params, tc, x1, rho - hr)) / (2 * hr)
        # rho = x2 e^{-x1} - 1: d/dx2 = e^{-x1} d/drho, d/dx1|x2 = d/dx1|rho - (1 + rho) d/drho
        d_x2 = math.exp(-x1) * g_rho
        d_x1 = g_x1 - (1 + rho) * g_rho
        b11, b22 = d_x1[0], d_x2[1]
        b12 = 0.5 * (d_x2[0] + d_x1[1])
        det = b11 * b22 - b12 * b12
        worst_det = max(worst_det, abs(det) / (1 + abs(b11 * b22)))
        worst_b22 = max(worst_b22, -b22)
    return worst_det, worst_b22, n


def check_r2_weights(params, tc, rng, n=100):
    worst = 0.0
    for x in sample_subdomain(params, tc, SubdomainLabel.R2, n, rng):
        a = bellman(params, tc, x).alphas
        worst = max(worst, -min(a), abs(sum(a) - 1))
    return worst, n


def check_chord_roundtrip(params, tc):
    """Relative error in ``(v, w)`` recovered from the midpoint of a known chord.

    Also returns the error expected from rounding the midpoint to floats:
    ``x2`` carries the chord height ``rho`` only to about ``eps / rho``.
    """
    w0 = tc.w_bar / 2
    v0 = K.solve_v(params.p, w0)
    x = chord_point(v0, w0, 0.5)
    cc = chord_coords(params, tc, x)
    rho = K.chord_gap(v0, w0, x.x1)
    err = max(abs(cc.pair.w - w0), abs(cc.pair.v - v0)) / w0
    return err, 16 * EPS / rho


def optimizer_points(params, tc, rng, n=OPTIMIZER_POINTS):
    per = n // 4
    pts = []
    for lab in SubdomainLabel:
        pts += sample_subdomain(params, tc, lab, per if lab != SubdomainLabel.R4 else n - 3 * per, rng)
    return pts


def check_optimizers(params, tc, rng, cfg=None, n=OPTIMIZER_POINTS):
    """Worst mean error, relative exp-mean error, optimality residual, ``A_inf/C - 1``, junction jump."""
    worst = dict(mean=0.0, exp_mean=0.0, optimality=0.0, a_infty=-math.inf, junction=0.0)
    for x in optimizer_points(params, tc, rng, n):
        phi = build_optimizer(params, tc, x)
        mo = moments(phi, params.p, cfg)
        b = bellman(params, tc, x, cfg).value
        worst["mean"] = max(worst["mean"], abs(mo.mean - x.x1))
        worst["exp_mean"] = max(worst["exp_mean"], abs(mo.exp_mean - x.x2) / x.x2)
        worst["optimality"] = max(worst["optimality"], abs(mo.p_mean - b) / max(1.0, b))
        worst["a_infty"] = max(worst["a_infty"], a_infty_characteristic(phi) / params.C - 1)
        worst["junction"] = max(worst["junction"], continuous_junction_jump(phi))
    return worst, n


def continuous_junction_jump(phi: PiecewiseTestFunction) -> float:
    """Largest jump at junctions that touch a logarithmic piece.

    Junctions between two constants (the step parts of the chord and affine
    optimizers) are jumps by design and are skipped.
    """
    worst = 0.0
    for i in range(len(phi) - 1):
        if phi.pieces[i].kind or phi.pieces[i + 1].kind:
            worst = max(worst, abs(phi.value_limits(i)[1] - phi.value_limits(i + 1)[0]))
    return worst


def check_optimizer_boundaries(params, tc, n=20):
    """Both constructions on each shared boundary agree almost everywhere.

    Measured as the mean of ``|phi_a - phi_b|`` on a fine midpoint grid of
    ``t``: two step functions whose breakpoints differ by a rounding error
    then differ only on a set of that size.
    """
    t = (np.arange(20000) + 0.5) / 20000
    worst = 0.0
    for which, (la, lb) in _BOUNDARY_LABELS.items():
        for x in boundary_points(params, tc, which, n):
            fa = build_optimizer(params, tc, x, label=la)(t)
            if which == "R2|R4":
                rho = K.chord_gap(tc.v_bar, tc.w_bar, x.x1)
                fb = chord_optimizer(params, tc, x.x1, rho)(t)
            else:
                fb = build_optimizer(params, tc, x, label=lb)(t)
            worst = max(worst, float(np.mean(np.abs(fa - fb))))
    return worst, 3 * n


# ------------------------------------------------------------------ phi_0 and the limit


def log_function(eps: float) -> PiecewiseTestFunction:
    """``eps * log(1/t)`` on ``(0, 1)``."""
    return PiecewiseTestFunction([log_piece(0.0, 1.0, 0.0, 1.0)], eps)


def check_a_infty_log(eps_grid=(0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)):
    """Characteristic of ``e^{eps log(1/t)}``: increasing in ``eps`` and blowing up at 1."""
    vals = [a_infty_characteristic(log_function(e)) for e in eps_grid]
    exact = [math.exp(-e) / (1 - e) for e in eps_grid]
    mono = max(vals[i] - vals[i + 1] for i in range(len(vals) - 1))
    err = max(_rel(a, b) for a, b in zip(vals, exact))
    blow = a_infty_characteristic(log_function(0.99)) / a_infty_characteristic(log_function(0.9))
    return mono, err, blow


def oscillation_log(p: float, c: float, cfg=None) -> float:
    """``<|phi_0 - <phi_0>_J|^p>_J^(1/p)`` for ``phi_0 = log(1/t)`` on ``J = (c, 1)``."""
    if c == 0.0:
        m, top, length = 1.0, math.inf, 1.0
    else:
        top = -math.log(c)
        length = -math.expm1(math.log(c))
        m = (length + c * math.log(c)) / length
    val = pow_exp_integral(-m, 1.0, p, 0.0, top, cfg=cfg)
    return (val / length) ** (1.0 / p)


def bmo_norm_log(p: float, cfg=None, grid: int = 200, iters: int = 60) -> float:
    """``BMO^p`` norm of ``log(1/t)`` on ``(0, 1)``.

    By scaling only the ratio of the interval ends matters, so the search is
    over ``J = (c, 1)``: a log-spaced grid of ``c`` (and ``c = 0``), refined
    by golden section around the best node.
    """
    if not p >= 1:
        raise DomainError(f"need p >= 1, got {p}")
    cs = np.concatenate([[0.0], np.logspace(-16, math.log10(0.999), grid)])
    vals = [oscillation_log(p, c, cfg) for c in cs]
    i = int(np.argmax(vals))
    best = vals[i]
    if i > 0:
        lo = math.log(cs[max(i - 1, 1)])
        hi = math.log(cs[min(i + 1, len(cs) - 1)])
        gr = (math.sqrt(5) - 1) / 2
        for _ in range(iters):
            a = hi - gr * (hi - lo)
            b = lo + gr * (hi - lo)
            fa, fb = oscillation_log(p, math.exp(a), cfg), oscillation_log(p, math.exp(b), cfg)
            best = max(best, fa, fb)
            if fa >= fb:
                hi = b
            else:
                lo = a
    return best


def dist_lower_bound(p: float, eps_plus: float, eps_minus: float) -> float:
    """``eps_0(p) / min(eps_plus, eps_minus)``; pass ``math.inf`` for an unbounded side."""
    if not p > 2:
        raise DomainError(f"need p > 2, got {p}")
    if not (eps_plus > 0 and eps_minus > 0):
        raise DomainError("both thresholds must be positive (math.inf for unbounded)")
    return omega(p) / min(eps_plus, eps_minus)


def limit_scan(p: float, Cs, cfg=None):
    """``[(C, b(0, C), omega(p)^p - b(0, C)), ...]``."""
    target = omega(p, cfg) ** p
    out = []
    for C in Cs:
        params, tc = construct(p, C, cfg)
        b = bellman(params, tc, (0.0, params.C), cfg).value
        out.append((params.C, b, target - b))
    return out


# ------------------------------------------------------------------ the suite


def run_suite(p: float, C: float, seed: int = 1, cfg=None, *,
              convexity_segments: int = CONVEXITY_SEGMENTS) -> VerificationReport:
    """Run every check for ``(p, C)``; failures are recorded, never raised."""
    cfg = _cfg(cfg)
    params, tc = construct(p, C, cfg)
    rng = np.random.default_rng(seed)
    rep = VerificationReport(p=float(p), C=float(C), seed=int(seed), versions=_versions())

    (r1, n1), (r2, n2) = check_ratio_bounds(p)
    rep.add("ratio bound by (p-1)(-v)^(p-2)e^(-v)", r1 < 0, r1, n1)
    rep.add("ratio bound by (p-1)w^(p-2)e^(-w)", r2 < 0, r2, n2)
    worst, n = check_cup_brackets(p)
    rep.add("F(-w,w) > 0 > F(-lambda w,w)", worst < 0, worst, n)
    cup, n = check_cup_pairs(p)
    rep.add("cup root inside (-w, -lambda w)", cup["bracket"] < 0, cup["bracket"], n)
    rep.add("cup residual |F|", cup["F"] < 1e-11, cup["F"], n, 1e-11)
    rep.add("three forms of D agree", cup["D forms"] < 1e-9, cup["D forms"], n, 1e-9)
    for key in ("D upper (v)", "D upper (w)", "D lower"):
        rep.add(f"{key} bound", cup[key] < 0, cup[key], n)
    rep.add("D increasing", cup["D increasing"] < 0, cup["D increasing"], n)

    for name, (ok, margin) in tc.invariant_checks(cfg).items():
        rep.add(f"transition: {name}", ok, margin if "residual" in name else -margin, 1)
    signs, n = check_transition_brackets(params, tc, cfg)
    for name, val in signs.items():
        rep.add(f"transition: {name}", val < 0, val, n if "decreasing" in name else 1)

    s = np.linspace(-3.0, 3.0, BOUNDARY_GRID)
    vals, _ = bellman_many(params, tc, s, np.exp(s), cfg)
    err = float(np.max(np.abs(vals - np.abs(s) ** p)))
    rep.add("b(s, e^s) = |s|^p", err < 1e-9, err, len(s), 1e-9)
    b01 = bellman(params, tc, (0.0, 1.0), cfg).value
    rep.add("b(0, 1) = 0", b01 == 0.0, abs(b01), 1)
    b0c = bellman(params, tc, (0.0, params.C), cfg).value
    ref = m3(params, tc, -params.xi, cfg) * params.xi + params.xi ** p
    rep.add("b(0, C) = m3(-xi) xi + xi^p", _rel(b0c, ref) < 1e-12, _rel(b0c, ref), 1, 1e-12)

    ode, n = check_ode(params, tc, cfg)
    rep.add("coefficient ODE residual", ode < 1e-6, ode, n, 1e-6)

    for which in _BOUNDARY_LABELS:
        rel, ratio, n = check_boundary_continuity(params, tc, which, cfg)
        rep.add(f"continuity across {which}", ratio <= 1.0, rel, n, 1e-8)
        c1, n = check_c1_matching(params, tc, which, cfg)
        rep.add(f"b_x2 = D(w_bar) on {which}", c1 < 1e-7, c1, n, 1e-7)

    worst, n = check_convexity(params, tc, rng, cfg, convexity_segments,
                               LOCAL_SEGMENTS * convexity_segments // CONVEXITY_SEGMENTS)
    rep.add("midpoint convexity", worst <= 1e-8, worst, n, 1e-8)
    w1, w3, n = check_h_positivity(params, tc, cfg)
    rep.add("H1 > 0 for u >= w_bar", w1 > 0, -w1, n)
    rep.add("H3 > 0 for u <= v_bar", w3 > 0, -w3, n)
    cf = convexity_factor(params, tc, tc.w_bar, cfg)
    rep.add("m1' - m1'' > 0 at w_bar", cf > 0, -cf, 1)
    det, b22, n = check_monge_ampere(params, tc, rng)
    rep.add("R4 degenerate Hessian", det <= 1e-4, det, n, 1e-4)
    rep.add("R4 b_x2x2 >= 0", b22 <= 1e-8, b22, n, 1e-8)
    worst, n = check_r2_weights(params, tc, rng)
    rep.add("R2 barycentric weights", worst <= 1e-10, worst, n, 1e-10)
    rt, floor = check_chord_roundtrip(params, tc)
    rep.add("chord round trip", rt < 1e-9 + floor, rt, 1, 1e-9 + floor)

    opt, n = check_optimizers(params, tc, rng, cfg)
    rep.add("optimizer mean = x1", opt["mean"] < 1e-8, opt["mean"], n, 1e-8)
    rep.add("optimizer exp-mean = x2", opt["exp_mean"] < 1e-8, opt["exp_mean"], n, 1e-8)
    rep.add("optimizer attains b", opt["optimality"] < 1e-6, opt["optimality"], n, 1e-6)
    rep.add("optimizer A_inf <= C", opt["a_infty"] <= 1e-6, opt["a_infty"], n, 1e-6)
    rep.add("optimizer continuous at log junctions", opt["junction"] < 1e-9, opt["junction"], n, 1e-9)
    worst, n = check_optimizer_boundaries(params, tc)
    rep.add("optimizers agree on shared boundaries", worst < 1e-9, worst, n, 1e-9)

    mono, err, blow = check_a_infty_log()
    rep.add("A_inf of e^(eps log(1/t)) increasing", mono < 0, mono, 9)
    rep.add("A_inf of e^(eps log(1/t)) closed form", err < 1e-9, err, 9, 1e-9)
    rep.add("A_inf of e^(eps log(1/t)) blows up", blow > 2, 2 - blow, 2)
    norm, om = bmo_norm_log(p, cfg), omega(p, cfg)
    rep.add("BMO^p norm of log(1/t) = omega(p)", _rel(norm, om) < 1e-6, _rel(norm, om), 1, 1e-6)
    gap = om ** p - b0c
    rep.add("b(0, C) below omega(p)^p", gap > 0, -gap / om ** p, 1)
    return rep
