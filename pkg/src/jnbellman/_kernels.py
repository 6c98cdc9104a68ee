"""Scalar numeric kernels.

Everything here is compiled with numba unless ``JNB_DISABLE_NUMBA`` is set,
in which case the same code runs as ordinary Python. Kernels take and return
plain floats/ints/arrays so both paths behave identically.

The quadrature family used throughout is

    I(z, xi, k; a, b) = int_a^b  pow_k(z + xi*r) * exp(-r) dr

with ``pow_k(s) = |s|**k`` or ``sign(s)*|s|**k``. Every integral in the
construction reduces to this form after the substitution ``s = z + xi*r``.
"""

import math

import numpy as np

from ._jit import njit

EPS = 2.220446049250313e-16

# Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15 layout).
XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

MAX_INTERVALS = 4000

# Layout of the packed transition-constant vector handed to kernels.
TC_XI0 = 0
TC_C0 = 1
TC_C1 = 2
TC_C2 = 3
TC_WSTAR = 4
TC_WBAR = 5
TC_VBAR = 6
TC_DBAR = 7
TC_QBAR = 8
TC_RBAR = 9
TC_M1W = 10
TC_K3 = 11
TC_SLOPE = 12
TC_SIZE = 13

LABEL_R1 = 1
LABEL_R2 = 2
LABEL_R3 = 3
LABEL_R4 = 4


# ---------------------------------------------------------------- series


@njit
def expm1mx(y):
    """``exp(y) - 1 - y`` without cancellation."""
    if abs(y) < 0.5:
        term = 0.5 * y * y
        total = term
        n = 2
        while abs(term) > 1e-18 * abs(total):
            n += 1
            term *= y / n
            total += term
            if n > 60:
                break
        return total
    return math.expm1(y) - y


@njit
def psi_tangent(eps):
    """``1 - exp(eps)*(1 - eps)``, the gap function of the tangent family."""
    if abs(eps) < 0.5:
        # sum_{n>=2} (n-1) eps^n / n!
        fact_term = eps * eps / 2.0  # eps^n / n!
        total = fact_term
        n = 2
        while True:
            n += 1
            fact_term *= eps / n
            inc = (n - 1) * fact_term
            total += inc
            if abs(inc) <= 1e-18 * abs(total) or n > 60:
                break
        return total
    return 1.0 - math.exp(eps) * (1.0 - eps)


@njit
def pow_diff(w, a, p):
    """``w**p - a**p`` for positive ``w`` and ``a``, accurate when ``a ~ w``."""
    return -(w ** p) * math.expm1(p * math.log1p((a - w) / w))


# ------------------------------------------------------------ quadrature


@njit
def _integrand(r, z, xi, k, signed):
    s = z + xi * r
    if s == 0.0:
        return 0.0
    val = abs(s) ** k * math.exp(-r)
    if signed and s < 0.0:
        return -val
    return val


@njit
def _qk15(z, xi, k, signed, a, b):
    centr = 0.5 * (a + b)
    hlgth = 0.5 * (b - a)
    dhlgth = abs(hlgth)
    fc = _integrand(centr, z, xi, k, signed)
    resg = fc * WG[3]
    resk = fc * WGK[7]
    resabs = abs(resk)
    fv1 = np.empty(7)
    fv2 = np.empty(7)
    for j in range(7):
        absc = hlgth * XGK[j]
        f1 = _integrand(centr - absc, z, xi, k, signed)
        f2 = _integrand(centr + absc, z, xi, k, signed)
        fv1[j] = f1
        fv2[j] = f2
        resk += WGK[j] * (f1 + f2)
        resabs += WGK[j] * (abs(f1) + abs(f2))
        if j % 2 == 1:
            resg += WG[j // 2] * (f1 + f2)
    reskh = resk * 0.5
    resasc = WGK[7] * abs(fc - reskh)
    for j in range(7):
        resasc += WGK[j] * (abs(fv1[j] - reskh) + abs(fv2[j] - reskh))
    result = resk * hlgth
    resabs *= dhlgth
    resasc *= dhlgth
    abserr = abs((resk - resg) * hlgth)
    if resasc != 0.0 and abserr != 0.0:
        abserr = resasc * min(1.0, (200.0 * abserr / resasc) ** 1.5)
    if resabs > 2.2250738585072014e-308 / (50.0 * EPS):
        abserr = max(EPS * 50.0 * resabs, abserr)
    return result, abserr


@njit
def _truncation_point(z, xi, k, signed, a, abs_tol):
    # The integrand is |z + xi r|^k e^{-r}; past its peak it decays monotonically.
    start = a
    if xi > 0.0:
        peak = (k * xi - z) / xi
        if peak > start:
            start = peak
        root = -z / xi
        if root > start:
            start = root
    fscale = max(1.0, abs(_integrand(a, z, xi, k, signed)),
                 abs(_integrand(start, z, xi, k, signed)))
    target = 1e-3 * abs_tol * fscale
    upper = start + 8.0
    while abs(_integrand(upper, z, xi, k, signed)) > target:
        upper += max(8.0, 0.25 * upper)
        if upper > 1e5:
            break
    return upper


@njit
def pow_exp_integral(z, xi, k, signed, a, b, abs_tol, rel_tol, max_depth):
    """Adaptive G7K15 integral of ``pow_k(z + xi r) e^{-r}`` over ``[a, b]``.

    ``b`` may be ``inf``; the range is then truncated where the integrand
    drops below ``1e-3 * abs_tol`` relative to its scale. A kink at
    ``r = -z/xi`` is used as an initial breakpoint.

    Returns ``(value, error_estimate)``.
    """
    if b == a:
        return 0.0, 0.0
    if math.isinf(b):
        b = _truncation_point(z, xi, k, signed, a, abs_tol)
    lo = np.empty(MAX_INTERVALS)
    hi = np.empty(MAX_INTERVALS)
    val = np.empty(MAX_INTERVALS)
    err = np.empty(MAX_INTERVALS)
    depth = np.empty(MAX_INTERVALS, dtype=np.int64)
    n = 0
    kink = -z / xi if xi != 0.0 else a
    if kink > a and kink < b:
        bounds = (a, kink, b)
        nb = 3
    else:
        bounds = (a, b, b)
        nb = 2
    for i in range(nb - 1):
        r, e = _qk15(z, xi, k, signed, bounds[i], bounds[i + 1])
        lo[n] = bounds[i]
        hi[n] = bounds[i + 1]
        val[n] = r
        err[n] = e
        depth[n] = 0
        n += 1
    while True:
        total = 0.0
        total_err = 0.0
        worst = -1
        worst_err = -1.0
        for i in range(n):
            total += val[i]
            total_err += err[i]
            if depth[i] < max_depth and err[i] > worst_err:
                worst_err = err[i]
                worst = i
        if total_err <= max(abs_tol, rel_tol * abs(total)):
            break
        if worst < 0 or n + 1 >= MAX_INTERVALS:
            break
        mid = 0.5 * (lo[worst] + hi[worst])
        r1, e1 = _qk15(z, xi, k, signed, lo[worst], mid)
        r2, e2 = _qk15(z, xi, k, signed, mid, hi[worst])
        d = depth[worst] + 1
        lo[n] = mid
        hi[n] = hi[worst]
        val[n] = r2
        err[n] = e2
        depth[n] = d
        hi[worst] = mid
        val[worst] = r1
        err[worst] = e1
        depth[worst] = d
        n += 1
    return total, total_err


# ------------------------------------------------------------ root finding


# Residuals are dispatched on an integer code so every kernel stays cacheable.
# Leaf residuals never call a root finder; cup residuals may call solve_v,
# which itself uses brentq on a leaf residual.
RES_F_IN_V = 0      # prm = (p, w)
RES_PSI = 1         # prm = (target,)
RES_TR0 = 2         # prm = (p, xi, eta, abs_tol, rel_tol, max_depth)
RES_XI = 3          # prm = (C,)
RES_CHORD = 10      # prm = (p, x1, rm1)
RES_TROLLEY = 11    # prm = (p, xi, eta, abs_tol, rel_tol, max_depth)
RES_COMPANION = 12  # prm = (p, target v)


@njit
def residual_leaf(kind, x, prm):
    if kind == RES_F_IN_V:
        return big_f(prm[0], x, prm[1])
    if kind == RES_PSI:
        return psi_tangent(x) - prm[0]
    if kind == RES_TR0:
        return tr0_scaled(prm[0], prm[1], prm[2], x, prm[3], prm[4], int(prm[5]))
    if kind == RES_XI:
        # C*eta - exp(eta - 1) with eta = 1 - xi
        return prm[0] * x - math.exp(x - 1.0)
    return np.nan


@njit
def residual_cup(kind, x, prm):
    if kind == RES_CHORD:
        v = solve_v(prm[0], x)
        return chord_gap(v, x, prm[1]) - prm[2]
    if kind == RES_COMPANION:
        return solve_v(prm[0], x) - prm[1]
    if kind == RES_TROLLEY:
        return trolley_residual(prm[0], prm[1], prm[2], x, prm[3], prm[4],
                                int(prm[5]))
    return residual_leaf(kind, x, prm)


@njit
def bisect(kind, prm, lo, hi, xtol, maxiter):
    """Bisection on a bracket with residual values of opposite signs.

    Runs until the bracket is narrower than ``xtol`` or stops shrinking in
    floating point. Returns ``nan`` if the endpoints do not bracket a root.
    """
    flo = residual_cup(kind, lo, prm)
    fhi = residual_cup(kind, hi, prm)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        return np.nan
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if mid <= min(lo, hi) or mid >= max(lo, hi) or abs(hi - lo) <= xtol:
            break
        fmid = residual_cup(kind, mid, prm)
        if fmid == 0.0:
            return mid
        if (fmid > 0.0) == (flo > 0.0):
            lo = mid
            flo = fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@njit
def brentq(kind, prm, a, b, xtol, rtol, maxiter):
    """Brent's bracketed root finder on a leaf residual."""
    fa = residual_leaf(kind, a, prm)
    fb = residual_leaf(kind, b, prm)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0.0) == (fb > 0.0):
        return np.nan
    c = a
    fc = fa
    d = b - a
    e = d
    for _ in range(maxiter):
        if (fb > 0.0) == (fc > 0.0):
            c = a
            fc = fa
            d = b - a
            e = d
        if abs(fc) < abs(fb):
            a = b
            b = c
            c = a
            fa = fb
            fb = fc
            fc = fa
        tol = 2.0 * EPS * abs(b) + 0.5 * xtol + rtol * abs(b)
        m = 0.5 * (c - b)
        if abs(m) <= tol or fb == 0.0:
            return b
        if abs(e) >= tol and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                pp = 2.0 * m * s
                qq = 1.0 - s
            else:
                qq = fa / fc
                rr = fb / fc
                pp = s * (2.0 * m * qq * (qq - rr) - (b - a) * (rr - 1.0))
                qq = (qq - 1.0) * (rr - 1.0) * (s - 1.0)
            if pp > 0.0:
                qq = -qq
            else:
                pp = -pp
            if 2.0 * pp < min(3.0 * m * qq - abs(tol * qq), abs(e * qq)):
                e = d
                d = pp / qq
            else:
                d = m
                e = m
        else:
            d = m
            e = m
        a = b
        fa = fb
        if abs(d) > tol:
            b += d
        elif m > 0.0:
            b += tol
        else:
            b -= tol
        fb = residual_leaf(kind, b, prm)
    return b


# -------------------------------------------------------------- cup pairs


@njit
def big_f(p, v, w):
    """F(v, w) in a rearranged, cancellation-light form (algebraically exact)."""
    a = -v
    s = w + a
    ea = math.exp(-a)
    term1 = ea * math.expm1(s) * pow_diff(w, a, p)
    term2 = -p * w ** (p - 1.0) * ea * expm1mx(s)
    term3 = p * a ** (p - 1.0) * math.exp(w) * expm1mx(-s)
    return term1 + term2 + term3


@njit
def solve_v(p, w):
    """Companion root ``v`` of ``F(., w)`` on ``(-w, -w (p-1)/p)``; nan if not bracketed."""
    lam = (p - 1.0) / p
    prm = np.empty(2)
    prm[0] = p
    prm[1] = w
    return brentq(RES_F_IN_V, prm, -w, -lam * w, 0.0, 4.0 * EPS, 200)


@njit
def cup_slopes(p, v, w):
    """(q, r, D) for a cup pair, with D from its symmetric expression."""
    a = -v
    s = w + a
    q = pow_diff(w, a, p) / s
    r = math.exp(-a) * math.expm1(s) / s
    d = p * (w ** (p - 1.0) + a ** (p - 1.0)) / (math.exp(-a) * math.expm1(s))
    return q, r, d


@njit
def d_forms(p, v, w):
    """The three expressions for D at a pair ``(v, w)``."""
    a = -v
    s = w + a
    q = pow_diff(w, a, p) / s
    d_left = (q + p * a ** (p - 1.0)) / (math.exp(-a) * expm1mx(s) / s)
    d_right = (p * w ** (p - 1.0) - q) / (math.exp(w) * expm1mx(-s) / s)
    d_sym = p * (w ** (p - 1.0) + a ** (p - 1.0)) / (math.exp(-a) * math.expm1(s))
    return d_left, d_right, d_sym


@njit
def chord_gap(v, w, x1):
    """Height of the line through (v,e^v),(w,e^w) above Gamma_1 at x1, over e^{x1}."""
    beta = (x1 - v) / (w - v)
    return beta * expm1mx(w - x1) + (1.0 - beta) * expm1mx(v - x1)


@njit
def chord_search(p, w_bar, x1, rm1, nscan):
    """Locate the cup chord through a point of R4.

    ``rm1`` is ``x2 e^{-x1} - 1``. Scans ``nscan`` points of ``w`` on
    ``(max(x1, 0), w_bar]`` for a sign change of the chord residual, then
    refines by bisection. Returns ``(v, w, beta, sign_changes)``; ``w`` is nan
    if no sign change was found.
    """
    prm = np.empty(3)
    prm[0] = p
    prm[1] = x1
    prm[2] = rm1
    if x1 == 0.0 and rm1 == 0.0:
        return 0.0, 0.0, 0.5, 1
    if rm1 <= 0.0 and x1 > 0.0:
        return solve_v(p, x1), x1, 1.0, 1
    if rm1 <= 0.0:
        # left chord end on Gamma_1: v(w) = x1 with w in (-x1, -x1 p/(p-1))
        prm[1] = x1
        w = bisect(RES_COMPANION, prm, -x1, min(-x1 * p / (p - 1.0), w_bar), 0.0, 200)
        if math.isnan(w):
            return np.nan, np.nan, np.nan, 0
        return x1, w, 0.0, 1
    if x1 < 0.0:
        # the chord through x has v < x1 < -v < w, and F(v, -x1) puts v above x1
        lo = -x1
    elif x1 == 0.0:
        # the gap at x1 = 0 is about -v w / 2 < w^2 / 2
        lo = min(w_bar * 1e-14, 0.5 * math.sqrt(rm1))
    else:
        lo = x1
    changes = 0
    a_br = np.nan
    b_br = np.nan
    prev_w = lo
    if x1 > 0.0:
        prev_h = -rm1
    else:
        prev_h = residual_cup(RES_CHORD, lo, prm)
    for i in range(1, nscan + 1):
        wi = lo + (w_bar - lo) * i / nscan
        hi_ = residual_cup(RES_CHORD, wi, prm)
        if (hi_ >= 0.0) != (prev_h >= 0.0):
            changes += 1
            if changes == 1:
                a_br = prev_w
                b_br = wi
        prev_w = wi
        prev_h = hi_
    if changes == 0:
        # On the closing chord itself the residual vanishes at w_bar.
        if abs(prev_h) <= 1e-13 * max(1.0, rm1):
            v = solve_v(p, w_bar)
            return v, w_bar, (x1 - v) / (w_bar - v), 1
        return np.nan, np.nan, np.nan, 0
    w = bisect(RES_CHORD, prm, a_br, b_br, 0.0, 200)
    v = solve_v(p, w)
    beta = (x1 - v) / (w - v)
    return v, w, beta, changes


# ----------------------------------------------------------- tangent family


@njit
def tangent_offset(xi, C, x1, x2):
    """Solve the tangent equation for a point of Omega_C.

    Returns ``(u, d)`` with ``d = x1 - u`` in ``[0, xi]``. The unknown is the
    distance ``eps = xi - d`` from the tangency abscissa, which satisfies
    ``psi(eps) = 1 - R/C`` with ``R = x2 e^{-x1}``; ``psi`` is increasing.
    """
    ratio = x2 * math.exp(-x1)
    target = (C - ratio) / C
    top = psi_tangent(xi)
    if target <= 0.0:
        return x1 - xi, xi
    if target >= top:
        return x1, 0.0
    prm = np.empty(1)
    prm[0] = target
    eps = bisect(RES_PSI, prm, 0.0, xi, 1e-18, 200)
    d = xi - eps
    return x1 - d, d


# ----------------------------------------------------------- m1 / m3


@njit
def m1_kernel(p, xi, z, abs_tol, rel_tol, max_depth):
    val, _ = pow_exp_integral(z, xi, p - 1.0, True, 0.0, np.inf,
                              abs_tol, rel_tol, max_depth)
    return p * val


@njit
def m3_kernel(p, xi, v_bar, k3, z, abs_tol, rel_tol, max_depth):
    upper = (v_bar - z) / xi
    val, _ = pow_exp_integral(z, xi, p - 1.0, True, 0.0, upper,
                              abs_tol, rel_tol, max_depth)
    return p * val + math.exp((z - v_bar) / xi) * k3


@njit
def tail_scaled(p, xi, w, abs_tol, rel_tol, max_depth):
    """``int_0^inf (w + xi r)^(p-2) e^{-r} dr`` for ``w >= 0``."""
    val, _ = pow_exp_integral(w, xi, p - 2.0, False, 0.0, np.inf,
                              abs_tol, rel_tol, max_depth)
    return val


@njit
def tr0_scaled(p, xi, eta, w, abs_tol, rel_tol, max_depth):
    """Left side of the w_* equation times ``exp(w/xi)``."""
    return eta * tail_scaled(p, xi, w, abs_tol, rel_tol, max_depth) - w ** (p - 2.0)


@njit
def trolley_lhs(p, xi, eta, w, abs_tol, rel_tol, max_depth):
    """Left side of the w_bar equation, ``eta p (p-1) e^{-w} int_0^inf (w + xi r)^(p-2) e^{-r} dr``."""
    return eta * p * (p - 1.0) * math.exp(-w) * tail_scaled(p, xi, w, abs_tol,
                                                            rel_tol, max_depth)


@njit
def trolley_residual(p, xi, eta, w, abs_tol, rel_tol, max_depth):
    v = solve_v(p, w)
    return trolley_lhs(p, xi, eta, w, abs_tol, rel_tol, max_depth) - cup_slopes(p, v, w)[2]


# -------------------------------------------------------------- candidate


@njit
def classify_kernel(p, xi, eta, C, tc, x1, x2):
    """Return ``(label, u, d)``; ``u``/``d`` are nan for R4."""
    w_bar = tc[TC_WBAR]
    v_bar = tc[TC_VBAR]
    rm1 = x2 * math.exp(-x1) - 1.0
    if x1 >= v_bar and x1 <= w_bar:
        if chord_gap(v_bar, w_bar, x1) >= rm1:
            return LABEL_R4, np.nan, np.nan
    u, d = tangent_offset(xi, C, x1, x2)
    if u >= w_bar:
        return LABEL_R1, u, d
    if u <= v_bar:
        return LABEL_R3, u, d
    return LABEL_R2, u, d


@njit
def barycentric(xi, eta, tc, x1, x2):
    """Weights of ``x`` w.r.t. X=(w+xi, e^w/eta), Y=(w, e^w), Z=(v, e^v)."""
    w_bar = tc[TC_WBAR]
    v_bar = tc[TC_VBAR]
    ez = math.exp(v_bar)
    delta = w_bar - v_bar
    em = math.expm1(delta)
    # X - Z and Y - Z without the cancellation of e^w - e^v
    ax = delta + xi
    ay = ez * (em + xi) / eta
    bx = delta
    by = ez * em
    rx = x1 - v_bar
    ry = x2 - ez
    det = ax * by - bx * ay
    a1 = (rx * by - bx * ry) / det
    a2 = (ax * ry - rx * ay) / det
    return a1, a2, 1.0 - a1 - a2


@njit
def corner_w_weights(xi, tc):
    """Weights of the corner W = (v + xi, e^v/eta) in closed form.

    The generic solve loses ``log10(1/(w - v))`` digits in the two small
    weights when the transition region is narrow.
    """
    delta = tc[TC_WBAR] - tc[TC_VBAR]
    ed = math.exp(delta)
    lo = ed * expm1mx(-delta)
    den = lo + xi * math.expm1(delta)
    a2 = expm1mx(delta) / den
    a3 = lo / den
    return 1.0 - a2 - a3, a2, a3


@njit
def branch_value(p, xi, eta, C, tc, label, x1, x2, u, d, abs_tol, rel_tol,
                 max_depth, nscan):
    """Evaluate one branch formula of the candidate at ``x``.

    ``u``/``d`` must come from :func:`tangent_offset` for R1 and R3; they are
    ignored otherwise. Returns ``(value, aux1, aux2, aux3)`` where the aux
    triple is the chord ``(v, w, beta)`` for R4, the barycentric weights for
    R2, and ``(u, d, nan)`` for R1/R3.
    """
    w_bar = tc[TC_WBAR]
    v_bar = tc[TC_VBAR]
    if label == LABEL_R1:
        m = m1_kernel(p, xi, u, abs_tol, rel_tol, max_depth)
        return m * d + abs(u) ** p, u, d, np.nan
    if label == LABEL_R3:
        m = m3_kernel(p, xi, v_bar, tc[TC_K3], u, abs_tol, rel_tol, max_depth)
        return m * d + abs(u) ** p, u, d, np.nan
    if label == LABEL_R2:
        q = tc[TC_QBAR]
        r = tc[TC_RBAR]
        # x2 - chord(x1), measured relative to Gamma_1 for accuracy near Y, Z
        above = x2 - math.exp(x1) * (1.0 + chord_gap(v_bar, w_bar, x1))
        val = q * (x1 - w_bar) + w_bar ** p + tc[TC_SLOPE] * above
        a1, a2, a3 = barycentric(xi, eta, tc, x1, x2)
        return val, a1, a2, a3
    rm1 = x2 * math.exp(-x1) - 1.0
    v, w, beta, _ = chord_search(p, w_bar, x1, rm1, nscan)
    if w == 0.0:
        return 0.0, v, w, beta
    a = -v
    q = pow_diff(w, a, p) / (w + a)
    return q * (x1 - w) + w ** p, v, w, beta


@njit
def branch_x2(p, xi, eta, C, tc, label, x1, x2, u, d, aux_w, abs_tol, rel_tol,
              max_depth):
    """Partial derivative in ``x2`` of a branch; ``aux_w`` is the chord ``w`` in R4."""
    if label == LABEL_R1 or label == LABEL_R3:
        if label == LABEL_R1:
            m = m1_kernel(p, xi, u, abs_tol, rel_tol, max_depth)
        else:
            m = m3_kernel(p, xi, tc[TC_VBAR], tc[TC_K3], u, abs_tol, rel_tol,
                          max_depth)
        sgn_pow = abs(u) ** (p - 1.0)
        if u < 0.0:
            sgn_pow = -sgn_pow
        mprime = (m - p * sgn_pow) / xi
        return mprime * math.exp(-u) * eta
    if label == LABEL_R2:
        return tc[TC_SLOPE]
    if aux_w == 0.0:
        return np.nan
    v = solve_v(p, aux_w)
    return cup_slopes(p, v, aux_w)[2]


@njit
def bellman_batch(p, xi, eta, C, tc, x1s, x2s, abs_tol, rel_tol, max_depth,
                  nscan):
    """Vectorised candidate evaluation; returns ``(values, labels)``."""
    n = x1s.shape[0]
    out = np.empty(n)
    labels = np.empty(n, dtype=np.int64)
    for i in range(n):
        lab, u, d = classify_kernel(p, xi, eta, C, tc, x1s[i], x2s[i])
        val, _, _, _ = branch_value(p, xi, eta, C, tc, lab, x1s[i], x2s[i], u,
                                    d, abs_tol, rel_tol, max_depth, nscan)
        out[i] = val
        labels[i] = lab
    return out, labels


# -------------------------------------------------- piecewise test functions


@njit
def piece_integrals(kind, offset, pivot, xi, a, b):
    """(int phi, int e^phi) over ``(a, b)`` for one piece; closed forms."""
    if b <= a:
        return 0.0, 0.0
    if kind == 0:
        return offset * (b - a), math.exp(offset) * (b - a)
    eta = 1.0 - xi
    lin = offset * (b - a) + xi * (b * math.log(pivot / b) + b)
    if a > 0.0:
        lin -= xi * (a * math.log(pivot / a) + a)
    # e^o alpha^xi (b^eta - a^eta)/eta, with the difference done by expm1
    scale = math.exp(offset) * pivot ** xi
    if a > 0.0:
        diff = b ** eta * -math.expm1(eta * math.log(a / b))
    else:
        diff = b ** eta
    return lin, scale * diff / eta


@njit
def interval_char(starts, ends, kinds, offsets, pivots, xi, a, b):
    """``<e^phi>_J exp(-<phi>_J)`` on ``J = (a, b)``."""
    lin = 0.0
    ex = 0.0
    for i in range(starts.shape[0]):
        lo = max(a, starts[i])
        hi = min(b, ends[i])
        if hi > lo:
            l_, e_ = piece_integrals(kinds[i], offsets[i], pivots[i], xi, lo, hi)
            lin += l_
            ex += e_
    length = b - a
    return ex / length * math.exp(-lin / length)


@njit
def _golden_max_1d(starts, ends, kinds, offsets, pivots, xi, a, b, lo, hi,
                   move_left, iters):
    gr = 0.6180339887498949
    x_lo = lo
    x_hi = hi
    best = -1.0
    best_x = lo
    for _ in range(iters):
        c1 = x_hi - gr * (x_hi - x_lo)
        c2 = x_lo + gr * (x_hi - x_lo)
        if move_left:
            f1 = interval_char(starts, ends, kinds, offsets, pivots, xi, c1, b) if c1 < b else -1.0
            f2 = interval_char(starts, ends, kinds, offsets, pivots, xi, c2, b) if c2 < b else -1.0
        else:
            f1 = interval_char(starts, ends, kinds, offsets, pivots, xi, a, c1) if c1 > a else -1.0
            f2 = interval_char(starts, ends, kinds, offsets, pivots, xi, a, c2) if c2 > a else -1.0
        if f1 > best:
            best = f1
            best_x = c1
        if f2 > best:
            best = f2
            best_x = c2
        if f1 >= f2:
            x_hi = c2
        else:
            x_lo = c1
    return best, best_x


@njit
def a_infty_search(starts, ends, kinds, offsets, pivots, xi, grid, iters):
    """Grid search of the A_inf characteristic over ``J = (grid[i], grid[j])``.

    The best grid cell is refined by alternating golden-section sweeps on the
    two endpoints. Returns ``(value, a, b)``.
    """
    n = grid.shape[0]
    best = -1.0
    bi = 0
    bj = 1
    for i in range(n - 1):
        for j in range(i + 1, n):
            val = interval_char(starts, ends, kinds, offsets, pivots, xi,
                                grid[i], grid[j])
            if val > best:
                best = val
                bi = i
                bj = j
    a = grid[bi]
    b = grid[bj]
    a_lo = grid[bi - 1] if bi > 0 else grid[0]
    a_hi = grid[bi + 1]
    b_lo = grid[bj - 1]
    b_hi = grid[bj + 1] if bj < n - 1 else grid[n - 1]
    for _ in range(4):
        val, xa = _golden_max_1d(starts, ends, kinds, offsets, pivots, xi, a, b,
                                 a_lo, min(a_hi, b), True, iters)
        if val > best:
            best = val
            a = xa
        val, xb = _golden_max_1d(starts, ends, kinds, offsets, pivots, xi, a, b,
                                 max(b_lo, a), b_hi, False, iters)
        if val > best:
            best = val
            b = xb
    return best, a, b
