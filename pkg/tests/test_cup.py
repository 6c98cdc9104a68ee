import math

import mpmath as mp
import numpy as np
import pytest

import jnbellman as jnb
from jnbellman.cup import bracket_lambda, w_limit

mp.mp.dps = 30


def f_literal(p, v, w):
    """F(v, w) exactly as written, in extended precision."""
    p, v, w = mp.mpf(p), mp.mpf(v), mp.mpf(w)
    return ((mp.e ** w - mp.e ** v) * (w ** p - (-v) ** p - p * w ** (p - 1) - p * (-v) ** (p - 1))
            + p * (w - v) * (w ** (p - 1) * mp.e ** v + (-v) ** (p - 1) * mp.e ** w))


@pytest.mark.parametrize("p", [2.5, 3.0, 4.0])
@pytest.mark.parametrize("w", [1e-3, 0.02, 0.05, 0.1])
@pytest.mark.parametrize("th", [0.7, 0.8, 0.95])
def test_big_f_matches_literal_form(p, w, th):
    v = -th * w
    ref = float(f_literal(p, v, w))
    assert jnb.big_f(p, v, w) == pytest.approx(ref, rel=1e-9, abs=1e-16 * w ** (p + 2))


def test_big_f_symmetric_point():
    p, w = 3.0, 0.05
    ref = 4 * p * w ** (p - 1) * (w * math.cosh(w) - math.sinh(w))
    assert jnb.big_f(p, -w, w) == pytest.approx(ref, rel=1e-10)


def test_big_f_limits_and_signs():
    assert abs(jnb.big_f(3.0, -1e-8, 1e-8)) < 1e-20
    assert jnb.big_f(3.0, -2.0 / 3.0 * 0.05, 0.05) < 0
    assert jnb.big_f(3.0, -0.05, 0.05) > 0


def test_big_f_domain():
    with pytest.raises(jnb.DomainError):
        jnb.big_f(3.0, 0.1, 0.2)


def scan_root(p, w, n=10_000):
    """Companion root by a fine scan of the literal F and bisection."""
    lam = (p - 1) / p
    grid = np.linspace(-w, -lam * w, n)
    vals = [f_literal(p, v, w) for v in grid]
    i = next(k for k in range(n - 1) if vals[k] > 0 >= vals[k + 1])
    return float(mp.findroot(lambda v: f_literal(p, v, w), (grid[i], grid[i + 1]),
                             solver="bisect"))


def test_solve_v_against_scan_oracle():
    pair = jnb.solve_v(3.0, 0.1)
    assert pair.v == pytest.approx(scan_root(3.0, 0.1), abs=1e-13)


@pytest.mark.parametrize("p", [2.2, 2.5, 3.0, 4.0, 6.0])
def test_solve_v_bracket_and_residual(p):
    lam = bracket_lambda(p)
    for w in np.exp(np.linspace(math.log(1e-4), math.log(0.99 * w_limit(p)), 25)):
        pair = jnb.solve_v(p, w)
        assert -w < pair.v < -lam * w
        assert abs(jnb.big_f(p, pair.v, w)) < 1e-11


def test_solve_v_domain():
    with pytest.raises(jnb.DomainError):
        jnb.solve_v(3.0, 0.0)
    with pytest.raises(jnb.DomainError):
        jnb.solve_v(3.0, w_limit(3.0))
    with pytest.raises(jnb.DomainError):
        jnb.solve_v(2.0, 0.01)


def test_slopes_and_d_forms():
    p, w = 3.0, 0.07
    pair = jnb.solve_v(p, w)
    v = mp.mpf(pair.v)
    r = (mp.e ** w - mp.e ** v) / (w - v)
    q = (mp.mpf(w) ** p - (-v) ** p) / (w - v)
    d = p * (mp.mpf(w) ** (p - 1) + (-v) ** (p - 1)) / (mp.e ** w - mp.e ** v)
    assert pair.r == pytest.approx(float(r), rel=1e-13)
    assert pair.q == pytest.approx(float(q), rel=1e-12)
    assert pair.d == pytest.approx(float(d), rel=1e-12)
    for form in pair.d_forms():
        assert form == pytest.approx(pair.d, rel=1e-9)


@pytest.mark.parametrize("w", [0.02, 0.05, 0.1])
def test_d_bounds(w):
    p = 3.0
    d = jnb.d_of_w(p, w)
    assert d < p * (p - 1) * w ** (p - 2) * math.exp(-w)
    assert d > 0.5 * p * math.exp(-w) * w ** (p - 2)


def test_d_increasing():
    assert jnb.d_of_w(3.0, 0.08) > jnb.d_of_w(3.0, 0.04)
    ds = [jnb.d_of_w(3.5, w) for w in np.linspace(1e-3, 0.99 * w_limit(3.5), 50)]
    assert all(b > a for a, b in zip(ds, ds[1:]))


def test_chord_coords_corner(p3):
    params, tc = p3
    cc = jnb.chord_coords(params, tc, (0.0, 1.0))
    assert cc.pair.v == 0.0 and cc.pair.w == 0.0 and cc.beta == 0.5


def test_chord_coords_endpoint(p3):
    params, tc = p3
    w0 = 0.6 * tc.w_bar
    cc = jnb.chord_coords(params, tc, (w0, math.exp(w0)))
    assert cc.pair.w == pytest.approx(w0, rel=1e-9)
    assert cc.pair.v == pytest.approx(jnb.solve_v(3.0, w0).v, rel=1e-8)
    assert cc.beta == pytest.approx(1.0, abs=1e-8)


def test_chord_coords_round_trip(p3):
    params, tc = p3
    w0 = tc.w_bar / 2
    v0 = jnb.solve_v(3.0, w0).v
    x = (0.5 * (v0 + w0), 0.5 * (math.exp(v0) + math.exp(w0)))
    cc = jnb.chord_coords(params, tc, x)
    assert abs(cc.pair.w - w0) < 1e-9 and abs(cc.pair.v - v0) < 1e-9
    assert cc.beta == pytest.approx(0.5, abs=1e-6)
    # the chord passes through x
    r = cc.pair.r
    assert r * (x[0] - cc.pair.w) + math.exp(cc.pair.w) == pytest.approx(x[1], rel=1e-14)


def test_chord_coords_rejects_non_r4(p3):
    params, tc = p3
    with pytest.raises(jnb.DomainError):
        jnb.chord_coords(params, tc, (0.0, params.C))
