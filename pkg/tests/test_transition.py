import math

import pytest

import jnbellman as jnb
from jnbellman.transition import trolleybus_lhs, tr0_lhs

from conftest import setup

CASES = [(2.5, 2.0), (3.0, 2.0), (3.0, 100.0), (4.0, 2.0)]
KEYS = ("c1", "c2", "w_star", "w_bar", "v_bar", "d_bar")


def test_thresholds_p3():
    xi0, c0 = jnb.thresholds(3.0)
    assert xi0 == pytest.approx(1 - 1 / 486, rel=1e-15)
    assert c0 == pytest.approx(486 * math.exp(-(1 - 1 / 486)), rel=1e-14)
    assert abs(c0 - 179.1) < 0.1


def test_thresholds_against_frozen(oracle):
    for p, (xi0, c0) in oracle["thresholds"].items():
        got = jnb.thresholds(float(p))
        assert got[0] == pytest.approx(float(xi0), rel=1e-15)
        assert got[1] == pytest.approx(float(c0), rel=1e-13)


def test_thresholds_monotone_in_p():
    assert jnb.thresholds(4.0)[0] > jnb.thresholds(3.0)[0]


def test_thresholds_domain():
    with pytest.raises(jnb.DomainError):
        jnb.thresholds(2.0)


@pytest.mark.parametrize("p,factor", CASES)
def test_constants_against_mpmath(p, factor, oracle):
    params, tc = setup(p, factor)
    ref = oracle["transition"][f"{p:g}@{factor:g}"]
    assert params.xi == pytest.approx(float(ref["xi"]), rel=1e-15)
    for key in KEYS:
        assert getattr(tc, key) == pytest.approx(float(ref[key]), rel=1e-12), key


@pytest.mark.parametrize("p", [2.5, 3.0, 4.0])
@pytest.mark.parametrize("factor", [2.0, 100.0])
def test_invariants(p, factor):
    _, tc = setup(p, factor)
    for name, (ok, _) in tc.invariant_checks().items():
        assert ok, name


def test_bracket_c():
    params, _ = setup(3.0, 2.0)
    c1, c2 = jnb.bracket_c(3.0, params.xi)
    assert c1 < c2 < params.xi
    assert c2 < (3.0 - 2) / 9
    xi, eta = params.xi, params.eta
    assert c1 == pytest.approx(xi * (math.e * eta * math.gamma(2.0)), rel=1e-14)
    assert c2 == pytest.approx(xi * (2 * math.e * eta * math.gamma(3.0)), rel=1e-14)


def test_bracket_c_domain():
    xi0, _ = jnb.thresholds(3.0)
    with pytest.raises(jnb.DomainError):
        jnb.bracket_c(3.0, xi0 - 1e-4)


def test_bracket_signs(p3):
    params, tc = p3
    p, xi, eta = 3.0, params.xi, params.eta
    assert tr0_lhs(p, xi, 1e-12, eta) > 0
    assert tr0_lhs(p, xi, tc.c1, eta) < 0
    assert trolleybus_lhs(p, xi, tc.w_star, eta) > jnb.d_of_w(p, tc.w_star)
    assert trolleybus_lhs(p, xi, tc.c2, eta) < jnb.d_of_w(p, tc.c2)


def test_trolleybus_lhs_decreasing(p3):
    params, tc = p3
    n = 40
    ws = [tc.w_star + (tc.c2 - tc.w_star) * i / (n - 1) for i in range(n)]
    vals = [trolleybus_lhs(3.0, params.xi, w, params.eta) for w in ws]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_shrinks_as_c_grows():
    _, small = setup(3.0, 2.0)
    _, large = setup(3.0, 100.0)
    assert large.w_bar < small.w_bar
    assert abs(large.v_bar) < abs(small.v_bar)


def test_construct_rejects_low_c():
    c0 = jnb.thresholds(3.0)[1]
    with pytest.raises(jnb.DomainError):
        jnb.construct(3.0, c0 / 2)
    with pytest.raises(jnb.DomainError):
        jnb.construct(2.0, 100.0)


def test_cached_quantities(p3):
    params, tc = p3
    assert tc.m1_wbar == pytest.approx(jnb.m1(params, tc.w_bar), rel=1e-14)
    # the trolleybus slope equals D(w_bar)
    assert tc.r2_slope == pytest.approx(tc.d_bar, rel=1e-7)
    assert tuple(tc.packed.shape) and not tc.packed.flags.writeable
