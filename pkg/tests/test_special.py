import math

import mpmath as mp
import pytest
from scipy import special as sps

import jnbellman as jnb
from jnbellman.special import QuadratureConfig, pow_exp_integral


@pytest.mark.parametrize("p", [2.5, 3.0, 4.0, 7.5])
@pytest.mark.parametrize("w", [0.0, 1e-6, 0.01, 0.3, 2.0])
@pytest.mark.parametrize("xi", [0.5, 0.99, 0.9999])
def test_tail_matches_incomplete_gamma(p, w, xi):
    ref = float(mp.mpf(xi) ** (p - 1) * mp.gammainc(p - 1, mp.mpf(w) / xi))
    assert jnb.tail_integral(p, xi, w) == pytest.approx(ref, rel=1e-11, abs=1e-14)


@pytest.mark.parametrize("z", [-3.0, -0.5, -1e-4, 0.0, 0.2, 1.5])
def test_signed_tail_matches_quadrature(z):
    p, xi = 3.3, 0.97
    f = lambda s: mp.sign(s) * abs(s) ** (p - 1) * mp.e ** (-s / xi)
    pts = [z, 0, mp.inf] if z < 0 else [z, mp.inf]
    ref = float(mp.quad(f, pts))
    assert jnb.signed_tail(p, xi, z) == pytest.approx(ref, rel=1e-11, abs=1e-13)


@pytest.mark.parametrize("k,z,xi,a,b", [
    (2.0, 0.3, 0.9, 0.0, math.inf),
    (1.5, -1.0, 1.0, 0.0, 5.0),
    (3.0, -2.0, 0.5, 1.0, math.inf),
    (0.5, 0.0, 1.0, 0.0, math.inf),
])
def test_pow_exp_integral(k, z, xi, a, b):
    f = lambda r: abs(z + xi * r) ** k * mp.e ** (-r)
    root = -z / xi
    pts = [a] + ([root] if a < root < b else []) + [mp.inf if b == math.inf else b]
    ref = float(mp.quad(f, pts))
    assert pow_exp_integral(z, xi, k, a, b) == pytest.approx(ref, rel=1e-11)


@pytest.mark.parametrize("p", [0.5, 1.0, 2.5, 3.0, 10.0])
def test_gamma(p):
    assert jnb.gamma_fn(p) == pytest.approx(sps.gamma(p), rel=1e-14)


def test_gamma_rejects_nonpositive():
    with pytest.raises(jnb.DomainError):
        jnb.gamma_fn(0.0)


@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0, 4.5])
def test_exp_moment_unit(p):
    ref = float(mp.quad(lambda t: t ** (p - 1) * mp.e ** t, [0, 1]))
    assert jnb.exp_moment_unit(p) == pytest.approx(ref, rel=1e-13)


def test_omega_against_frozen(oracle):
    for p, ref in oracle["omega"].items():
        assert jnb.omega(float(p)) == pytest.approx(float(ref), rel=1e-13)


def test_omega_closed_forms():
    assert abs(jnb.omega(2.0) - 1.0) < 1e-12
    assert abs(jnb.omega(1.0) - 2.0 / math.e) < 1e-12
    # p = 4: int_0^1 t^3 e^t dt = 6 - 2e, so omega^4 = 9
    assert jnb.omega(4.0) == pytest.approx(math.sqrt(3.0), rel=1e-13)


def test_omega_domain():
    with pytest.raises(jnb.DomainError):
        jnb.omega(0.9)


def test_tail_domain():
    with pytest.raises(jnb.DomainError):
        jnb.tail_integral(2.0, 0.5, 0.1)
    with pytest.raises(jnb.DomainError):
        jnb.tail_integral(3.0, 0.5, -0.1)
    with pytest.raises(jnb.DomainError):
        jnb.tail_integral(3.0, 1.5, 0.1)


def test_quadrature_config_env(monkeypatch):
    monkeypatch.setenv("JNB_QUAD_TOL", "1e-8")
    assert QuadratureConfig.from_env().abs_tol == 1e-8
    monkeypatch.delenv("JNB_QUAD_TOL")
    assert QuadratureConfig.from_env().abs_tol == 1e-12


def test_quadrature_config_validation():
    with pytest.raises(jnb.DomainError):
        QuadratureConfig(abs_tol=0.0)
    with pytest.raises(jnb.DomainError):
        QuadratureConfig(max_depth=3)


def test_looser_tolerance_still_close():
    cfg = QuadratureConfig(abs_tol=1e-6, rel_tol=1e-6)
    assert jnb.omega(3.0, cfg) == pytest.approx(jnb.omega(3.0), rel=1e-6)


def test_omega_continuous_at_two():
    for p in (2 - 1e-6, 2 + 1e-6):
        assert abs(jnb.omega(p) - 1.0) < 1e-5
