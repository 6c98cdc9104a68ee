import json
import math

import pytest

import jnbellman as jnb
from jnbellman.verification import (check_a_infty_log, log_function, oscillation_log,
                                    run_suite)

# relative gap to omega(3)^3 at C = 1000 C_0(3), pinned on the first full run
FROZEN_REL_GAP_1000 = 6.160151249017732e-06


def c0(p):
    return jnb.thresholds(p)[1]


@pytest.fixture(scope="module")
def report():
    return run_suite(3.0, 2 * c0(3.0), seed=1)


def test_suite_passes(report):
    assert report.passed, [e.name for e in report.failures()]
    assert len(report.entries) > 40
    assert all(e.samples >= 1 for e in report.entries)


def test_suite_passes_large_c():
    rep = run_suite(3.0, 100 * c0(3.0), seed=1)
    assert rep.passed, [e.name for e in rep.failures()]


@pytest.mark.slow
@pytest.mark.parametrize("p,factor", [(2.5, 2.0), (4.0, 2.0), (3.0, 1000.0)])
def test_suite_passes_other_cases(p, factor):
    rep = run_suite(p, factor * c0(p), seed=7)
    assert rep.passed, [e.name for e in rep.failures()]


def test_suite_deterministic():
    a = run_suite(3.0, 2 * c0(3.0), seed=5, convexity_segments=500)
    b = run_suite(3.0, 2 * c0(3.0), seed=5, convexity_segments=500)
    assert a.to_json() == b.to_json()


def test_report_json_schema(report):
    d = json.loads(report.to_json())
    assert set(d) >= {"p", "C", "seed", "versions", "entries"}
    assert d["seed"] == 1
    for e in d["entries"]:
        assert set(e) >= {"name", "passed", "worst_residual", "samples"}


def test_suite_domain():
    with pytest.raises(jnb.DomainError):
        run_suite(3.0, c0(3.0) / 2, seed=1)


def test_bmo_norm_log():
    assert jnb.bmo_norm_log(2.0) == pytest.approx(1.0, abs=1e-12)
    for p in (1.0, 1.5, 2.5, 3.0, 4.0):
        assert abs(jnb.bmo_norm_log(p) - jnb.omega(p)) < 1e-6
        assert jnb.bmo_norm_log(p) >= oscillation_log(p, 0.0)


def test_oscillation_small_interval_limit():
    # as J shrinks to a point near 1 the oscillation vanishes
    assert oscillation_log(3.0, 0.999999) < 1e-5


def test_dist_lower_bound():
    om = jnb.omega(3.0)
    assert jnb.dist_lower_bound(3.0, 1.0, math.inf) == pytest.approx(om)
    assert jnb.dist_lower_bound(3.0, 2.0, 2.0) == pytest.approx(om / 2)
    assert jnb.dist_lower_bound(3.0, 0.5, 0.8) == pytest.approx(2 * jnb.dist_lower_bound(3.0, 1.0, 1.6))
    with pytest.raises(jnb.DomainError):
        jnb.dist_lower_bound(3.0, 0.0, 1.0)
    with pytest.raises(jnb.DomainError):
        jnb.dist_lower_bound(3.0, 1.0, -1.0)


def test_a_infty_of_log_functions():
    mono, err, blow = check_a_infty_log()
    assert mono < 0 and err < 1e-9 and blow > 2
    assert jnb.a_infty_characteristic(log_function(0.5)) == pytest.approx(
        math.exp(-0.5) / 0.5, rel=1e-9)


def test_limit_scan_trend():
    p = 3.0
    rows = jnb.limit_scan(p, [f * c0(p) for f in (2, 10, 100, 1000)])
    gaps = [g for _, _, g in rows]
    assert all(g > 0 for g in gaps)
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    target = jnb.omega(p) ** p
    rel = gaps[-1] / target
    assert rel < 1e-2
    assert rel == pytest.approx(FROZEN_REL_GAP_1000, rel=1e-6)
    # b(0, C) uses the tangent family through (0, C)
    params, tc = jnb.construct(p, 2 * c0(p))
    assert rows[0][1] == pytest.approx(jnb.m3(params, tc, -params.xi) * params.xi
                                       + params.xi ** p, rel=1e-14)
