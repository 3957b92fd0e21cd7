import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from minregion import (
    Case,
    OutOfDomain,
    Piece,
    ProblemInstance,
    Value,
    angle_report,
    classify,
    in_inner,
    in_outer,
    regime,
    t_residual,
)
from minregion.region import regime_constants, slack_xr, t_residual_xr, tau_r
from minregion.trace import trace_boundary

from conftest import L, S1, S2, reference_config
from oracles import junction_by_bisection, slack as oracle_slack


# -- regime -----------------------------------------------------------------------

@pytest.mark.parametrize("r, case", [
    (2.0, Case.TWO_CUSPS),
    (4.0, Case.ONE_CUSP),
    (6.0, Case.THREE_ARCS),
    (25.0 / 3.0, Case.SINGLETON),
    (9.0, Case.EMPTY),
])
def test_reference_cases(r, case):
    assert regime(reference_config(r)).case is case


def test_reference_thresholds():
    t1, t2, t3 = regime(reference_config(1.0)).thresholds
    assert t1 == pytest.approx(10 / 3)
    assert t2 == pytest.approx(5)
    assert t3 == pytest.approx(25 / 3)


def test_singleton_point():
    reg = regime(reference_config(25.0 / 3.0))
    assert reg.singleton_point == pytest.approx(-5 / 3, abs=1e-9)


def test_one_cusp_constants():
    reg = regime(reference_config(4.0))
    assert reg.lambda1 == pytest.approx(2.25397, abs=1e-5)
    assert reg.nu1 == pytest.approx(2.3092, abs=1e-4)
    # frozen from the independent bisection on the circle around x1*
    assert reg.lambda1 == pytest.approx(2.253968253968254, abs=1e-8)
    assert reg.nu1 == pytest.approx(2.3091828690689944, abs=1e-8)
    assert reg.nu2 is None


def test_three_arcs_constants():
    reg = regime(reference_config(6.0))
    assert (reg.lambda1, reg.nu1) == pytest.approx((0.0740740740740744, 2.7477388134802085), abs=1e-8)
    assert (reg.lambda2, reg.nu2) == pytest.approx((-3.708333333333334, 2.3975537301359644), abs=1e-8)


def _random_params(rng, lo_frac, hi_frac):
    s1, s2 = sorted(rng.uniform(0.3, 3.0, 2), reverse=True)
    Lv = rng.uniform(1.0, 20.0)
    t1, t3 = Lv / (2 * s1), 0.5 * Lv * (1 / s1 + 1 / s2)
    return s1, s2, Lv, t1 + rng.uniform(lo_frac, hi_frac) * (t3 - t1)


def test_closed_forms_match_bisection(rng):
    for _ in range(30):
        s1, s2, Lv, r = _random_params(rng, 0.02, 0.98)
        reg = regime_constants(r, s1, s2, Lv)
        got = junction_by_bisection(r, s1, s2, Lv, 1)
        assert got == pytest.approx((reg.lambda1, reg.nu1), abs=1e-8)
        if reg.nu2 is not None and reg.nu2 > 1e-6:
            got = junction_by_bisection(r, s1, s2, Lv, 2)
            assert got == pytest.approx((reg.lambda2, reg.nu2), abs=1e-8)


@given(st.floats(0.2, 5), st.floats(0.2, 5), st.floats(0.5, 50), st.floats(0.001, 1.2))
def test_nu_presence_and_lambda_bounds(sa, sb, Lv, frac):
    s1, s2 = max(sa, sb), min(sa, sb)
    t1, t2, t3 = Lv / (2 * s1), Lv / (2 * s2), 0.5 * Lv * (1 / s1 + 1 / s2)
    r = frac * t3
    reg = regime_constants(r, s1, s2, Lv)
    tau = tau_r(r)
    if abs(r - t1) > tau and abs(r - t2) > tau and abs(r - t3) > tau:
        assert (reg.nu1 is not None) == (t1 < r <= t3)
        assert (reg.nu2 is not None) == (t2 < r <= t3)
    if reg.case in (Case.ONE_CUSP, Case.THREE_ARCS):
        assert reg.lambda1 < Lv / s1 - r + 1e-9 * (1 + r)
    if reg.case is Case.TWO_CUSPS and r < t1 - tau:
        assert reg.lambda1 > Lv / s1 - r - 1e-9 * (1 + r)


def test_threshold_ties_follow_closed_intervals():
    assert regime_constants(10 / 3, S1, S2, L).case is Case.TWO_CUSPS
    assert regime_constants(5.0, S1, S2, L).case is Case.ONE_CUSP
    assert regime_constants(5.0 + 1e-6, S1, S2, L).case is Case.THREE_ARCS
    assert regime_constants(25 / 3 + 1e-6, S1, S2, L).case is Case.EMPTY


def test_regime_uses_ordered_sigmas():
    a = regime(ProblemInstance([-4, 0], [4, 0], 1.0, 1.5, 10))
    b = regime(reference_config(4.0))
    assert a.case is b.case and a.lambda1 == b.lambda1


def test_coincident_minimizers():
    inst = ProblemInstance([1, 1], [1, 1], 1, 2, 3)
    assert regime(inst).case is Case.SINGLETON
    m = classify(inst, [1, 1])
    assert m.value is Value.BOUNDARY and m.which_piece is Piece.SINGLETON_POINT
    assert classify(inst, [1.1, 1]).value is Value.EXTERIOR


# -- outer / inner predicates --------------------------------------------------

def test_predicate_examples(two_cusps, singleton):
    assert in_outer(two_cusps, [0, 0])
    assert in_inner(two_cusps, [0, 0])
    assert not in_outer(two_cusps, [-2, 0])
    assert not in_outer(two_cusps, [100, 0])
    assert in_inner(singleton, [-5 / 3, 0])


@pytest.mark.parametrize("r", [2.0, 4.0, 6.0])
def test_nesting(r, rng):
    inst = reference_config(r)
    pts = rng.uniform(-12, 12, size=(10_000, 2))
    for x in pts:
        if in_inner(inst, x):
            assert in_outer(inst, x)


# -- classification -------------------------------------------------------------

def test_cusps(two_cusps, one_cusp, three_arcs):
    assert classify(two_cusps, [-2, 0]) == classify(two_cusps, [-2, 0])
    m = classify(two_cusps, [-2, 0])
    assert (m.value, m.which_piece) == (Value.BOUNDARY, Piece.CUSP_X1)
    m = classify(two_cusps, [2, 0])
    assert (m.value, m.which_piece) == (Value.BOUNDARY, Piece.CUSP_X2)
    m = classify(one_cusp, [-4, 0])
    assert (m.value, m.which_piece) == (Value.BOUNDARY, Piece.CUSP_X1)
    # the x2* cusp is gone once r passes L / (2 sigma1)
    assert classify(one_cusp, [4, 0]).value is Value.EXTERIOR
    assert classify(three_arcs, [-6, 0]).value is Value.EXTERIOR


def test_arc_and_curve_tags(three_arcs):
    reg = regime(three_arcs)
    w = 0.2
    x = [-6 + reg.R1 * math.cos(w), reg.R1 * math.sin(w)]
    assert x[0] > reg.lambda1
    m = classify(three_arcs, x)
    assert (m.value, m.which_piece) == (Value.BOUNDARY, Piece.ARC1)
    x = [6 - reg.R2 * math.cos(0.2), reg.R2 * math.sin(0.2)]
    m = classify(three_arcs, x)
    assert (m.value, m.which_piece) == (Value.BOUNDARY, Piece.ARC2)
    # junction prefers the curve T
    m = classify(three_arcs, [reg.lambda1, reg.nu1])
    assert (m.value, m.which_piece) == (Value.BOUNDARY, Piece.CURVE_T)


def test_traced_points_classify_as_boundary(two_cusps, one_cusp, three_arcs):
    for inst in (two_cusps, one_cusp, three_arcs):
        for seg in trace_boundary(inst, 64).segments:
            for p in seg.points:
                assert classify(inst, p).value is Value.BOUNDARY


def test_empty_and_singleton():
    empty = reference_config(9.0)
    assert classify(empty, [0, 0]).value is Value.EXTERIOR
    assert classify(empty, [-9, 0]).value is Value.EXTERIOR
    single = reference_config(25 / 3)
    m = classify(single, [-5 / 3, 0])
    assert (m.value, m.which_piece) == (Value.BOUNDARY, Piece.SINGLETON_POINT)
    assert classify(single, [0, 0]).value is Value.EXTERIOR


def test_classify_rejects_bad_tol(two_cusps):
    with pytest.raises(ValueError):
        classify(two_cusps, [0, 0], tol=0)


@pytest.mark.parametrize("r", [2.0, 4.0, 6.0])
def test_classify_consistent_with_predicates(r, rng):
    inst = reference_config(r)
    for x in rng.uniform(-12, 12, size=(3000, 2)):
        v = classify(inst, x).value
        if v is Value.INTERIOR:
            assert in_outer(inst, x)
        if v is Value.EXTERIOR and in_inner(inst, x):
            pytest.fail(f"inner point {x} classified Exterior")


@pytest.mark.parametrize("r", [2.0, 4.0, 6.0])
def test_rotational_symmetry_in_3d(r, rng):
    inst = reference_config(r, n=3)
    for _ in range(1000):
        x = rng.uniform(-12, 12, size=3)
        t = rng.uniform(0, 2 * math.pi)
        R = np.array([[1, 0, 0], [0, math.cos(t), -math.sin(t)], [0, math.sin(t), math.cos(t)]])
        assert classify(inst, x) == classify(inst, R @ x)


# -- curve T -------------------------------------------------------------------

def test_residual_vanishes_at_junction(one_cusp):
    reg = regime(one_cusp)
    assert abs(t_residual(one_cusp, [reg.lambda1, reg.nu1])) <= 1e-9


def test_residual_negative_inside(two_cusps):
    assert t_residual(two_cusps, [0, 0]) < 0


def test_residual_domain_errors(two_cusps):
    with pytest.raises(OutOfDomain):
        t_residual(two_cusps, [-2, 0])
    with pytest.raises(OutOfDomain):
        t_residual(two_cusps, [100, 0])


def _ball_samples(reg, count, rng):
    r = reg.r
    lo, hi = max(-r - reg.R1, r - reg.R2), min(-r + reg.R1, r + reg.R2)
    x1 = rng.uniform(lo, hi, 4 * count)
    rho = rng.uniform(0, min(reg.R1, reg.R2), 4 * count)
    keep = (np.hypot(x1 + r, rho) < reg.R1) & (np.hypot(x1 - r, rho) < reg.R2)
    return x1[keep][:count], rho[keep][:count]


@pytest.mark.parametrize("r", [2.0, 4.0, 6.0])
def test_cross_form_signs(r, rng):
    reg = regime(reference_config(r))
    x1, rho = _ball_samples(reg, 10_000, rng)
    s = slack_xr(reg, x1, rho)
    t = t_residual_xr(r, S1, S2, L, x1, rho)
    assert np.all(np.sign(s) == -np.sign(t))


@pytest.mark.parametrize("r", [2.0, 4.0, 6.0])
def test_traced_points_vanish_in_both_forms(r):
    inst = reference_config(r)
    for seg in trace_boundary(inst, 128).curves():
        if seg.tag != "CurveT":
            continue
        for p in seg.points:
            rep = angle_report(inst, p)
            if not rep.defined:
                continue       # the cusps
            if abs(rep.slack) <= 1e-10:
                assert abs(t_residual(inst, p)) <= 1e-8


def test_package_slack_matches_oracle(rng):
    for r in (2.0, 4.0, 6.0):
        inst = reference_config(r)
        for x in rng.uniform(-10, 10, size=(500, 2)):
            ref = oracle_slack(x, [-r, 0], [r, 0], S1, S2, L)
            rep = angle_report(inst, x)
            if ref is None:
                continue
            assert rep.defined
            assert rep.slack == pytest.approx(ref, abs=1e-10)


# -- structural properties -------------------------------------------------------

@pytest.mark.parametrize("r", [2.0, 4.0, 6.0])
def test_circle_threshold(r, rng):
    reg = regime(reference_config(r))
    w = rng.uniform(1e-3, math.pi - 1e-3, 1000)
    x1 = -r + reg.R1 * np.cos(w)
    s = slack_xr(reg, x1, reg.R1 * np.sin(w))
    ok = ~np.isnan(s) & (np.abs(x1 - reg.lambda1) > 1e-9)
    assert np.all((s[ok] > 0) == (x1[ok] > reg.lambda1))
    x1 = r + reg.R2 * np.cos(w)
    s = slack_xr(reg, x1, reg.R2 * np.sin(w))
    ok = ~np.isnan(s) & (np.abs(x1 - reg.lambda2) > 1e-9)
    assert np.all((s[ok] > 0) == (x1[ok] < reg.lambda2))


@pytest.mark.parametrize("r", [2.0, 4.0, 6.0])
def test_vertical_monotonicity(r, rng):
    reg = regime(reference_config(r))
    checked = 0
    while checked < 1000:
        x1 = rng.uniform(-r, r)
        t = rng.uniform(0, 10)
        s = slack_xr(reg, x1, t)
        if np.isnan(s) or s < 0:
            continue
        checked += 1
        lower = rng.uniform(0, t, 5)
        lower = lower[lower > 0]
        assert np.all(slack_xr(reg, x1, lower) > 0)


def test_monotone_in_L(rng):
    for _ in range(100):
        s1, s2 = sorted(rng.uniform(0.3, 3, 2), reverse=True)
        r = rng.uniform(0.5, 5)
        Lmin = 2 * r / (1 / s1 + 1 / s2)
        La = Lmin * rng.uniform(1, 3)
        Lb = La * rng.uniform(1, 2)
        a = ProblemInstance.canonical(r, s1, s2, La)
        b = a.with_L(Lb)
        for x in rng.uniform(-3 * r, 3 * r, size=(10, 2)):
            if in_outer(a, x):
                assert in_outer(b, x)


def test_arc_points_inner_and_t_points_outer_only(one_cusp, three_arcs):
    for inst in (one_cusp, three_arcs):
        for seg in trace_boundary(inst, 64).curves():
            pts = seg.points[1:-1]          # skip junctions and cusps
            if seg.tag in ("Arc1", "Arc2"):
                assert all(in_inner(inst, p) for p in pts)
            else:
                inner = [p for p in pts if angle_report(inst, p).defined]
                assert all(in_outer(inst, p) and not in_inner(inst, p) for p in inner)
