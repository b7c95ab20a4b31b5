import math

import numpy as np
import pytest

from homcone import (
    BallPen,
    Box,
    Branch,
    CenterOutsideRadius,
    Ellipsoid,
    EuclideanBall,
    L1Ball,
    MaxIterationsExceeded,
    PBall,
    PsiEvaluator,
    Simplex,
    find_alpha_star,
    project_ball_pen,
    project_homogenization,
    project_ice_cream,
    quartic_coefficients,
    reference_trace,
)
from homcone.oracle import sample_members

REFERENCE_ALPHA_STAR = 1.4597189


def fmt8(x):
    return "" if x is None else f"{x:#.8g}"


def fmt_dpsi(x):
    return "" if x is None else f"{x:.2e}"


# Frozen reference trace (23 rows).  Two derivative entries of the upstream
# table (rows 3 and 4, printed there as -1.310e0) are internally inconsistent
# with its own update rule; the recomputed value -1.40e+00 is frozen instead.
FROZEN_TRACE = [
    (1, "3.0000000", "", "5.0000000", "4.10e+00", "", "8.11e+00"),
    (2, "1.5000000", "", "3.0000000", "1.49e-01", "", "4.10e+00"),
    (3, "0.75000000", "1.1250000", "1.5000000", "-3.35e+00", "-1.40e+00", "1.49e-01"),
    (4, "1.1250000", "1.3125000", "1.5000000", "-1.40e+00", "-5.79e-01", "1.49e-01"),
    (5, "1.3125000", "1.4062500", "1.5000000", "-5.79e-01", "-2.04e-01", "1.49e-01"),
    (6, "1.4062500", "1.4531250", "1.5000000", "-2.04e-01", "-2.48e-02", "1.49e-01"),
    (7, "1.4531250", "1.4765625", "1.5000000", "-2.48e-02", "6.29e-02", "1.49e-01"),
    (8, "1.4531250", "1.4648438", "1.4765625", "-2.48e-02", "1.92e-02", "6.29e-02"),
    (9, "1.4531250", "1.4589844", "1.4648438", "-2.48e-02", "-2.76e-03", "1.92e-02"),
    (10, "1.4589844", "1.4619141", "1.4648438", "-2.76e-03", "8.23e-03", "1.92e-02"),
    (11, "1.4589844", "1.4604492", "1.4619141", "-2.76e-03", "2.74e-03", "8.23e-03"),
    (12, "1.4589844", "1.4597168", "1.4604492", "-2.76e-03", "-1.06e-05", "2.74e-03"),
    (13, "1.4597168", "1.4600830", "1.4604492", "-1.06e-05", "1.36e-03", "2.74e-03"),
    (14, "1.4597168", "1.4598999", "1.4600830", "-1.06e-05", "6.77e-04", "1.36e-03"),
    (15, "1.4597168", "1.4598083", "1.4598999", "-1.06e-05", "3.33e-04", "6.77e-04"),
    (16, "1.4597168", "1.4597626", "1.4598083", "-1.06e-05", "1.61e-04", "3.33e-04"),
    (17, "1.4597168", "1.4597397", "1.4597626", "-1.06e-05", "7.53e-05", "1.61e-04"),
    (18, "1.4597168", "1.4597282", "1.4597397", "-1.06e-05", "3.24e-05", "7.53e-05"),
    (19, "1.4597168", "1.4597225", "1.4597282", "-1.06e-05", "1.09e-05", "3.24e-05"),
    (20, "1.4597168", "1.4597197", "1.4597225", "-1.06e-05", "1.65e-07", "1.09e-05"),
    (21, "1.4597168", "1.4597182", "1.4597197", "-1.06e-05", "-5.20e-06", "1.65e-07"),
    (22, "1.4597182", "1.4597189", "1.4597197", "-5.20e-06", "-2.52e-06", "1.65e-07"),
    (23, "1.4597189", "1.4597193", "1.4597197", "-2.52e-06", "-1.18e-06", "1.65e-07"),
]


def format_rows(trace):
    return [
        (
            r.n,
            fmt8(r.alpha),
            fmt8(r.mid),
            fmt8(r.beta),
            fmt_dpsi(r.dpsi_alpha),
            fmt_dpsi(r.dpsi_mid),
            fmt_dpsi(r.dpsi_beta),
        )
        for r in trace
    ]


# ---------------------------------------------------------------------------
# find_alpha_star
# ---------------------------------------------------------------------------

def test_reference_trace_matches_frozen_rows():
    alpha_star, trace = reference_trace()
    assert format_rows(trace) == FROZEN_TRACE
    assert abs(alpha_star - REFERENCE_ALPHA_STAR) < 5e-8


def test_reference_trace_golden_rows_detail():
    _, trace = reference_trace()
    r3 = trace.rows[2]
    assert (fmt8(r3.alpha), fmt8(r3.mid), fmt8(r3.beta)) == (
        "0.75000000",
        "1.1250000",
        "1.5000000",
    )
    assert fmt_dpsi(r3.dpsi_alpha) == "-3.35e+00"
    assert fmt_dpsi(r3.dpsi_beta) == "1.49e-01"
    r12 = trace.rows[11]
    assert fmt8(r12.mid) == "1.4597168"
    assert fmt_dpsi(r12.dpsi_mid) == "-1.06e-05"


def test_pure_bisection_has_no_bracket_moves():
    # psi'(2) < 0 < psi'(4) immediately, so every row carries a midpoint.
    ev = PsiEvaluator(EuclideanBall((0.0, 0.0), 1.0), (3.0, 4.0), 0.0)
    alpha_star, trace = find_alpha_star(ev, 2.0, 4.0, 1e-6, 200)
    assert all(r.mid is not None for r in trace)
    assert alpha_star == pytest.approx(2.5, abs=1e-6)


def test_bisection_agrees_with_ice_cream_closed_form():
    ev = PsiEvaluator(EuclideanBall((0.0, 0.0), 1.0), (3.0, 4.0), 0.0)
    alpha_star, _ = find_alpha_star(ev, 1.0, 2.0, 1e-6, 200)
    assert alpha_star == pytest.approx(2.5, abs=1e-6)


def test_alpha_zero_declared_by_halving():
    # psi' stays positive all the way down, certifying the 0 minimizer.
    ev = PsiEvaluator(EuclideanBall((0.0, 0.0), 2.0), (3.0, 4.0), -20.0)
    alpha_star, trace = find_alpha_star(ev, 1.0, 2.0, 1e-6, 200)
    assert alpha_star == 0.0
    assert all(r.mid is None for r in trace)


def test_max_iterations_exceeded():
    ev = PsiEvaluator(EuclideanBall((0.0, 0.0), 1.0), (3.0, 4.0), 0.0)
    with pytest.raises(MaxIterationsExceeded):
        find_alpha_star(ev, 1e-3, 2e-3, 1e-12, max_iter=3)


def test_trace_bracket_monotonicity():
    _, trace = reference_trace()
    rows = trace.rows
    for r1, r2 in zip(rows, rows[1:]):
        assert r2.alpha > r1.alpha or r2.beta < r1.beta
    widths = [r.beta - r.alpha for r in rows if r.mid is not None]
    for w1, w2 in zip(widths, widths[1:]):
        assert w2 == pytest.approx(0.5 * w1, rel=1e-12)


# ---------------------------------------------------------------------------
# Closed-form fast paths
# ---------------------------------------------------------------------------

def test_ice_cream_ray_branch():
    res = project_ice_cream(1.0, (np.array([3.0, 4.0]), 0.0))
    np.testing.assert_allclose(res.point.y, [1.5, 2.0], atol=1e-12)
    assert res.point.s == pytest.approx(2.5)
    assert res.branch is Branch.CONE_INTERIOR
    ev = PsiEvaluator(EuclideanBall((0.0, 0.0), 1.0), (3.0, 4.0), 0.0)
    alpha_star, _ = find_alpha_star(ev, 1.0, 2.0, 1e-6, 200)
    assert res.alpha_star == pytest.approx(alpha_star, abs=1e-6)


def test_ice_cream_apex_branch():
    res = project_ice_cream(1.0, (np.array([0.0, 0.0]), -1.0))
    np.testing.assert_allclose(res.point.y, [0.0, 0.0])
    assert res.point.s == 0.0
    assert res.branch is Branch.RECESSION


def test_ice_cream_member_branch():
    res = project_ice_cream(2.0, (np.array([1.0, 0.0]), 1.0))
    np.testing.assert_allclose(res.point.y, [1.0, 0.0])
    assert res.point.s == 1.0
    assert res.branch is Branch.ALREADY_IN_K


def test_ball_pen_recession_branch():
    res = project_ball_pen((0.0, 1.0), (np.array([0.0, -2.0]), -3.0))
    np.testing.assert_allclose(res.point.y, [0.0, 0.0])
    assert res.point.s == 0.0
    assert res.branch is Branch.RECESSION


def test_ball_pen_member_branch():
    res = project_ball_pen((0.0, 1.0), (np.array([0.0, 5.0]), 7.0))
    np.testing.assert_allclose(res.point.y, [0.0, 5.0])
    assert res.point.s == 7.0
    assert res.branch is Branch.ALREADY_IN_K


def test_ball_pen_ray_branch():
    res = project_ball_pen((0.0, 1.0), (np.array([4.0, 0.0]), 0.0))
    assert res.alpha_star == pytest.approx(2.0)
    np.testing.assert_allclose(res.point.y, [2.0, 0.0], atol=1e-12)
    assert res.point.s == pytest.approx(2.0)
    # Cross-check against the bracket search.
    pen = BallPen((0.0, 1.0))
    it = project_homogenization(pen, (np.array([4.0, 0.0]), 0.0), force_iterative=True)
    assert np.linalg.norm(res.point.y - it.point.y) <= 1e-5
    assert abs(res.point.s - it.point.s) <= 1e-5


# ---------------------------------------------------------------------------
# project_homogenization
# ---------------------------------------------------------------------------

def test_projection_reference_value():
    ball = EuclideanBall((1.0, 0.0), 1.0)
    res = project_homogenization(ball, ((1.0, 2.0), 1.0), alpha0=3.0, beta0=5.0)
    np.testing.assert_allclose(
        res.point.y, [1.1327162, 1.4226203], rtol=0, atol=1e-6
    )
    assert res.point.s == pytest.approx(1.4597189, abs=1e-6)
    assert res.branch is Branch.CONE_INTERIOR
    assert res.iterations == 23


def test_projection_apex_identity():
    for set_ in (EuclideanBall((0.3, 0.0), 1.0), Simplex(2), BallPen((0.0, 1.0))):
        res = project_homogenization(set_, (np.zeros(2), 0.0))
        np.testing.assert_allclose(res.point.y, np.zeros(2))
        assert res.point.s == 0.0
        assert res.branch is Branch.ALREADY_IN_K


def test_projection_member_shortcut():
    res = project_homogenization(EuclideanBall((0.0, 0.0), 1.0), ((0.5, 0.0), 2.0))
    np.testing.assert_allclose(res.point.y, [0.5, 0.0])
    assert res.point.s == 2.0
    assert res.branch is Branch.ALREADY_IN_K


def test_projection_recession_branch_by_iteration():
    res = project_homogenization(
        EuclideanBall((0.0, 0.0), 2.0), ((3.0, 4.0), -20.0), force_iterative=True
    )
    assert res.branch is Branch.RECESSION
    assert res.alpha_star == 0.0
    np.testing.assert_allclose(res.point.y, [0.0, 0.0])


def test_result_invariants_random():
    rng = np.random.default_rng(31)
    sets = [
        EuclideanBall((0.0, 0.0), 1.5),
        EuclideanBall((0.4, 0.2), 1.0),
        Box((1.0, 0.7)),
        Simplex(2),
        BallPen((0.0, 1.0)),
    ]
    for set_ in sets:
        for _ in range(100):
            p = (rng.uniform(-8, 8, 2), rng.uniform(-8, 8))
            res = project_homogenization(set_, p)
            assert res.point.s == res.alpha_star
            if res.branch is not Branch.ALREADY_IN_K:
                assert (res.branch is Branch.RECESSION) == (res.alpha_star == 0.0)
            assert res.alpha_star >= 0.0


def test_projection_idempotent():
    rng = np.random.default_rng(32)
    sets = [
        EuclideanBall((0.4, 0.2), 1.0),
        Box((1.0, 0.7)),
        L1Ball(1.2),
        Simplex(2),
        BallPen((0.8, 0.6)),
        EuclideanBall((0.0, 0.0), 0.7),
    ]
    for set_ in sets:
        for _ in range(50):
            p = (rng.uniform(-8, 8, 2), rng.uniform(-8, 8))
            first = project_homogenization(set_, p)
            second = project_homogenization(set_, first.point)
            err = math.hypot(
                float(np.linalg.norm(second.point.y - first.point.y)),
                second.point.s - first.point.s,
            )
            assert err <= 1e-7


def test_projection_variational_inequality():
    # Members of K sampled as rho * (c, 1) plus recession directions at
    # height 0; tight accuracy comes from a small bisection width.
    rng = np.random.default_rng(33)
    sets = [
        EuclideanBall((0.4, 0.2), 1.0),
        Box((1.0, 0.7)),
        Simplex(2),
        L1Ball(1.2),
        BallPen((0.0, 1.0)),
    ]
    for set_ in sets:
        members = sample_members(set_, 400, rng)
        rhos = rng.uniform(0.0, 10.0, size=members.shape[0])
        cone_pts = np.column_stack([members * rhos[:, None], rhos])
        try:
            rec_dir = set_.recession_cone()
        except Exception:
            rec_dir = None
        for _ in range(25):
            q = np.append(rng.uniform(-8, 8, 2), rng.uniform(-8, 8))
            res = project_homogenization(set_, (q[:2], q[2]), eps=1e-12)
            if res.branch is Branch.ALREADY_IN_K:
                continue
            pk = np.append(res.point.y, res.point.s)
            gaps = (cone_pts - pk) @ (q - pk)
            assert float(np.max(gaps)) <= 1e-7
            if isinstance(set_, BallPen):
                k = np.append(10.0 * set_.direction, 0.0)
                assert float((k - pk) @ (q - pk)) <= 1e-7


def test_closed_form_matches_iteration():
    rng = np.random.default_rng(34)
    ball = EuclideanBall((0.0, 0.0), 1.0)
    pen = BallPen((0.0, 1.0))
    for set_ in (ball, pen):
        for _ in range(200):
            p = (rng.uniform(-10, 10, 2), rng.uniform(-10, 10))
            fast = project_homogenization(set_, p)
            slow = project_homogenization(set_, p, force_iterative=True)
            err = math.hypot(
                float(np.linalg.norm(fast.point.y - slow.point.y)),
                fast.point.s - slow.point.s,
            )
            assert err <= 1e-5


def test_moreau_decomposition_ball_pair():
    # The polar cone of the cone over B(0, gamma) is the reflected cone over
    # B(0, 1/gamma); the two projections split the point orthogonally.
    rng = np.random.default_rng(35)
    for gamma in (0.5, 1.0, 2.0):
        for _ in range(200):
            y = rng.uniform(-10, 10, 2)
            s = rng.uniform(-10, 10)
            pk = project_ice_cream(gamma, (y, s))
            dual = project_ice_cream(1.0 / gamma, (y, -s))
            m_y, m_s = dual.point.y, -dual.point.s
            np.testing.assert_allclose(pk.point.y + m_y, y, atol=1e-7)
            assert pk.point.s + m_s == pytest.approx(s, abs=1e-7)
            inner = float(pk.point.y @ m_y) + pk.point.s * m_s
            assert abs(inner) <= 1e-7


def test_cone_scaling():
    rng = np.random.default_rng(36)
    sets = [EuclideanBall((0.0, 0.0), 1.5), EuclideanBall((0.4, 0.2), 1.0), Box((1.0, 0.7))]
    for set_ in sets:
        for _ in range(40):
            y = rng.uniform(-5, 5, 2)
            s = rng.uniform(-5, 5)
            lam = rng.uniform(0.2, 4.0)
            base = project_homogenization(set_, (y, s), eps=1e-12)
            scaled = project_homogenization(set_, (lam * y, lam * s), eps=1e-12)
            np.testing.assert_allclose(
                scaled.point.y, lam * base.point.y, atol=1e-7
            )
            assert scaled.point.s == pytest.approx(lam * base.point.s, abs=1e-7)


def test_projection_all_projectable_variants_smoke():
    rng = np.random.default_rng(37)
    sets = [
        EuclideanBall((0.0, 0.0), 1.3),
        EuclideanBall((0.5, -0.3), 1.0),
        Box((0.8, 1.5)),
        L1Ball(1.7),
        PBall(2.0, 1.2),
        PBall(math.inf, 0.9),
        Ellipsoid([[2.0, 0.3], [0.3, 0.8]]),
        Simplex(2),
        BallPen((0.6, 0.8)),
    ]
    for set_ in sets:
        for _ in range(10):
            p = (rng.uniform(-6, 6, 2), rng.uniform(-6, 6))
            res = project_homogenization(set_, p)
            if res.alpha_star > 0:
                assert set_.contains(res.point.y / res.point.s, tol=1e-7)


# ---------------------------------------------------------------------------
# Residual quartic
# ---------------------------------------------------------------------------

def test_quartic_reference_coefficients():
    q = quartic_coefficients((1.0, 0.0), 1.0, (1.0, 2.0), 1.0)
    assert q == (-5.0, -38.0, 44.0, -18.0, 5.0)


def test_quartic_residual_at_reference_alpha():
    q = quartic_coefficients((1.0, 0.0), 1.0, (1.0, 2.0), 1.0)
    ball = EuclideanBall((1.0, 0.0), 1.0)
    res = project_homogenization(ball, ((1.0, 2.0), 1.0), alpha0=3.0, beta0=5.0)
    assert abs(q.residual(res.alpha_star)) < 1e-4


def test_quartic_degenerates_at_origin_center():
    # With the ball centred at 0 the quartic collapses to a quadratic whose
    # positive root is the closed-form minimizer (s + g||y||) / (g^2 + 1).
    y = (3.0, 4.0)
    s = 2.0
    g = 1.5
    q = quartic_coefficients((0.0, 0.0), g, y, s)
    assert q.xi3 == 0.0 and q.xi4 == 0.0
    root = (s + g * 5.0) / (g * g + 1.0)
    assert abs(q.residual(root)) < 1e-9 * max(abs(c) for c in q)


def test_quartic_leading_coefficient_nonnegative():
    rng = np.random.default_rng(38)
    for _ in range(100):
        g = rng.uniform(0.5, 3.0)
        z = rng.uniform(-1, 1, 2)
        z = z * rng.uniform(0.0, g) / max(np.linalg.norm(z), 1e-12)
        q = quartic_coefficients(z, g, rng.uniform(-5, 5, 2), rng.uniform(-5, 5))
        assert q.xi4 >= 0.0


def test_quartic_rejects_center_outside():
    with pytest.raises(CenterOutsideRadius):
        quartic_coefficients((2.0, 0.0), 1.0, (1.0, 1.0), 0.0)
