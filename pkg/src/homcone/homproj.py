"""Projection onto the homogenization cone K = cl cone(C x {1}).

The unique minimizer alpha* >= 0 of psi (see :mod:`homcone.scaledfun`)
determines the projection:

    P_K(y, s) = (P_rec(y), 0)                       if alpha* = 0,
                (alpha* P_C(y / alpha*), alpha*)    if alpha* > 0.

alpha* is located by a bisection on the monotone derivative psi', preceded by
a bracket-expansion phase (halve the left endpoint while psi' is positive
there, double the right endpoint while psi' is negative there).  Euclidean
balls centred at the origin and ball-pen sets skip the iteration entirely
through exact piecewise formulas.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import CenterOutsideRadius, MaxIterationsExceeded
from .scaledfun import PsiEvaluator
from .sets import MEMBERSHIP_TOL, BallPen, EuclideanBall, Ray, as_vector


class Branch(str, enum.Enum):
    """Which case of the projection formula produced the result."""

    ALREADY_IN_K = "already_in_k"
    RECESSION = "recession"
    CONE_INTERIOR = "cone_interior"


class ConePoint(NamedTuple):
    """A point (y, s) of X x R, the argument of the cone projector."""

    y: np.ndarray
    s: float


class TraceRow(NamedTuple):
    """One outer step of the bracket search.

    Bracket-move steps carry no midpoint; bisection steps record the midpoint
    and its derivative value.
    """

    n: int
    alpha: float
    mid: Optional[float]
    beta: float
    dpsi_alpha: float
    dpsi_mid: Optional[float]
    dpsi_beta: float


@dataclass
class BisectionTrace:
    """Ordered rows of the bracket search, one per outer step."""

    rows: list

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)


@dataclass
class ProjectionResult:
    alpha_star: float
    point: ConePoint
    branch: Branch
    iterations: int
    trace: Optional[BisectionTrace] = None


class QuarticCoefficients(NamedTuple):
    """Coefficients of the residual quartic for the off-centre ball case."""

    xi0: float
    xi1: float
    xi2: float
    xi3: float
    xi4: float

    def residual(self, alpha) -> float:
        a = float(alpha)
        return self.xi0 + a * (self.xi1 + a * (self.xi2 + a * (self.xi3 + a * self.xi4)))


def _as_cone_point(set_, p) -> ConePoint:
    if isinstance(p, ConePoint):
        return ConePoint(as_vector(p.y, set_.dim), float(p.s))
    y, s = p
    return ConePoint(as_vector(y, set_.dim), float(s))


# ---------------------------------------------------------------------------
# Bracket search on psi'
# ---------------------------------------------------------------------------

def find_alpha_star(ev, alpha0=1.0, beta0=2.0, eps=1e-6, max_iter=200,
                    zero_tol=1e-12, alpha_floor=1e-12):
    """Locate the minimizer of psi by bisection on its monotone derivative.

    ``ev`` needs only a ``psi_prime(alpha)`` method.  Returns
    ``(alpha_star, trace)``.  ``alpha_star`` is the left endpoint of the final
    bracket (width below ``eps``), or the midpoint when the derivative hits
    zero to within ``zero_tol``, or exactly 0.0 when the left endpoint was
    halved below ``alpha_floor`` with the derivative still positive, which
    certifies the recession branch because psi' is nondecreasing.

    The termination check runs after the row is recorded, so the final
    bracket appears in the trace.
    """
    alpha0 = float(alpha0)
    beta0 = float(beta0)
    if not 0.0 < alpha0 < beta0:
        raise ValueError("require 0 < alpha0 < beta0")
    if not eps > 0.0:
        raise ValueError("eps must be positive")

    a, b = alpha0, beta0
    da = ev.psi_prime(a)
    db = ev.psi_prime(b)
    rows = []
    n = 0
    while True:
        n += 1
        if n > max_iter:
            raise MaxIterationsExceeded(
                f"bracket search did not stabilize in {max_iter} steps"
            )
        if da < 0.0 < db:
            mid = 0.5 * (a + b)
            dm = ev.psi_prime(mid)
            rows.append(TraceRow(n, a, mid, b, da, dm, db))
            if b - a < eps:
                return a, BisectionTrace(rows)
            if abs(dm) < zero_tol:
                return mid, BisectionTrace(rows)
            if dm < 0.0:
                a, da = mid, dm
            else:
                b, db = mid, dm
        else:
            rows.append(TraceRow(n, a, None, b, da, None, db))
            if abs(da) < zero_tol:
                return a, BisectionTrace(rows)
            if abs(db) < zero_tol:
                return b, BisectionTrace(rows)
            if da > 0.0:
                b, db = a, da
                a = 0.5 * a
                if a < alpha_floor:
                    return 0.0, BisectionTrace(rows)
                da = ev.psi_prime(a)
            else:
                a, da = b, db
                b = 2.0 * b
                db = ev.psi_prime(b)


# ---------------------------------------------------------------------------
# Closed-form fast paths
# ---------------------------------------------------------------------------

def project_ice_cream(gamma, p) -> ProjectionResult:
    """Exact projection onto the cone over a ball of radius gamma centred at 0.

    Piecewise: the identity where ||y|| <= gamma s, the apex where
    gamma ||y|| <= -s, and otherwise the ray point with
    alpha* = (s + gamma ||y||) / (1 + gamma^2).
    """
    gamma = float(gamma)
    if not gamma > 0.0:
        raise ValueError("gamma must be positive")
    y = as_vector(p[0])
    s = float(p[1])
    ny = float(np.linalg.norm(y))
    if ny <= gamma * s:
        return ProjectionResult(s, ConePoint(y.copy(), s), Branch.ALREADY_IN_K, 0)
    if gamma * ny <= -s:
        return ProjectionResult(0.0, ConePoint(np.zeros_like(y), 0.0), Branch.RECESSION, 0)
    rho = (s + gamma * ny) / (1.0 + gamma * gamma)
    return ProjectionResult(
        rho, ConePoint((rho * gamma / ny) * y, rho), Branch.CONE_INTERIOR, 0
    )


def project_ball_pen(direction, p) -> ProjectionResult:
    """Exact projection onto the homogenization of B(0,1) + R+ d.

    The case split runs on delta = dist(y, ray) against -s and s: recession
    branch when delta <= -s, the identity-height branch when delta <= s, and
    the averaged branch alpha* = (s + delta)/2 otherwise.
    """
    ray = Ray(direction)
    y = as_vector(p[0], ray.dim)
    s = float(p[1])
    on_ray = ray.project(y)
    res = y - on_ray
    delta = float(np.linalg.norm(res))
    if delta <= -s:
        branch = Branch.ALREADY_IN_K if s == 0.0 else Branch.RECESSION
        return ProjectionResult(0.0, ConePoint(on_ray, 0.0), branch, 0)
    if delta <= s:
        # Here dist(y/s, ray) <= 1, so y/s is already a member and the
        # projected point reproduces (y, s).
        return ProjectionResult(s, ConePoint(y.copy(), s), Branch.ALREADY_IN_K, 0)
    alpha = 0.5 * (s + delta)
    c = _ball_pen_member_projection(ray, y / alpha)
    return ProjectionResult(alpha, ConePoint(alpha * c, alpha), Branch.CONE_INTERIOR, 0)


def _ball_pen_member_projection(ray, x):
    r = x - ray.project(x)
    dr = float(np.linalg.norm(r))
    if dr <= 1.0:
        return x.copy()
    return (x - r) + r / dr


# ---------------------------------------------------------------------------
# General projection
# ---------------------------------------------------------------------------

def _in_cone(set_, p, tol) -> bool:
    """Exact-arithmetic membership of (y, s) in K via the disjoint split
    rays-over-C versus recession-at-height-0."""
    y, s = p
    if s < -1e-12:
        return False
    if s <= 1e-12:
        return set_.recession_distance(y) <= tol
    return set_.contains(y / s, tol)


def project_homogenization(set_, p, alpha0=1.0, beta0=2.0, eps=1e-6, max_iter=200,
                           force_iterative=False, keep_trace=False,
                           tol=MEMBERSHIP_TOL) -> ProjectionResult:
    """Project (y, s) onto the homogenization cone of the set.

    Dispatch: origin-centred Euclidean balls use the exact ice-cream formula
    and ball pens their exact piecewise formula; every other projectable
    variant (including off-centre balls) runs the derivative bisection.
    ``force_iterative`` bypasses the fast paths and the membership shortcut so
    the iterative route can be compared against the closed forms.
    """
    p = _as_cone_point(set_, p)
    if not force_iterative:
        if isinstance(set_, EuclideanBall) and not np.any(set_.center):
            return project_ice_cream(set_.radius, p)
        if isinstance(set_, BallPen):
            return project_ball_pen(set_.direction, p)
        if _in_cone(set_, p, tol):
            s_star = p.s if p.s > 0.0 else 0.0
            return ProjectionResult(
                s_star, ConePoint(p.y.copy(), s_star), Branch.ALREADY_IN_K, 0
            )
    ev = PsiEvaluator(set_, p.y, p.s)
    alpha_star, trace = find_alpha_star(ev, alpha0, beta0, eps, max_iter)
    iterations = len(trace)
    kept = trace if keep_trace else None
    if alpha_star == 0.0:
        y_rec = set_.project_recession(p.y)
        return ProjectionResult(
            0.0, ConePoint(y_rec, 0.0), Branch.RECESSION, iterations, kept
        )
    c = set_.project(p.y / alpha_star)
    return ProjectionResult(
        alpha_star,
        ConePoint(alpha_star * c, alpha_star),
        Branch.CONE_INTERIOR,
        iterations,
        kept,
    )


# ---------------------------------------------------------------------------
# Residual quartic for the off-centre ball
# ---------------------------------------------------------------------------

def quartic_coefficients(center, radius, y, s) -> QuarticCoefficients:
    """Coefficients (xi0..xi4) of the quartic that alpha* satisfies for a ball
    not centred at the origin (outside-the-ball case).

    The quartic arises from squaring the stationarity equation, which can
    introduce spurious roots; it is therefore used only as a residual check,
    never solved for alpha*.
    """
    z = as_vector(center)
    y = as_vector(y, z.size)
    g = float(radius)
    s = float(s)
    nz = float(np.linalg.norm(z))
    if nz > g + 1e-12:
        raise CenterOutsideRadius("require ||center|| <= radius")
    zy = float(z @ y)
    ny2 = float(y @ y)
    nz2 = float(z @ z)
    g2 = g * g
    u = s + zy
    k = g2 + nz2 + 1.0
    xi0 = u * u * ny2 - g2 * ny2 * ny2
    xi1 = -2.0 * u * k * ny2 - 2.0 * zy * u * u + 6.0 * g2 * ny2 * zy
    xi2 = (
        -4.0 * g2 * ny2 * nz2
        - 9.0 * g2 * zy * zy
        + k * k * ny2
        + u * u * nz2
        + 4.0 * k * u * zy
    )
    xi3 = 12.0 * g2 * zy * nz2 - 2.0 * k * u * nz2 - 2.0 * k * k * zy
    xi4 = nz2 * (1.0 + (g + nz) ** 2) * (1.0 + (g - nz) ** 2)
    return QuarticCoefficients(xi0, xi1, xi2, xi3, xi4)


# ---------------------------------------------------------------------------
# Built-in reference instance and its trace
# ---------------------------------------------------------------------------

#: Worked instance behind the bundled reference trace: the disc centred at
#: (1, 0) with radius 1, query point ((1, 2), 1), bracket [3, 5], eps 1e-6.
REFERENCE_CENTER = (1.0, 0.0)
REFERENCE_RADIUS = 1.0
REFERENCE_QUERY = ((1.0, 2.0), 1.0)
REFERENCE_BRACKET = (3.0, 5.0)
REFERENCE_EPS = 1e-6


class _RadialBallDerivative:
    """psi' for a ball, evaluated with the outside-the-ball radial expression
    on both branches.

    The bundled reference trace was generated under this convention.  It
    differs from the projector-based derivative only where y/alpha lies inside
    the scaled ball (there the true derivative of phi is zero); the sign, and
    hence the bracket decisions, agree on the reference instance.
    """

    def __init__(self, center, radius, y, s):
        self.z = as_vector(center)
        self.radius = float(radius)
        self.y = as_vector(y, self.z.size)
        self.s = float(s)

    def psi_prime(self, alpha):
        alpha = float(alpha)
        w = self.y - alpha * self.z
        nw = float(np.linalg.norm(w))
        slope = float(self.z @ w) + self.radius * nw
        return -2.0 * (1.0 - alpha * self.radius / nw) * slope + 2.0 * (alpha - self.s)


def reference_trace():
    """Recompute the 23-row reference bisection trace; returns (alpha*, trace)."""
    y, s = REFERENCE_QUERY
    ev = _RadialBallDerivative(REFERENCE_CENTER, REFERENCE_RADIUS, y, s)
    return find_alpha_star(ev, *REFERENCE_BRACKET, eps=REFERENCE_EPS, max_iter=200)
