"""Convex set catalog: projectors, support functions, membership, recession cones.

Every cataloged set is a closed convex subset of R^n that contains the origin;
constructors reject parameters violating that standing assumption.  Descriptors
are immutable after construction and every operation is a pure function, so
shared instances are safe to evaluate concurrently.

Not every variant is projectable: some sets exist only for support-function and
polar work and raise :class:`UnsupportedProjection` from :meth:`project`.
"""

from __future__ import annotations

import json
import math

import numpy as np
from scipy.optimize import brentq

from .errors import (
    CapabilityMissing,
    CenterOutsideRadius,
    DimensionMismatch,
    InvalidSetSpec,
    UnsupportedProjection,
)

#: Default absolute tolerance for membership checks.
MEMBERSHIP_TOL = 1e-9


def as_vector(x, dim=None) -> np.ndarray:
    """Validate ``x`` as a finite 1-D float64 vector, optionally of length ``dim``."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("expected a nonempty 1-D real vector")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector entries must be finite")
    if dim is not None and v.size != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {v.size}")
    return v


# ---------------------------------------------------------------------------
# Cones
# ---------------------------------------------------------------------------

class Cone:
    """Nonempty closed convex cone with an exact projector."""

    dim: int

    def project(self, x) -> np.ndarray:
        raise NotImplementedError

    def contains(self, x, tol=MEMBERSHIP_TOL) -> bool:
        x = as_vector(x, self.dim)
        return float(np.linalg.norm(x - self.project(x))) <= tol


class ZeroCone(Cone):
    """The trivial cone {0}, the recession cone of every bounded set."""

    def __init__(self, dim):
        self.dim = int(dim)

    def project(self, x):
        as_vector(x, self.dim)
        return np.zeros(self.dim)


class FullSpaceCone(Cone):
    """The whole space."""

    def __init__(self, dim):
        self.dim = int(dim)

    def project(self, x):
        return as_vector(x, self.dim).copy()


class Ray(Cone):
    """The half line R+ d spanned by a unit direction d."""

    def __init__(self, direction):
        d = as_vector(direction)
        n = float(np.linalg.norm(d))
        if abs(n - 1.0) > 1e-9:
            raise ValueError("ray direction must be a unit vector")
        self.direction = d / n
        self.dim = d.size

    def project(self, x):
        x = as_vector(x, self.dim)
        return max(0.0, float(self.direction @ x)) * self.direction


# ---------------------------------------------------------------------------
# Set variants
# ---------------------------------------------------------------------------

class ConvexSet:
    """Base class for the cataloged sets.

    Subclasses define ``dim``, membership, the support function, and, where
    available, an exact projector.  Bounded variants inherit the trivial
    recession cone; unbounded ones either override :meth:`recession_cone` or
    leave the capability missing.
    """

    dim: int
    bounded: bool = True

    def _vec(self, x):
        return as_vector(x, self.dim)

    def contains(self, x, tol=MEMBERSHIP_TOL) -> bool:
        raise NotImplementedError

    def support(self, y) -> float:
        """Support function sup over members c of <c, y>; may be +inf."""
        raise NotImplementedError

    def project(self, x) -> np.ndarray:
        raise UnsupportedProjection(
            f"{type(self).__name__} is cataloged for support-function and "
            "polar work only and has no projector"
        )

    def recession_cone(self) -> Cone:
        if self.bounded:
            return ZeroCone(self.dim)
        raise CapabilityMissing(
            f"{type(self).__name__} does not expose a recession-cone projector"
        )

    def project_recession(self, x) -> np.ndarray:
        return self.recession_cone().project(self._vec(x))

    def recession_distance(self, y) -> float:
        y = self._vec(y)
        return float(np.linalg.norm(y - self.project_recession(y)))


class EuclideanBall(ConvexSet):
    """Ball {x : ||x - center|| <= radius} with ||center|| <= radius."""

    def __init__(self, center, radius):
        self.center = as_vector(center)
        self.radius = float(radius)
        if not (self.radius > 0.0):
            raise ValueError("radius must be positive")
        if float(np.linalg.norm(self.center)) > self.radius + 1e-12:
            raise CenterOutsideRadius(
                "the ball must contain the origin: require ||center|| <= radius"
            )
        self.dim = self.center.size

    def __repr__(self):
        return f"EuclideanBall(center={self.center.tolist()}, radius={self.radius})"

    def contains(self, x, tol=MEMBERSHIP_TOL):
        r = self._vec(x) - self.center
        return float(np.linalg.norm(r)) <= self.radius + tol

    def project(self, x):
        x = self._vec(x)
        r = x - self.center
        return self.center + self.radius * r / max(float(np.linalg.norm(r)), self.radius)

    def support(self, y):
        y = self._vec(y)
        return float(self.center @ y) + self.radius * float(np.linalg.norm(y))


class Box(ConvexSet):
    """Axis-aligned box {x : |x_i| <= halfwidths_i}."""

    def __init__(self, halfwidths):
        b = as_vector(halfwidths)
        if np.any(b < 0.0):
            raise ValueError("halfwidths must be nonnegative")
        self.halfwidths = b
        self.dim = b.size

    def __repr__(self):
        return f"Box(halfwidths={self.halfwidths.tolist()})"

    def contains(self, x, tol=MEMBERSHIP_TOL):
        return bool(np.all(np.abs(self._vec(x)) <= self.halfwidths + tol))

    def project(self, x):
        return np.clip(self._vec(x), -self.halfwidths, self.halfwidths)

    def support(self, y):
        return float(self.halfwidths @ np.abs(self._vec(y)))


def _simplex_threshold(v, target):
    """Shift so that sum(max(v - theta, 0)) equals target; assumes the
    unshifted positive part already exceeds target."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - target
    j = np.arange(1, u.size + 1)
    rho = np.nonzero(u - css / j > 0.0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


class L1Ball(ConvexSet):
    """Cross-polytope {x : sum |x_i| <= radius}."""

    def __init__(self, radius, dim=2):
        self.radius = float(radius)
        if not (self.radius > 0.0):
            raise ValueError("radius must be positive")
        self.dim = int(dim)
        if self.dim < 1:
            raise ValueError("dimension must be positive")

    def __repr__(self):
        return f"L1Ball(radius={self.radius}, dim={self.dim})"

    def contains(self, x, tol=MEMBERSHIP_TOL):
        return float(np.sum(np.abs(self._vec(x)))) <= self.radius + tol

    def project(self, x):
        x = self._vec(x)
        if float(np.sum(np.abs(x))) <= self.radius:
            return x.copy()
        return np.sign(x) * _simplex_threshold(np.abs(x), self.radius)

    def support(self, y):
        return self.radius * float(np.max(np.abs(self._vec(y))))


class PBall(ConvexSet):
    """p-norm ball {x : ||x||_p <= radius} for p > 1 (p = inf allowed).

    The support function is the dual q-norm for every p; the projector is
    implemented only for p = 2 and p = inf.
    """

    def __init__(self, p, radius, dim=2):
        p = float(p)
        if not (p > 1.0):
            raise ValueError("p must exceed 1 (use L1Ball for p = 1)")
        self.p = p
        self.q = 1.0 if math.isinf(p) else p / (p - 1.0)
        self.radius = float(radius)
        if not (self.radius > 0.0):
            raise ValueError("radius must be positive")
        self.dim = int(dim)
        if self.dim < 1:
            raise ValueError("dimension must be positive")

    def __repr__(self):
        return f"PBall(p={self.p}, radius={self.radius}, dim={self.dim})"

    @staticmethod
    def _pnorm(x, p):
        if math.isinf(p):
            return float(np.max(np.abs(x)))
        return float(np.sum(np.abs(x) ** p) ** (1.0 / p))

    def contains(self, x, tol=MEMBERSHIP_TOL):
        return self._pnorm(self._vec(x), self.p) <= self.radius + tol

    def project(self, x):
        x = self._vec(x)
        if self.p == 2.0:
            return self.radius * x / max(float(np.linalg.norm(x)), self.radius)
        if math.isinf(self.p):
            return np.clip(x, -self.radius, self.radius)
        raise UnsupportedProjection(
            "p-ball projection is implemented for p in {1, 2, inf} only"
        )

    def support(self, y):
        return self.radius * self._pnorm(self._vec(y), self.q)


class Ellipsoid(ConvexSet):
    """Ellipsoid {x : <x, Qx> <= 1} for a symmetric positive definite Q."""

    def __init__(self, q_matrix):
        q = np.asarray(q_matrix, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise ValueError("Q must be a square matrix")
        if not np.all(np.isfinite(q)):
            raise ValueError("Q entries must be finite")
        if not np.allclose(q, q.T, rtol=1e-10, atol=1e-12):
            raise ValueError("Q must be symmetric")
        q = 0.5 * (q + q.T)
        w, v = np.linalg.eigh(q)
        if w[0] <= 0.0:
            raise ValueError("Q must be positive definite")
        self.q_matrix = q
        self._evals = w
        self._evecs = v
        self.dim = q.shape[0]

    def __repr__(self):
        return f"Ellipsoid(q={self.q_matrix.tolist()})"

    def _quad(self, x):
        u = self._evecs.T @ x
        return float(np.sum(self._evals * u * u))

    def contains(self, x, tol=MEMBERSHIP_TOL):
        return self._quad(self._vec(x)) <= 1.0 + tol

    def project(self, x):
        x = self._vec(x)
        if self._quad(x) <= 1.0:
            return x.copy()
        w = self._evals
        u = self._evecs.T @ x

        # Secular equation for the multiplier of the active quadratic constraint.
        def g(lam):
            t = u / (1.0 + lam * w)
            return float(np.sum(w * t * t)) - 1.0

        hi = 1.0
        while g(hi) > 0.0:
            hi *= 4.0
        lam = brentq(g, 0.0, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
        return self._evecs @ (u / (1.0 + lam * w))

    def support(self, y):
        u = self._evecs.T @ self._vec(y)
        return float(math.sqrt(np.sum(u * u / self._evals)))


class Simplex(ConvexSet):
    """The corner simplex {x : x_i >= 0, sum x_i <= 1}."""

    def __init__(self, dim):
        self.dim = int(dim)
        if self.dim < 1:
            raise ValueError("dimension must be positive")

    def __repr__(self):
        return f"Simplex(dim={self.dim})"

    def contains(self, x, tol=MEMBERSHIP_TOL):
        x = self._vec(x)
        return bool(np.min(x) >= -tol and float(np.sum(x)) <= 1.0 + tol)

    def project(self, x):
        x = self._vec(x)
        w = np.maximum(x, 0.0)
        if float(np.sum(w)) <= 1.0:
            return w
        return _simplex_threshold(x, 1.0)

    def support(self, y):
        return max(0.0, float(np.max(self._vec(y))))


class ShiftedUnitBall(ConvexSet):
    """Unit ball translated so the origin lies on its boundary: B(0,1) - d,
    with d a unit vector.  Cataloged for polar work; no projector."""

    def __init__(self, d):
        d = as_vector(d)
        n = float(np.linalg.norm(d))
        if abs(n - 1.0) > 1e-9:
            raise ValueError("d must be a unit vector")
        self.d = d / n
        self.dim = d.size

    def __repr__(self):
        return f"ShiftedUnitBall(d={self.d.tolist()})"

    def contains(self, x, tol=MEMBERSHIP_TOL):
        return float(np.linalg.norm(self._vec(x) + self.d)) <= 1.0 + tol

    def support(self, y):
        y = self._vec(y)
        return float(np.linalg.norm(y)) - float(self.d @ y)


class BallPen(ConvexSet):
    """Unit ball plus a ray: B(0,1) + R+ d.  Unbounded, fully projectable."""

    bounded = False

    def __init__(self, direction):
        self._ray = Ray(direction)
        self.direction = self._ray.direction
        self.dim = self._ray.dim

    def __repr__(self):
        return f"BallPen(direction={self.direction.tolist()})"

    def recession_cone(self):
        return self._ray

    def _ray_residual(self, x):
        r = x - self._ray.project(x)
        return r, float(np.linalg.norm(r))

    def contains(self, x, tol=MEMBERSHIP_TOL):
        _, dr = self._ray_residual(self._vec(x))
        return dr <= 1.0 + tol

    def project(self, x):
        x = self._vec(x)
        r, dr = self._ray_residual(x)
        if dr <= 1.0:
            return x.copy()
        return (x - r) + r / dr

    def support(self, y):
        y = self._vec(y)
        if float(self.direction @ y) <= 0.0:
            return float(np.linalg.norm(y))
        return math.inf


class BallPlusHalfAxisStrip(ConvexSet):
    """2-D union of the closed unit disc and the half strip |x1| <= 1, x2 >= 0.

    Coincides with B(0,1) + R+ e2, which is the decomposition behind its polar
    description.  Cataloged for polar work; no projector.
    """

    bounded = False
    dim = 2

    def __init__(self):
        self._ray = Ray((0.0, 1.0))

    def __repr__(self):
        return "BallPlusHalfAxisStrip()"

    def recession_cone(self):
        return self._ray

    def contains(self, x, tol=MEMBERSHIP_TOL):
        x = self._vec(x)
        in_disc = float(np.linalg.norm(x)) <= 1.0 + tol
        in_strip = abs(x[0]) <= 1.0 + tol and x[1] >= -tol
        return bool(in_disc or in_strip)

    def support(self, y):
        y = self._vec(y)
        if y[1] <= 0.0:
            return float(np.linalg.norm(y))
        return math.inf


class Hyperbolic(ConvexSet):
    """2-D region below a hyperbola branch: x1 <= 1 - sqrt(1 + x2^2).

    Cataloged for support-function and polar work; no projector and no
    recession-cone projector.
    """

    bounded = False
    dim = 2

    def __repr__(self):
        return "Hyperbolic()"

    def contains(self, x, tol=MEMBERSHIP_TOL):
        x = self._vec(x)
        return bool(x[0] <= 1.0 - math.hypot(1.0, x[1]) + tol)

    def support(self, y):
        y = self._vec(y)
        if y[0] < abs(y[1]):
            return math.inf
        return float(y[0] - math.sqrt(max(y[0] * y[0] - y[1] * y[1], 0.0)))


# ---------------------------------------------------------------------------
# Module-level operations
# ---------------------------------------------------------------------------

def project(set_, x):
    """Nearest point of the set to x."""
    return set_.project(x)


def support_function(set_, y):
    """sup over members c of <c, y>; may return math.inf, never -inf."""
    return set_.support(y)


def project_recession(set_, x):
    """Projection of x onto the recession cone of the set."""
    return set_.project_recession(x)


def recession_distance(set_, y):
    """Distance from y to the recession cone; zero iff y is a recession direction."""
    return set_.recession_distance(y)


def contains(set_, x, tol=MEMBERSHIP_TOL):
    """Membership test derived from the set's defining inequalities."""
    return set_.contains(x, tol)


# ---------------------------------------------------------------------------
# JSON set specifications
# ---------------------------------------------------------------------------

def _parse_p(value):
    if isinstance(value, str):
        if value.lower() in ("inf", "infinity"):
            return math.inf
        raise InvalidSetSpec(f"unrecognized p value {value!r}")
    return float(value)


_SPEC_BUILDERS = {
    "euclidean_ball": (
        {"center", "radius"},
        lambda o: EuclideanBall(o["center"], o["radius"]),
    ),
    "ball_pen": ({"direction"}, lambda o: BallPen(o["direction"])),
    "box": ({"halfwidths"}, lambda o: Box(o["halfwidths"])),
    "simplex": ({"dim"}, lambda o: Simplex(o["dim"])),
    "l1_ball": (
        {"radius"},
        lambda o: L1Ball(o["radius"], o.get("dim", 2)),
    ),
    "p_ball": (
        {"p", "radius"},
        lambda o: PBall(_parse_p(o["p"]), o["radius"], o.get("dim", 2)),
    ),
    "ellipsoid": ({"q"}, lambda o: Ellipsoid(o["q"])),
    "shifted_unit_ball": ({"d"}, lambda o: ShiftedUnitBall(o["d"])),
    "ball_plus_strip": (set(), lambda o: BallPlusHalfAxisStrip()),
    "hyperbolic": (set(), lambda o: Hyperbolic()),
}

# Optional keys accepted in addition to the required ones.
_SPEC_OPTIONAL = {"l1_ball": {"dim"}, "p_ball": {"dim"}}


def set_from_spec(spec) -> ConvexSet:
    """Build a set from its JSON object form (a dict or JSON text).

    Unknown types and unknown keys are rejected with :class:`InvalidSetSpec`.
    """
    if isinstance(spec, (str, bytes)):
        try:
            obj = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise InvalidSetSpec(f"invalid JSON: {exc}") from exc
    else:
        obj = spec
    if not isinstance(obj, dict):
        raise InvalidSetSpec("set spec must be a JSON object")
    kind = obj.get("type")
    if kind not in _SPEC_BUILDERS:
        raise InvalidSetSpec(f"unknown set type {kind!r}")
    required, builder = _SPEC_BUILDERS[kind]
    allowed = {"type"} | required | _SPEC_OPTIONAL.get(kind, set())
    extra = set(obj) - allowed
    if extra:
        raise InvalidSetSpec(f"unknown keys for {kind}: {sorted(extra)}")
    missing = required - set(obj)
    if missing:
        raise InvalidSetSpec(f"missing keys for {kind}: {sorted(missing)}")
    try:
        return builder(obj)
    except (TypeError, ValueError, CenterOutsideRadius) as exc:
        raise InvalidSetSpec(f"bad parameters for {kind}: {exc}") from exc
