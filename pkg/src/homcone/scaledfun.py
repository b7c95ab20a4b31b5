"""Scalar functions of the scaling parameter, driven by a set's projector.

For a fixed query (y, s), ``phi(a) = a^2 * dist(y/a, C)^2`` is the squared
distance from y to the scaled set aC, and ``psi(a) = phi(a) + (a - s)^2`` the
squared distance from (y, s) to the slice aC x {a}.  ``psi`` extends to a = 0
through the recession cone of C; the minimizer of the extension determines the
projection onto the homogenization cone (see :mod:`homcone.homproj`).

``phi`` is convex, nonincreasing, and differentiable with

    phi'(a) = -2 a <P_C(y/a), y/a - P_C(y/a)>  <=  0,

so every derivative here costs exactly one projector call.
"""

from __future__ import annotations

import numpy as np

from .errors import CenterOutsideRadius, NegativeAlpha, NonPositiveAlpha
from .sets import as_vector


def _positive(alpha) -> float:
    alpha = float(alpha)
    if not alpha > 0.0:
        raise NonPositiveAlpha("the scaling parameter must be positive")
    return alpha


class PsiEvaluator:
    """phi, psi and their derivatives for one set and one query point (y, s).

    Evaluations are pure and the instance is immutable, so a single evaluator
    may be shared across threads.  At a = 0, ``psi`` needs the recession-cone
    projector of the set; variants without one raise CapabilityMissing rather
    than approximating.
    """

    def __init__(self, set_, y, s):
        self.set = set_
        self.y = as_vector(y, set_.dim)
        self.s = float(s)
        if not np.isfinite(self.s):
            raise ValueError("height must be finite")

    def phi(self, alpha) -> float:
        """Squared distance from y to alpha * C; nonnegative, nonincreasing."""
        alpha = _positive(alpha)
        w = self.y / alpha
        r = w - self.set.project(w)
        return alpha * alpha * float(r @ r)

    def phi_prime(self, alpha) -> float:
        """Analytic derivative of phi; always <= 0."""
        alpha = _positive(alpha)
        w = self.y / alpha
        p = self.set.project(w)
        return -2.0 * alpha * float(p @ (w - p))

    def psi(self, alpha) -> float:
        """phi(alpha) + (alpha - s)^2 for alpha > 0, recession form at 0."""
        alpha = float(alpha)
        if alpha < 0.0:
            raise NegativeAlpha("the scaling parameter must be nonnegative")
        if alpha == 0.0:
            r = self.set.recession_distance(self.y)
            return r * r + self.s * self.s
        d = alpha - self.s
        return self.phi(alpha) + d * d

    def psi_prime(self, alpha) -> float:
        """2 (alpha - s) + phi'(alpha); continuous, nondecreasing on (0, inf)."""
        alpha = _positive(alpha)
        return 2.0 * (alpha - self.s) + self.phi_prime(alpha)


def psi_prime_plus_zero_ball(center, radius, y, s) -> float:
    """Right derivative of psi at 0 for a Euclidean ball, in closed form.

    Equals -2s - 2<center, y> - 2 radius ||y||.  A nonnegative value certifies
    that the minimizer of psi is 0 (recession branch) without any iteration.
    Valid only for balls; other variants have no closed form here.
    """
    z = as_vector(center)
    y = as_vector(y, z.size)
    radius = float(radius)
    if float(np.linalg.norm(z)) > radius + 1e-12:
        raise CenterOutsideRadius("require ||center|| <= radius")
    return -2.0 * float(s) - 2.0 * float(z @ y) - 2.0 * radius * float(np.linalg.norm(y))
