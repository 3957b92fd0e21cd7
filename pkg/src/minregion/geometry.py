"""Problem data, the canonical frame, and the angle quantities built on it.

Every region computation happens in a canonical frame where the minimizer
with the larger strong-convexity parameter sits at ``(-r, 0, ..., 0)`` and
the other one at ``(r, 0, ..., 0)``.  Inside this frame "f1" always means the
more strongly convex function; ``CanonicalFrame.swapped`` records whether
that relabelling exchanged the caller's functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InvalidInput

# points closer than this (times max(1, r)) to a minimizer count as the minimizer
MINIMIZER_TOL = 1e-12
# relative slack allowed when testing d_i <= L / sigma_i
BALL_RTOL = 1e-12


def _as_point(x, name="point"):
    arr = np.array(x, dtype=float).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name} has non-finite entries")
    return arr


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    """The data ``(x1*, x2*, sigma1, sigma2, L)`` that defines the region."""

    x1_star: np.ndarray
    x2_star: np.ndarray
    sigma1: float
    sigma2: float
    L: float

    def __post_init__(self):
        x1 = _as_point(self.x1_star, "x1_star")
        x2 = _as_point(self.x2_star, "x2_star")
        if x1.shape != x2.shape:
            raise InvalidInput("x1_star and x2_star differ in dimension")
        if x1.size < 2:
            raise InvalidInput("dimension must be at least 2")
        for name in ("sigma1", "sigma2", "L"):
            val = float(getattr(self, name))
            if not math.isfinite(val) or val <= 0.0:
                raise InvalidInput(f"{name} must be a positive finite number, got {val!r}")
            object.__setattr__(self, name, val)
        x1.flags.writeable = False
        x2.flags.writeable = False
        object.__setattr__(self, "x1_star", x1)
        object.__setattr__(self, "x2_star", x2)

    @property
    def n(self):
        return self.x1_star.size

    @cached_property
    def frame(self):
        return canonical_frame(self)

    @property
    def r(self):
        return self.frame.r

    @property
    def ordered_sigmas(self):
        """``(sigma_hi, sigma_lo)``: the parameters as seen in the canonical frame."""
        return (self.sigma2, self.sigma1) if self.frame.swapped else (self.sigma1, self.sigma2)

    def with_L(self, L):
        return ProblemInstance(self.x1_star, self.x2_star, self.sigma1, self.sigma2, L)

    @classmethod
    def canonical(cls, r, sigma1, sigma2, L, n=2):
        """Instance whose minimizers already sit at ``(-r, 0, ...)`` and ``(r, 0, ...)``."""
        x1 = np.zeros(n)
        x2 = np.zeros(n)
        x1[0], x2[0] = -r, r
        return cls(x1, x2, sigma1, sigma2, L)


@dataclass(frozen=True, eq=False)
class CanonicalFrame:
    """Orthonormal change of basis ``y = E^T (x - b)``.

    The first column of ``E`` points from the canonical x1* to the canonical
    x2*; ``r`` is half the distance between the minimizers.
    """

    E: np.ndarray
    b: np.ndarray
    r: float
    swapped: bool = False

    def to_canonical(self, x):
        return to_canonical(self, x)

    def from_canonical(self, y):
        return from_canonical(self, y)


def _complete_basis(e1):
    """Orthonormal matrix whose first column is the unit vector ``e1``."""
    n = e1.size
    skip = int(np.argmax(np.abs(e1)))
    cols = [e1]
    for j in range(n):
        if j == skip:
            continue
        v = np.zeros(n)
        v[j] = 1.0
        for _ in range(2):
            for c in cols:
                v = v - np.dot(c, v) * c
        cols.append(v / np.linalg.norm(v))
    return np.column_stack(cols)


def canonical_frame(inst):
    x1, x2 = inst.x1_star, inst.x2_star
    swapped = inst.sigma1 < inst.sigma2
    if swapped:
        x1, x2 = x2, x1
    b = 0.5 * (x1 + x2)
    diff = x2 - x1
    dist = float(np.linalg.norm(diff))
    if dist == 0.0:
        E = np.eye(inst.n)
    else:
        E = _complete_basis(diff / dist)
    E.flags.writeable = False
    b.flags.writeable = False
    return CanonicalFrame(E=E, b=b, r=0.5 * dist, swapped=swapped)


def to_canonical(frame, x):
    x = _as_point(x)
    if x.size != frame.b.size:
        raise InvalidInput(f"expected a point of dimension {frame.b.size}, got {x.size}")
    return frame.E.T @ (x - frame.b)


def from_canonical(frame, y):
    y = _as_point(y)
    if y.size != frame.b.size:
        raise InvalidInput(f"expected a point of dimension {frame.b.size}, got {y.size}")
    return frame.E @ y + frame.b


@dataclass(frozen=True)
class AngleReport:
    """Distances and angles of a canonical point relative to both minimizers.

    Angle fields are NaN when ``defined`` is false, i.e. at a minimizer or
    outside one of the closed balls ``B(x_i*, L / sigma_i)``.
    """

    d1: float
    d2: float
    phi1_t: float = math.nan
    phi2_t: float = math.nan
    alpha1: float = math.nan
    alpha2: float = math.nan
    psi: float = math.nan
    slack: float = math.nan
    defined: bool = False


def _clamped_acos(v):
    return math.acos(min(1.0, max(-1.0, v)))


def angle_report(inst, y):
    """Angles at the canonical point ``y``; see ``AngleReport``."""
    y = _as_point(y)
    s1, s2 = inst.ordered_sigmas
    L, r = inst.L, inst.r
    rho = float(np.linalg.norm(y[1:]))
    d1 = math.hypot(y[0] + r, rho)
    d2 = math.hypot(y[0] - r, rho)
    near = MINIMIZER_TOL * max(1.0, r)
    if d1 <= near or d2 <= near:
        return AngleReport(d1, d2)
    c1, c2 = s1 * d1 / L, s2 * d2 / L
    if c1 > 1.0 + BALL_RTOL or c2 > 1.0 + BALL_RTOL:
        return AngleReport(d1, d2)
    phi1_t = _clamped_acos(c1)
    phi2_t = _clamped_acos(c2)
    alpha1 = math.atan2(rho, y[0] + r)
    alpha2 = math.atan2(rho, y[0] - r)
    psi = math.pi - (alpha2 - alpha1)
    return AngleReport(
        d1=d1,
        d2=d2,
        phi1_t=phi1_t,
        phi2_t=phi2_t,
        alpha1=alpha1,
        alpha2=alpha2,
        psi=psi,
        slack=phi1_t + phi2_t - psi,
        defined=True,
    )


def unit_vectors(inst, y):
    """``(u1, u2)``: unit vectors from each canonical minimizer toward ``y``."""
    y = _as_point(y)
    r = inst.r
    v1 = y.copy()
    v2 = y.copy()
    v1[0] += r
    v2[0] -= r
    return v1 / np.linalg.norm(v1), v2 / np.linalg.norm(v2)


def vector_angle(u, v):
    """Unsigned angle in ``[0, pi]`` between two nonzero vectors."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    # half-angle form stays accurate near 0 and pi
    return 2.0 * math.atan2(float(np.linalg.norm(u - v)), float(np.linalg.norm(u + v)))
