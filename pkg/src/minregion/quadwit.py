"""Quadratic functions and the explicit witnesses that certify region points.

``construct_quadratic`` builds a quadratic whose minimizer is ``x_star``,
whose smallest Hessian eigenvalue is exactly ``sigma`` and whose gradient at
``x0`` is ``g``.  A ``WitnessPair`` combines two such quadratics with opposite
gradients at a point, so that point minimizes their sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InsufficientMargin, Infeasible, InvalidInput, NotInInner, SingularSystem
from .geometry import _as_point, _complete_basis, angle_report, to_canonical
from .linalg import min_eigenvalue
from .region import TAU_ANGLE, inner_point, regime, tau_r

# open-endpoint margin on the admissible angle
ANGLE_EPS = 1e-12
# relative tolerance that recognises the boundary case sigma * d = ||g||, angle 0
EQUALITY_RTOL = 1e-10
# below this |v2| / d the closed form divides by a tiny number; rotate instead
_V2_MIN = 1e-3
MIN_MARGIN = 1e-6


@dataclass(frozen=True, eq=False)
class QuadraticFunction:
    """``f(x) = 0.5 x^T Q x + b^T x + c``."""

    Q: np.ndarray
    b: np.ndarray
    c: float = 0.0

    def __post_init__(self):
        Q = np.array(self.Q, dtype=float)
        b = _as_point(self.b, "b")
        if Q.shape != (b.size, b.size):
            raise InvalidInput(f"Q has shape {Q.shape} but b has length {b.size}")
        scale = max(1.0, float(np.abs(Q).max()))
        if np.abs(Q - Q.T).max() > 1e-12 * scale:
            raise InvalidInput("Q is not symmetric")
        Q = 0.5 * (Q + Q.T)
        Q.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", float(self.c))

    @property
    def n(self):
        return self.b.size

    def _check(self, x):
        x = _as_point(x)
        if x.size != self.n:
            raise InvalidInput(f"expected a point of dimension {self.n}, got {x.size}")
        return x

    def eval(self, x):
        x = self._check(x)
        return float(0.5 * x @ self.Q @ x + self.b @ x + self.c)

    __call__ = eval

    def grad(self, x):
        x = self._check(x)
        return self.Q @ x + self.b

    def minimizer(self):
        return np.linalg.solve(self.Q, -self.b)

    def min_eig(self):
        return min_eigenvalue(self.Q)

    def to_dict(self):
        return {"q": self.Q.tolist(), "b": self.b.tolist(), "c": self.c}

    @classmethod
    def from_dict(cls, d):
        return cls(np.array(d["q"]), np.array(d["b"]), d.get("c", 0.0))

    @classmethod
    def centered(cls, Q, x_star):
        """Quadratic with Hessian ``Q``, minimizer ``x_star`` and minimum value 0."""
        Q = np.asarray(Q, dtype=float)
        x_star = _as_point(x_star)
        return cls(Q, -Q @ x_star, 0.5 * float(x_star @ Q @ x_star))


def sum_minimizer(f1, f2):
    """Minimizer of ``f1 + f2``."""
    A = f1.Q + f2.Q
    rhs = -(f1.b + f2.b)
    try:
        x = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem("Q1 + Q2 is singular") from exc
    if not np.all(np.isfinite(x)) or np.linalg.cond(A) > 1e14:
        raise SingularSystem("Q1 + Q2 is numerically singular")
    return x


@dataclass(frozen=True)
class AngleInterval:
    """Admissible angles between the gradient at ``x0`` and ``x0 - x_star``.

    ``kind`` is "interval" for ``[0, hi)``, "degenerate" for ``{0}`` and
    "empty" when no gradient of norm at most L can exist.
    """

    kind: str
    hi: float = 0.0

    def contains(self, angle):
        if self.kind == "interval":
            return 0.0 <= angle < self.hi
        if self.kind == "degenerate":
            return angle == 0.0
        return False


def admissible_angles(x_star, sigma, L, x0):
    d = float(np.linalg.norm(_as_point(x0) - _as_point(x_star)))
    if d == 0.0:
        raise InvalidInput("x0 coincides with x_star")
    c = sigma * d / L
    if abs(c - 1.0) <= EQUALITY_RTOL:
        return AngleInterval("degenerate")
    if c > 1.0:
        return AngleInterval("empty")
    return AngleInterval("interval", math.acos(c))


def _plane_matrix(d, gnorm, phi, sigma):
    """2x2 matrix for ``v = (d, 0)`` and a gradient at signed angle ``phi``."""
    lh = gnorm / d
    lc, ls = lh * math.cos(phi), lh * math.sin(phi)
    return np.array([[lc, ls], [ls, sigma + ls * ls / (lc - sigma)]])


def _check_feasible(d, gnorm, phi, sigma):
    """Returns True for the boundary case that forces ``Q = sigma I``."""
    if d == 0.0:
        if gnorm == 0.0:
            return True
        raise Infeasible("ii", "nonzero gradient requested at the minimizer")
    if sigma * d > gnorm * (1.0 + EQUALITY_RTOL):
        raise Infeasible("i", f"||x0 - x*|| = {d:.6g} exceeds ||g|| / sigma = {gnorm / sigma:.6g}")
    if abs(sigma * d - gnorm) <= EQUALITY_RTOL * gnorm:
        if abs(phi) <= EQUALITY_RTOL:
            return True
        raise Infeasible("ii", "boundary distance requires the gradient to point along x0 - x*")
    if abs(phi) >= math.acos(sigma * d / gnorm) - ANGLE_EPS:
        raise Infeasible("ii", f"gradient angle {abs(phi):.6g} is not below arccos(sigma d / ||g||)")
    return False


def construct_quadratic_2d(x_star, x0, g, sigma):
    """Planar quadratic with minimizer ``x_star``, smallest eigenvalue ``sigma``
    and gradient ``g`` at ``x0``."""
    x_star, x0, g = _as_point(x_star), _as_point(x0), _as_point(g)
    if not (x_star.size == x0.size == g.size == 2):
        raise InvalidInput("construct_quadratic_2d needs points in the plane")
    if not sigma > 0:
        raise InvalidInput("sigma must be positive")
    v = x0 - x_star
    d = float(np.linalg.norm(v))
    gnorm = float(np.linalg.norm(g))
    phi = math.atan2(v[0] * g[1] - v[1] * g[0], float(v @ g))
    if _check_feasible(d, gnorm, phi, sigma):
        return QuadraticFunction.centered(sigma * np.eye(2), x_star)

    v1, v2 = v
    if abs(v2) < _V2_MIN * d:
        # rotate v onto the first axis and use the axis-aligned form
        R = np.array([[v1, -v2], [v2, v1]]) / d
        P = R @ _plane_matrix(d, gnorm, phi, sigma) @ R.T
        return QuadraticFunction.centered(P, x_star)

    lh = gnorm / d
    c, s = math.cos(phi), math.sin(phi)
    k = lh * c - sigma
    den = d * d * k
    p11 = (k * (sigma * v2**2 - 2 * lh * v1 * v2 * s + lh * v1**2 * c) + (lh * v2 * s) ** 2) / den
    p22 = (k * (sigma * v1**2 + 2 * lh * v1 * v2 * s + lh * v2**2 * c) + (lh * v1 * s) ** 2) / den
    p12 = (-(v1 / (d * d * v2)) * (lh * v1**2 * c - 2 * lh * v1 * v2 * s - lh * v2**2 * c)
           - (lh * lh - sigma * sigma) * v1 * v2 / den
           + lh * ((v1 / v2) * c - s))
    return QuadraticFunction.centered(np.array([[p11, p12], [p12, p22]]), x_star)


def construct_quadratic(x_star, x0, g, sigma):
    """Quadratic in any dimension ``n >= 2`` with ``lambda_min(Q) = sigma``,
    minimizer ``x_star`` and gradient ``g`` at ``x0``.

    The problem is solved in the plane spanned by ``x0 - x_star`` and ``g``
    and lifted with eigenvalue ``sigma`` on the orthogonal complement.
    """
    x_star, x0, g = _as_point(x_star), _as_point(x0), _as_point(g)
    n = x_star.size
    if n < 2 or x0.size != n or g.size != n:
        raise InvalidInput("construct_quadratic needs matching points with n >= 2")
    if n == 2:
        return construct_quadratic_2d(x_star, x0, g, sigma)
    if not sigma > 0:
        raise InvalidInput("sigma must be positive")
    v = x0 - x_star
    d = float(np.linalg.norm(v))
    gnorm = float(np.linalg.norm(g))
    if d == 0.0:
        _check_feasible(d, gnorm, 0.0, sigma)
        return QuadraticFunction.centered(sigma * np.eye(n), x_star)
    e1 = v / d
    w = g - (g @ e1) * e1
    wn = float(np.linalg.norm(w))
    if wn <= 1e-14 * max(gnorm, 1e-300):
        # g is parallel to v: any direction orthogonal to v spans the plane
        e2 = _complete_basis(e1)[:, 1]
    else:
        e2 = w / wn
    gp = np.array([g @ e1, g @ e2])
    phi = math.atan2(gp[1], gp[0])
    if _check_feasible(d, gnorm, phi, sigma):
        return QuadraticFunction.centered(sigma * np.eye(n), x_star)
    E = np.column_stack((e1, e2))
    P = _plane_matrix(d, gnorm, phi, sigma)
    Q = E @ P @ E.T + sigma * (np.eye(n) - E @ E.T)
    return QuadraticFunction.centered(0.5 * (Q + Q.T), x_star)


@dataclass(frozen=True, eq=False)
class WitnessPair:
    """Quadratics ``f1``, ``f2`` with ``grad f1(point) = g = -grad f2(point)``."""

    f1: QuadraticFunction
    f2: QuadraticFunction
    g: np.ndarray
    point: np.ndarray

    def to_dict(self):
        return {
            "f1": self.f1.to_dict(),
            "f2": self.f2.to_dict(),
            "g": self.g.tolist(),
            "point": self.point.tolist(),
        }


def verify_pair(pair, inst, tol=1e-9, point_rtol=1e-8):
    """Dict of named checks for the invariants of a witness pair."""
    x = pair.point
    g1 = pair.f1.grad(x)
    g2 = pair.f2.grad(x)
    gscale = max(1.0, float(np.linalg.norm(pair.g)))
    xs = sum_minimizer(pair.f1, pair.f2)
    xscale = max(1.0, float(np.linalg.norm(x)))
    return {
        "gradients_cancel": float(np.linalg.norm(g1 + g2)) <= tol * gscale,
        "gradient_is_g": float(np.linalg.norm(g1 - pair.g)) <= tol * gscale,
        "gradient_bound": float(np.linalg.norm(pair.g)) <= inst.L + tol,
        "sigma1": pair.f1.min_eig() >= inst.sigma1 - tol,
        "sigma2": pair.f2.min_eig() >= inst.sigma2 - tol,
        "minimizer1": float(np.linalg.norm(pair.f1.minimizer() - inst.x1_star)) <= point_rtol * max(1.0, float(np.linalg.norm(inst.x1_star))),
        "minimizer2": float(np.linalg.norm(pair.f2.minimizer() - inst.x2_star)) <= point_rtol * max(1.0, float(np.linalg.norm(inst.x2_star))),
        "sum_minimizer": float(np.linalg.norm(xs - x)) <= point_rtol * xscale,
    }


@dataclass(frozen=True)
class _WitnessGeometry:
    x: np.ndarray
    stars: tuple          # (x1*, x2*) in canonical labelling, original coordinates
    sigmas: tuple
    u1: Optional[np.ndarray] = None
    e: Optional[np.ndarray] = None
    lo: float = 0.0
    hi: float = 0.0
    slack: float = 0.0
    x_branch: bool = False


def _geometry(inst, x):
    x = _as_point(x)
    frame = inst.frame
    s_hi, s_lo = inst.ordered_sigmas
    stars = (inst.x2_star, inst.x1_star) if frame.swapped else (inst.x1_star, inst.x2_star)
    y = to_canonical(frame, x)
    reg = regime(inst)
    special = inner_point(reg)
    if special is not None and math.hypot(y[0] - special, float(np.linalg.norm(y[1:]))) <= tau_r(reg.r):
        return _WitnessGeometry(x, stars, (s_hi, s_lo), x_branch=True)
    rep = angle_report(inst, y)
    if not (rep.defined and rep.slack > TAU_ANGLE):
        raise NotInInner("point is not in the inner set")
    u1 = (x - stars[0]) / rep.d1
    m2 = (stars[1] - x) / rep.d2          # -u2
    w = m2 - (m2 @ u1) * u1
    wn = float(np.linalg.norm(w))
    e = w / wn if wn > 1e-12 else _complete_basis(u1)[:, 1]
    # on a sphere the gradient must be exactly radial; snap so the constructor
    # sees the same boundary case
    phi1 = 0.0 if 1.0 - s_hi * rep.d1 / inst.L <= EQUALITY_RTOL else rep.phi1_t
    phi2 = 0.0 if 1.0 - s_lo * rep.d2 / inst.L <= EQUALITY_RTOL else rep.phi2_t
    # angles t from u1 toward -u2 that keep both gradients admissible
    lo = max(rep.psi - phi2, -phi1)
    hi = min(phi1, rep.psi + phi2)
    return _WitnessGeometry(x, stars, (s_hi, s_lo), u1, e, lo, hi, rep.slack)


def _build(inst, geo, g):
    """Construct the pair for canonical gradient ``g`` and map labels back."""
    fa = construct_quadratic(geo.stars[0], geo.x, g, geo.sigmas[0])
    fb = construct_quadratic(geo.stars[1], geo.x, -g, geo.sigmas[1])
    if inst.frame.swapped:
        return WitnessPair(fb, fa, -g, geo.x)
    return WitnessPair(fa, fb, g, geo.x)


def _direction(geo, t):
    return math.cos(t) * geo.u1 + math.sin(t) * geo.e


def _chosen_angle(geo):
    if geo.hi - geo.lo <= 0.0:
        # a closed-ball boundary point: one gradient must be radial
        return 0.5 * (geo.lo + geo.hi)
    width = geo.hi - geo.lo
    mid = 0.5 * (geo.lo + geo.hi)
    return min(max(mid, geo.lo + 0.1 * width), geo.hi - 0.1 * width)


def witness_pair(inst, x):
    """Two quadratics in the admitted classes whose sum is minimized at ``x``."""
    geo = _geometry(inst, x)
    if geo.x_branch:
        # coincident minimizers need a vanishing gradient
        g = inst.L * inst.frame.E[:, 0] if inst.r > 0 else np.zeros(inst.n)
        return _build(inst, geo, g)
    t = _chosen_angle(geo)
    return _build(inst, geo, inst.L * _direction(geo, t))


def witness_family(inst, x, k):
    """``k`` distinct witness pairs for ``x`` obtained by rotating the gradient."""
    if k < 1:
        raise ValueError("k must be at least 1")
    geo = _geometry(inst, x)
    width = 0.0 if geo.x_branch else geo.hi - geo.lo
    if geo.x_branch or geo.slack < MIN_MARGIN or width < MIN_MARGIN:
        raise InsufficientMargin("no open interval of admissible gradient directions")
    t0 = _chosen_angle(geo)
    half = 0.25 * width
    # keep the rotated angles inside the admissible interval around t0
    half = min(half, t0 - geo.lo, geo.hi - t0) * (1.0 - 1e-9)
    deltas = [0.0] if k == 1 else np.linspace(-half, half, k)
    return [_build(inst, geo, inst.L * _direction(geo, t0 + dl)) for dl in deltas]
