"""Membership in the outer set, the inner set, and the minimizer region itself.

All predicates accept points in the caller's coordinates and move them into
the canonical frame.  Because every quantity depends only on the distances
to the two minimizers, the work is done in the half-plane
``(x1, rho)`` with ``rho = ||(x2, ..., xn)||``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import OutOfDomain
from .geometry import BALL_RTOL, MINIMIZER_TOL, angle_report, to_canonical

TAU_ANGLE = 1e-9
DEFAULT_TOL = 1e-7
_N_PROBES = 16


def tau_r(r):
    """Tolerance used when comparing ``r`` with a regime threshold."""
    return 1e-9 * (1.0 + r)


class Case(str, enum.Enum):
    TWO_CUSPS = "TwoCusps"
    ONE_CUSP = "OneCusp"
    THREE_ARCS = "ThreeArcs"
    SINGLETON = "Singleton"
    EMPTY = "Empty"


class Value(str, enum.Enum):
    INTERIOR = "Interior"
    BOUNDARY = "Boundary"
    EXTERIOR = "Exterior"


class Piece(str, enum.Enum):
    CURVE_T = "CurveT"
    ARC1 = "Arc1"
    ARC2 = "Arc2"
    CUSP_X1 = "CuspX1"
    CUSP_X2 = "CuspX2"
    SINGLETON_POINT = "SingletonPoint"


@dataclass(frozen=True)
class Membership:
    value: Value
    which_piece: Optional[Piece] = None

    def to_dict(self):
        return {
            "value": self.value.value,
            "which_piece": None if self.which_piece is None else self.which_piece.value,
        }


@dataclass(frozen=True)
class RegionRegime:
    """Structural case of the region plus the constants that describe it.

    ``sigma1 >= sigma2`` here: the values are those of the canonical frame.
    ``lambda_i`` and ``nu_i`` are the coordinates ``(x1, ||x~||)`` of the
    ring where the curve T meets the sphere around minimizer ``i``; ``nu_i`` is
    None when that ring does not exist.
    """

    case: Case
    r: float
    sigma1: float
    sigma2: float
    L: float
    gamma1: float
    gamma2: float
    beta: float
    lambda1: float
    lambda2: float
    nu1: Optional[float]
    nu2: Optional[float]
    thresholds: tuple
    singleton_point: Optional[float] = None

    @property
    def R1(self):
        return self.L / self.sigma1

    @property
    def R2(self):
        return self.L / self.sigma2

    def to_dict(self):
        return {
            "case": self.case.value,
            "r": self.r,
            "sigma1": self.sigma1,
            "sigma2": self.sigma2,
            "L": self.L,
            "gamma1": self.gamma1,
            "gamma2": self.gamma2,
            "beta": self.beta,
            "lambda1": _finite_or_none(self.lambda1),
            "lambda2": _finite_or_none(self.lambda2),
            "nu1": self.nu1,
            "nu2": self.nu2,
            "thresholds": list(self.thresholds),
            "singleton_x1": self.singleton_point,
        }


def _finite_or_none(v):
    return v if math.isfinite(v) else None


def regime_constants(r, sigma1, sigma2, L):
    """Regime for canonical data with ``sigma1 >= sigma2``."""
    if sigma1 < sigma2:
        raise ValueError("regime_constants expects sigma1 >= sigma2")
    t1 = L / (2.0 * sigma1)
    t2 = L / (2.0 * sigma2)
    t3 = 0.5 * L * (1.0 / sigma1 + 1.0 / sigma2)
    tau = tau_r(r)
    gamma1 = (L / sigma1) ** 2
    gamma2 = (L / sigma2) ** 2
    beta = sigma2 / sigma1

    if r == 0.0:
        # coincident minimizers: the region is the shared minimizer
        return RegionRegime(Case.SINGLETON, r, sigma1, sigma2, L, gamma1, gamma2, beta,
                            math.nan, math.nan, None, None, (t1, t2, t3), 0.0)

    if r <= t1 + tau:
        case = Case.TWO_CUSPS
    elif r <= t2 + tau:
        case = Case.ONE_CUSP
    elif r < t3 - tau:
        case = Case.THREE_ARCS
    elif r <= t3 + tau:
        case = Case.SINGLETON
    else:
        case = Case.EMPTY

    lambda1 = (1.0 + beta) / (1.0 + 2.0 * beta) * gamma1 / (2.0 * r) - r / (1.0 + 2.0 * beta)
    lambda2 = -(1.0 + beta) / (2.0 + beta) * gamma2 / (2.0 * r) + beta * r / (2.0 + beta)

    def nu(gamma, tail, denom, threshold):
        if not (threshold + tau < r <= t3 + tau):
            return None
        g = gamma / (r * r)
        rad = -(g - 4.0) * ((1.0 + beta) ** 2 * g - tail)
        return r / (2.0 * denom) * math.sqrt(max(rad, 0.0))

    nu1 = nu(gamma1, 4.0 * beta * beta, 1.0 + 2.0 * beta, t1)
    nu2 = nu(gamma2, 4.0, 2.0 + beta, t2)
    point = 0.5 * L * (1.0 / sigma1 - 1.0 / sigma2) if case is Case.SINGLETON else None
    return RegionRegime(case, r, sigma1, sigma2, L, gamma1, gamma2, beta,
                        lambda1, lambda2, nu1, nu2, (t1, t2, t3), point)


def regime(inst):
    s1, s2 = inst.ordered_sigmas
    return regime_constants(inst.r, s1, s2, inst.L)


# -- vectorised kernels on the (x1, rho) half-plane ---------------------------

def slack_xr(reg, x1, rho):
    """``phi1~ + phi2~ - psi`` on arrays; NaN where the angles are undefined."""
    x1 = np.asarray(x1, dtype=float)
    rho = np.abs(np.asarray(rho, dtype=float))
    r = reg.r
    d1 = np.hypot(x1 + r, rho)
    d2 = np.hypot(x1 - r, rho)
    c1 = reg.sigma1 * d1 / reg.L
    c2 = reg.sigma2 * d2 / reg.L
    near = MINIMIZER_TOL * max(1.0, r)
    bad = (d1 <= near) | (d2 <= near) | (c1 > 1.0 + BALL_RTOL) | (c2 > 1.0 + BALL_RTOL)
    phi = np.arccos(np.clip(c1, -1.0, 1.0)) + np.arccos(np.clip(c2, -1.0, 1.0))
    psi = np.pi - (np.arctan2(rho, x1 - r) - np.arctan2(rho, x1 + r))
    return np.where(bad, np.nan, phi - psi)


def interior_xr(reg, x1, rho):
    """Interior of the region, evaluated with the case formulas."""
    x1 = np.asarray(x1, dtype=float)
    rho = np.abs(np.asarray(rho, dtype=float))
    case = reg.case
    if case in (Case.SINGLETON, Case.EMPTY):
        return np.zeros(np.broadcast(x1, rho).shape, dtype=bool)
    with np.errstate(invalid="ignore"):
        s = slack_xr(reg, x1, rho)
        tilde_t = s > 0.0
    if case is Case.TWO_CUSPS:
        return tilde_t
    r = reg.r
    in_b1 = np.hypot(x1 + r, rho) < reg.R1
    cap1 = in_b1 & (x1 > reg.lambda1)
    if case is Case.ONE_CUSP:
        return cap1 | (tilde_t & (x1 <= reg.lambda1))
    in_b2 = np.hypot(x1 - r, rho) < reg.R2
    cap2 = in_b2 & (x1 < reg.lambda2)
    middle = tilde_t & (x1 <= reg.lambda1) & (x1 >= reg.lambda2)
    return cap1 | cap2 | middle


# -- public predicates ---------------------------------------------------------

def _reduce(inst, x):
    y = to_canonical(inst.frame, x)
    return y, float(y[0]), float(np.linalg.norm(y[1:]))


def in_outer(inst, x):
    """Whether ``x`` satisfies the non-strict angle inequality (outer set)."""
    y, _, _ = _reduce(inst, x)
    rep = angle_report(inst, y)
    return bool(rep.defined and rep.slack >= -TAU_ANGLE)


def inner_point(reg):
    """Canonical x1 of the special point that joins the inner set at the
    singleton threshold, or None."""
    if reg.case is not Case.SINGLETON:
        return None
    if reg.r == 0.0:
        return 0.0
    return -reg.r + reg.L / reg.sigma1


def in_inner(inst, x):
    """Whether ``x`` satisfies the strict inequality or is the special point."""
    y, x1, rho = _reduce(inst, x)
    reg = regime(inst)
    special = inner_point(reg)
    if special is not None and math.hypot(x1 - special, rho) <= tau_r(reg.r):
        return True
    rep = angle_report(inst, y)
    return bool(rep.defined and rep.slack > TAU_ANGLE)


def classify(inst, x, tol=DEFAULT_TOL):
    """Interior / Boundary / Exterior of the minimizer region at ``x``.

    A point is Boundary when a ring of probes of radius ``tol`` around it
    (in the ``(x1, rho)`` half-plane) sees both interior and non-interior
    points; the piece tag names the nearest component of the boundary.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    _, x1, rho = _reduce(inst, x)
    return classify_xr(regime(inst), x1, rho, tol)


_VALUES = (Value.INTERIOR, Value.BOUNDARY, Value.EXTERIOR)


def classify_values_xr(reg, x1, rho, tol=DEFAULT_TOL):
    """Vectorised membership values as codes into ``(Interior, Boundary, Exterior)``."""
    x1 = np.atleast_1d(np.asarray(x1, dtype=float))
    rho = np.atleast_1d(np.abs(np.asarray(rho, dtype=float)))
    out = np.full(x1.shape, 2, dtype=np.int8)
    case = reg.case
    if case is Case.EMPTY:
        return out
    if case is Case.SINGLETON:
        out[np.hypot(x1 - reg.singleton_point, rho) <= tol] = 1
        return out
    ang = np.linspace(0.0, 2.0 * np.pi, _N_PROBES, endpoint=False)
    px = np.concatenate((x1[:, None], x1[:, None] + tol * np.cos(ang)), axis=1)
    pr = np.concatenate((rho[:, None], rho[:, None] + tol * np.sin(ang)), axis=1)
    inside = interior_xr(reg, px, pr)
    out[inside.any(axis=1)] = 1
    out[inside.all(axis=1)] = 0
    # isolated cusps have no interior neighbourhood on the probe ring
    r = reg.r
    if case in (Case.TWO_CUSPS, Case.ONE_CUSP):
        out[np.hypot(x1 + r, rho) <= tol] = 1
    if case is Case.TWO_CUSPS:
        out[np.hypot(x1 - r, rho) <= tol] = 1
    return out


def classify_many(inst, X, tol=DEFAULT_TOL):
    """Membership values for the rows of ``X`` (no piece tags)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = (X - inst.frame.b) @ inst.frame.E
    codes = classify_values_xr(regime(inst), Y[:, 0], np.linalg.norm(Y[:, 1:], axis=1), tol)
    return [_VALUES[c] for c in codes]


def classify_xr(reg, x1, rho, tol=DEFAULT_TOL):
    value = _VALUES[classify_values_xr(reg, x1, rho, tol)[0]]
    if value is not Value.BOUNDARY:
        return Membership(value)
    case = reg.case
    if case is Case.SINGLETON:
        return Membership(value, Piece.SINGLETON_POINT)
    r = reg.r
    d1 = math.hypot(x1 + r, rho)
    d2 = math.hypot(x1 - r, rho)
    if d1 <= tol and case in (Case.TWO_CUSPS, Case.ONE_CUSP):
        return Membership(value, Piece.CUSP_X1)
    if d2 <= tol and case is Case.TWO_CUSPS:
        return Membership(value, Piece.CUSP_X2)
    if case in (Case.ONE_CUSP, Case.THREE_ARCS) and abs(d1 - reg.R1) <= tol and x1 > reg.lambda1 + tol:
        return Membership(value, Piece.ARC1)
    if case is Case.THREE_ARCS and abs(d2 - reg.R2) <= tol and x1 < reg.lambda2 - tol:
        return Membership(value, Piece.ARC2)
    return Membership(value, Piece.CURVE_T)


def t_residual(inst, x):
    """Left minus right side of the algebraic equation of the curve T.

    Negative inside the outer set, positive outside it, zero on T.
    """
    _, x1, rho = _reduce(inst, x)
    s1, s2 = inst.ordered_sigmas
    return t_residual_xr(inst.r, s1, s2, inst.L, x1, rho)


def t_residual_xr(r, s1, s2, L, x1, rho):
    """Array version of ``t_residual`` on the ``(x1, rho)`` half-plane."""
    x1 = np.asarray(x1, dtype=float)
    rho = np.asarray(rho, dtype=float)
    D1 = (x1 + r) ** 2 + rho * rho
    D2 = (x1 - r) ** 2 + rho * rho
    if np.any(D1 == 0.0) or np.any(D2 == 0.0):
        raise OutOfDomain("the residual is undefined at a minimizer")
    rad1 = 1.0 / D1 - (s1 / L) ** 2
    rad2 = 1.0 / D2 - (s2 / L) ** 2
    for rad, D, i in ((rad1, D1, 1), (rad2, D2, 2)):
        if np.any(rad < -1e-12 / D):
            raise OutOfDomain(f"point lies outside the closed ball around minimizer {i}")
    norm2 = x1 * x1 + rho * rho
    out = ((norm2 - r * r) / (D1 * D2) + s1 * s2 / (L * L)
           - np.sqrt(np.maximum(rad1, 0.0)) * np.sqrt(np.maximum(rad2, 0.0)))
    return float(out) if out.ndim == 0 else out


def junction(reg, i):
    """Upper-half-plane junction ``(lambda_i, nu_i)`` or None."""
    nu = reg.nu1 if i == 1 else reg.nu2
    if nu is None:
        return None
    return (reg.lambda1 if i == 1 else reg.lambda2, nu)
