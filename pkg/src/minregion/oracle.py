"""Brute-force checks of the region against random quadratic problems.

Soundness: the true minimizer of a random admissible pair never lands
outside the region.  Completeness: every sampled inner point gets a witness
pair that passes all its invariants.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import MinRegionError, RegionEmpty
from .geometry import from_canonical
from .quadwit import QuadraticFunction, sum_minimizer, verify_pair, witness_pair
from .region import TAU_ANGLE, Case, Value, classify_many, inner_point, regime, slack_xr

GRAD_FILTER_TOL = 1e-12


@dataclass
class VerificationReport:
    mode: str
    seed: int
    trials: int = 0
    accepted: int = 0
    violations: int = 0
    worst_margin: float = math.inf
    breakdown: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.violations == 0

    def to_dict(self):
        return {
            "mode": self.mode,
            "seed": self.seed,
            "trials": self.trials,
            "accepted": self.accepted,
            "violations": self.violations,
            "worst_margin": None if not math.isfinite(self.worst_margin) else self.worst_margin,
            "breakdown": self.breakdown,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _trial_rngs(seed, trials):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(trials)]


def random_orthogonal(n, rng):
    return _orthogonal_from(rng.standard_normal((n, n)))


def _orthogonal_from(A):
    Qm, R = np.linalg.qr(A)
    # sign fix makes the distribution uniform over O(n)
    return Qm * np.sign(np.diagonal(R, axis1=-2, axis2=-1))[..., None, :]


def _eigenvalues(sigma, n, spread, rng):
    lam = sigma * (1.0 + rng.uniform(0.0, spread, size=n))
    lam[0] = sigma
    return lam


def sample_quadratic(x_star, sigma, n, spread, rng):
    """Random quadratic with minimizer ``x_star`` and smallest eigenvalue ``sigma``."""
    if spread < 0:
        raise ValueError("spread must be nonnegative")
    x_star = np.asarray(x_star, dtype=float)
    V = random_orthogonal(n, rng)
    lam = _eigenvalues(sigma, n, spread, rng)
    Q = (V * lam) @ V.T
    return QuadraticFunction.centered(0.5 * (Q + Q.T), x_star)


def _draw_sigma(sigma, spread, rng):
    return sigma * (1.0 + spread * rng.uniform()) if rng.uniform() < 0.5 else sigma


def mc_soundness(inst, trials, spread=1.0, seed=0, tol=1e-7):
    """Sample admissible pairs and check their sum minimizer is not Exterior.

    The strong-convexity parameter of each sample is drawn from
    ``[sigma_i, (1 + spread) sigma_i]`` so the whole admitted class is exercised.
    Only pairs whose common gradient norm at the minimizer is at most L count.
    Random draws come from one stream per trial; the linear algebra is batched.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if spread < 0:
        raise ValueError("spread must be nonnegative")
    n = inst.n
    A = np.empty((trials, 2, n, n))
    lam = np.empty((trials, 2, n))
    for k, rng in enumerate(_trial_rngs(seed, trials)):
        for j, sigma in enumerate((inst.sigma1, inst.sigma2)):
            s_hat = _draw_sigma(sigma, spread, rng)
            A[k, j] = rng.standard_normal((n, n))
            lam[k, j] = _eigenvalues(s_hat, n, spread, rng)
    V = _orthogonal_from(A)
    Q = (V * lam[..., None, :]) @ np.swapaxes(V, -1, -2)
    Q = 0.5 * (Q + np.swapaxes(Q, -1, -2))
    stars = np.stack((inst.x1_star, inst.x2_star))
    # the sum minimizer solves (Q1 + Q2) x = Q1 x1* + Q2 x2*
    rhs = np.einsum("tjab,jb->ta", Q, stars)
    x = np.linalg.solve(Q.sum(axis=1), rhs[..., None])[..., 0]
    grad1 = np.einsum("tab,tb->ta", Q[:, 0], x - stars[0])
    gnorm = np.linalg.norm(grad1, axis=1)
    keep = gnorm <= inst.L + GRAD_FILTER_TOL

    rep = VerificationReport("sound", seed, trials)
    rep.accepted = int(keep.sum())
    if rep.accepted:
        # distance by which the gradient bound is met; small means near the boundary
        rep.worst_margin = float(np.min(inst.L - gnorm[keep]))
        values = classify_many(inst, x[keep], tol)
        rep.violations = sum(v is Value.EXTERIOR for v in values)
    case = regime(inst).case.value
    rep.breakdown = {case: {"trials": trials, "accepted": rep.accepted, "violations": rep.violations}}
    return rep


def sample_inner_points(inst, count, rng, batch=4096):
    """Rejection-sample ``count`` inner points; returned in the caller's coordinates."""
    reg = regime(inst)
    if reg.case is Case.EMPTY:
        raise RegionEmpty("the region is empty for this instance")
    if reg.case is Case.SINGLETON:
        y = np.zeros(inst.n)
        y[0] = inner_point(reg)
        return [from_canonical(inst.frame, y)] * count
    r, R1, R2 = reg.r, reg.R1, reg.R2
    lo, hi = max(-r - R1, r - R2), min(-r + R1, r + R2)
    rmax = min(R1, R2)
    out = []
    while len(out) < count:
        y = np.empty((batch, inst.n))
        y[:, 0] = rng.uniform(lo, hi, batch)
        y[:, 1:] = rng.uniform(-rmax, rmax, (batch, inst.n - 1))
        rho = np.linalg.norm(y[:, 1:], axis=1)
        with np.errstate(invalid="ignore"):
            keep = slack_xr(reg, y[:, 0], rho) > TAU_ANGLE
        out.extend(from_canonical(inst.frame, row) for row in y[keep])
    return out[:count]


def mc_completeness(inst, trials, seed=0):
    """Build and verify a witness pair for each of ``trials`` inner points."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    reg = regime(inst)
    rep = VerificationReport("complete", seed, trials)
    points = sample_inner_points(inst, trials, np.random.default_rng(seed))
    worst = 0.0
    for x in points:
        rep.accepted += 1
        try:
            pair = witness_pair(inst, x)
            checks = verify_pair(pair, inst)
        except MinRegionError:
            rep.violations += 1
            continue
        if not all(checks.values()):
            rep.violations += 1
        err = float(np.linalg.norm(sum_minimizer(pair.f1, pair.f2) - x)) / max(1.0, float(np.linalg.norm(x)))
        worst = max(worst, err)
    # for completeness the margin is the worst relative sum-minimizer error
    rep.worst_margin = worst
    rep.breakdown = {reg.case.value: {"trials": trials, "violations": rep.violations}}
    return rep


def fd_gradient_check(q, x, h=1e-5):
    """Largest componentwise gap between central differences and ``q.grad``."""
    if not h > 0:
        raise ValueError("h must be positive")
    x = np.asarray(x, dtype=float)
    fd = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        fd[i] = (q.eval(x + e) - q.eval(x - e)) / (2.0 * h)
    return float(np.max(np.abs(fd - q.grad(x))))
