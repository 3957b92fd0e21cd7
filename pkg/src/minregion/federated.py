"""One-shot aggregation of two local minimizers.

The sigma-weighted point ``p`` stays inside the region for every gradient
bound ``L >= L_min``, and ``L_min`` is exactly where the region stops being
empty, so ``p`` is the aggregate that needs the least prior knowledge of L.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import _as_point
from .region import Membership, RegionRegime, classify, regime


@dataclass(frozen=True, eq=False)
class AggregationResult:
    p: np.ndarray
    L_min: float
    regime_at_L: RegionRegime
    in_region: Membership

    def to_dict(self):
        return {
            "p": self.p.tolist(),
            "L_min": self.L_min,
            "regime_at_L": self.regime_at_L.to_dict(),
            "in_region": self.in_region.to_dict(),
        }


def min_gradient_bound(x1_star, x2_star, sigma1, sigma2):
    """Smallest L for which the region is nonempty."""
    dist = float(np.linalg.norm(_as_point(x2_star) - _as_point(x1_star)))
    return dist / (1.0 / sigma1 + 1.0 / sigma2)


def weighted_point(x1_star, x2_star, sigma1, sigma2):
    x1, x2 = _as_point(x1_star), _as_point(x2_star)
    return (sigma1 * x1 + sigma2 * x2) / (sigma1 + sigma2)


def fed_point(inst, tol=1e-7):
    """The sigma-weighted point with its membership under the instance's own L."""
    p = weighted_point(inst.x1_star, inst.x2_star, inst.sigma1, inst.sigma2)
    L_min = min_gradient_bound(inst.x1_star, inst.x2_star, inst.sigma1, inst.sigma2)
    return AggregationResult(p, L_min, regime(inst), classify(inst, p, tol))
