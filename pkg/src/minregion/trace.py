"""Polyline tracing of the region boundary in the plane.

The region is star-shaped about the sigma-weighted point between the
minimizers, so each point of the curve T is found by bisecting the interior
predicate along a ray from that point.  Circular arcs are sampled in closed
form.  Only the upper half-plane is traced; the lower half is its mirror.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import RegionEmpty, UnsupportedDimension
from .geometry import from_canonical
from .region import Case, interior_xr, regime

BISECT_STEPS = 60

CURVE_T = "CurveT"
ARC1 = "Arc1"
ARC2 = "Arc2"
ISOLATED = "IsolatedPoint"

SVG_COLORS = {CURVE_T: "blue", ARC1: "cyan", ARC2: "magenta", ISOLATED: "black"}


@dataclass
class Segment:
    tag: str
    points: np.ndarray
    closed: bool = False


@dataclass
class BoundaryTrace:
    """Tagged polylines in the caller's coordinates."""

    segments: list = field(default_factory=list)
    resolution: int = 0

    def curves(self):
        return [s for s in self.segments if s.tag != ISOLATED]

    def isolated_points(self):
        return [s for s in self.segments if s.tag == ISOLATED]

    def piece_counts(self):
        """``(number of distinct curve kinds, number of isolated points)``."""
        return len({s.tag for s in self.curves()}), len(self.isolated_points())


def ray_origin(reg):
    """Canonical x1 of the sigma-weighted point; the region is star-shaped about it."""
    return (reg.sigma2 - reg.sigma1) / (reg.sigma1 + reg.sigma2) * reg.r


def _exit_distance(px, ux, uy, cx, R):
    # ray (px, 0) + t (ux, uy) leaving the disk centred at (cx, 0)
    b = ux * (px - cx)
    c = (px - cx) ** 2 - R * R
    return -b + np.sqrt(np.maximum(b * b - c, 0.0))


def t_points(reg, theta):
    """Points of T in the upper half-plane, one per ray angle ``theta``."""
    theta = np.asarray(theta, dtype=float)
    px = ray_origin(reg)
    ux, uy = np.cos(theta), np.sin(theta)
    hi = np.minimum(_exit_distance(px, ux, uy, -reg.r, reg.R1),
                    _exit_distance(px, ux, uy, reg.r, reg.R2))
    hi = hi * (1.0 + 1e-9) + 1e-12
    lo = np.zeros_like(hi)
    if not np.all(interior_xr(reg, px + lo * ux, lo * uy)):
        raise RuntimeError("ray origin is not interior to the region")
    if np.any(interior_xr(reg, px + hi * ux, hi * uy)):
        raise RuntimeError("ray bracket does not straddle the boundary")
    for _ in range(BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        inside = interior_xr(reg, px + mid * ux, mid * uy)
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    t = 0.5 * (lo + hi)
    return np.column_stack((px + t * ux, t * uy))


def _angle_from_origin(reg, x1, rho):
    return math.atan2(rho, x1 - ray_origin(reg))


def _arc(center, radius, a, b, m):
    w = np.linspace(a, b, m)
    return np.column_stack((center + radius * np.cos(w), radius * np.sin(w)))


def _mirror_closed(upper):
    """Join an upper-half polyline running from the axis to the axis with its mirror."""
    lower = upper[-2:0:-1].copy()
    lower[:, 1] *= -1.0
    return np.vstack((upper, lower, upper[:1]))


def _through_axis(upper_from_axis):
    """Polyline starting on the axis, mirrored so it becomes symmetric about the axis."""
    lower = upper_from_axis[:0:-1].copy()
    lower[:, 1] *= -1.0
    return np.vstack((lower, upper_from_axis))


def _flip(pts):
    out = pts.copy()
    out[:, 1] *= -1.0
    return out


def _canonical_segments(reg, samples):
    m = samples // 2 + 1
    r = reg.r
    case = reg.case
    if case is Case.SINGLETON:
        return [Segment(ISOLATED, np.array([[reg.singleton_point, 0.0]]))]

    if case is Case.TWO_CUSPS:
        theta = np.linspace(0.0, math.pi, m)
        upper = np.vstack(([[r, 0.0]], t_points(reg, theta[1:-1]), [[-r, 0.0]]))
        return [
            Segment(CURVE_T, _mirror_closed(upper), closed=True),
            Segment(ISOLATED, np.array([[-r, 0.0]])),
            Segment(ISOLATED, np.array([[r, 0.0]])),
        ]

    c1 = (reg.lambda1, reg.nu1)
    w1 = math.atan2(reg.nu1, reg.lambda1 + r)
    arc1 = _through_axis(_arc(-r, reg.R1, 0.0, w1, m))
    arc1[-1] = c1
    arc1[0] = (c1[0], -c1[1])
    th1 = _angle_from_origin(reg, *c1)

    if case is Case.ONE_CUSP:
        theta = np.linspace(th1, math.pi, m)
        upper = np.vstack(([c1], t_points(reg, theta[1:-1]), [[-r, 0.0]]))
        lower = _flip(upper[-2::-1])
        return [
            Segment(ARC1, arc1),
            Segment(CURVE_T, np.vstack((upper, lower))),
            Segment(ISOLATED, np.array([[-r, 0.0]])),
        ]

    c2 = (reg.lambda2, reg.nu2)
    w2 = math.atan2(reg.nu2, reg.lambda2 - r)
    arc2_upper = _arc(r, reg.R2, math.pi, w2, m)
    arc2 = _through_axis(arc2_upper)[::-1]
    arc2[0] = c2
    arc2[-1] = (c2[0], -c2[1])
    th2 = _angle_from_origin(reg, *c2)
    theta = np.linspace(th1, th2, samples)
    t_upper = np.vstack(([c1], t_points(reg, theta[1:-1]), [c2]))
    return [
        Segment(ARC1, arc1),
        Segment(CURVE_T, t_upper),
        Segment(ARC2, arc2),
        Segment(CURVE_T, _flip(t_upper[::-1])),
    ]


def trace_boundary(inst, samples_per_segment=256):
    """Trace the boundary of the region for a planar instance."""
    if inst.n != 2:
        raise UnsupportedDimension(f"tracing needs n = 2, got n = {inst.n}")
    if samples_per_segment < 3:
        raise ValueError("samples_per_segment must be at least 3")
    reg = regime(inst)
    if reg.case is Case.EMPTY:
        raise RegionEmpty("the region is empty for this instance")
    frame = inst.frame
    segments = []
    for seg in _canonical_segments(reg, samples_per_segment):
        pts = np.array([from_canonical(frame, p) for p in seg.points])
        segments.append(Segment(seg.tag, pts, seg.closed))
    return BoundaryTrace(segments, samples_per_segment)


def write_csv(trace, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["segment_tag", "idx", "x1", "x2"])
        for seg in trace.segments:
            for i, (a, b) in enumerate(seg.points):
                w.writerow([seg.tag, i, repr(float(a)), repr(float(b))])


def read_csv(path):
    """Read a trace CSV back; consecutive rows restarting at idx 0 open a new segment."""
    segments = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            idx = int(row["idx"])
            pt = (float(row["x1"]), float(row["x2"]))
            if idx == 0:
                segments.append(Segment(row["segment_tag"], []))
            segments[-1].points.append(pt)
    for seg in segments:
        seg.points = np.array(seg.points)
        seg.closed = len(seg.points) > 1 and np.array_equal(seg.points[0], seg.points[-1])
    return BoundaryTrace(segments)


def write_svg(trace, path, size=600, margin=20):
    pts = np.vstack([s.points for s in trace.segments])
    lo = pts.min(axis=0)
    span = max(float((pts.max(axis=0) - lo).max()), 1e-12)
    scale = (size - 2 * margin) / span

    def xy(p):
        # SVG y axis points down
        return margin + (p[0] - lo[0]) * scale, size - margin - (p[1] - lo[1]) * scale

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">']
    for seg in trace.segments:
        color = SVG_COLORS.get(seg.tag, "black")
        if seg.tag == ISOLATED:
            x, y = xy(seg.points[0])
            out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="3" fill="{color}"/>')
            continue
        coords = " ".join("%.3f,%.3f" % xy(p) for p in seg.points)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{coords}"/>')
    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out) + "\n")
