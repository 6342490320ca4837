"""Planar constant-curvature poses, minimum enclosing circle and the distal-point
coupling metric."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .core import DomainError, _positive

Point = tuple[float, float]


def _sinc(x: float) -> float:
    if abs(x) < 1e-4:
        x2 = x * x
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0
    return math.sin(x) / x


@dataclass(frozen=True)
class Pose2D:
    """Chain of constant-curvature pieces; ``points`` are the piece joints,
    base first. Piece ``i`` has arc length ``lengths[i]`` and turns the
    tangent by ``segment_angles[i]``."""

    points: tuple[Point, ...]
    segment_angles: tuple[float, ...]
    lengths: tuple[float, ...]

    @property
    def tip(self) -> Point:
        return self.points[-1]

    def arc_length(self) -> float:
        """Total arc length rebuilt from the chords."""
        total = 0.0
        for (x0, y0), (x1, y1), theta in zip(self.points, self.points[1:], self.segment_angles):
            total += math.hypot(x1 - x0, y1 - y0) / _sinc(theta / 2.0)
        return total

    def to_csv(self) -> str:
        rows = ["x_mm,y_mm"] + [f"{x * 1e3!r},{y * 1e3!r}" for x, y in self.points]
        return "\n".join(rows) + "\n"


def piecewise_pose(lengths: Sequence[float], angles: Sequence[float]) -> Pose2D:
    if len(lengths) != len(angles):
        raise DomainError("angles", f"expected {len(lengths)} angles, got {len(angles)}")
    if not lengths:
        raise DomainError("lengths", "must not be empty")
    x = y = heading = 0.0
    points: list[Point] = [(0.0, 0.0)]
    for i, (length, theta) in enumerate(zip(lengths, angles)):
        length = _positive(f"lengths[{i}]", length)
        theta = float(theta)
        # chord of a circular arc: length * sinc(theta/2), pointing along the mean tangent
        chord = length * _sinc(theta / 2.0)
        mid = heading + theta / 2.0
        x += chord * math.cos(mid)
        y += chord * math.sin(mid)
        heading += theta
        points.append((x, y))
    return Pose2D(tuple(points), tuple(float(a) for a in angles), tuple(float(v) for v in lengths))


def arc_pose(total_length: float, alpha: float, n_seg: int = 1) -> Pose2D:
    """Single constant-curvature arc sampled at ``n_seg`` equal pieces."""
    total_length = _positive("total_length", total_length)
    if int(n_seg) != n_seg or n_seg < 1:
        raise DomainError("n_seg", f"must be an integer >= 1, got {n_seg!r}")
    if not (0.0 <= alpha < 2.0 * math.pi):
        raise DomainError("alpha", f"must lie in [0, 2pi), got {alpha!r}")
    n = int(n_seg)
    return piecewise_pose([total_length / n] * n, [alpha / n] * n)


@dataclass(frozen=True)
class CirclePatch:
    center: Point
    radius: float

    def contains(self, p: Point, tol: float = 1e-12) -> bool:
        return math.dist(self.center, p) <= self.radius + tol


def _diameter_circle(a: Point, b: Point) -> CirclePatch:
    center = ((a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0)
    return CirclePatch(center, max(math.dist(center, a), math.dist(center, b)))


def _circumcircle(a: Point, b: Point, c: Point) -> CirclePatch | None:
    # translate to a for conditioning
    bx, by = b[0] - a[0], b[1] - a[1]
    cx, cy = c[0] - a[0], c[1] - a[1]
    d = 2.0 * (bx * cy - by * cx)
    if d == 0.0:
        return None
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    center = (a[0] + ux, a[1] + uy)
    return CirclePatch(center, max(math.dist(center, p) for p in (a, b, c)))


def _circle_with_two(points: list[Point], p: Point, q: Point) -> CirclePatch:
    circle = _diameter_circle(p, q)
    if all(circle.contains(r) for r in points):
        return circle
    # candidates on each side of pq: keep the widest on either side
    left = right = None
    px, py = p
    qx, qy = q
    for r in points:
        cross = (qx - px) * (r[1] - py) - (qy - py) * (r[0] - px)
        c = _circumcircle(p, q, r)
        if c is None:
            continue
        side = (qx - px) * (c.center[1] - py) - (qy - py) * (c.center[0] - px)
        if cross > 0.0 and (left is None or side > left[0]):
            left = (side, c)
        elif cross < 0.0 and (right is None or side < right[0]):
            right = (side, c)
    if left is None and right is None:
        return circle
    if left is None:
        return right[1]
    if right is None:
        return left[1]
    return left[1] if left[1].radius <= right[1].radius else right[1]


def min_enclosing_circle(points: Iterable[Point], seed: int = 0) -> CirclePatch:
    """Exact smallest enclosing circle by randomized incremental construction.

    Input is canonicalised (sorted) before the seeded shuffle, so the result
    does not depend on input order.
    """
    pts = sorted((float(x), float(y)) for x, y in points)
    if not pts:
        raise DomainError("points", "need at least one point")
    random.Random(seed).shuffle(pts)
    circle = CirclePatch(pts[0], 0.0)
    for i, p in enumerate(pts):
        if circle.contains(p):
            continue
        circle = CirclePatch(p, 0.0)
        for j, q in enumerate(pts[:i]):
            if circle.contains(q):
                continue
            circle = _circle_with_two(pts[:j], p, q)
    return circle


@dataclass(frozen=True)
class CouplingError:
    max_pairwise: float  # m
    circle: CirclePatch  # center is the "average position" of the distal point

    @property
    def circle_radius(self) -> float:
        return self.circle.radius


def coupling_error(poses_by_load: Sequence[Pose2D]) -> CouplingError:
    """Spread of the distal point across load cases."""
    if len(poses_by_load) < 2:
        raise DomainError("poses_by_load", f"need at least 2 poses, got {len(poses_by_load)}")
    tips = [pose.tip for pose in poses_by_load]
    spread = max(math.dist(a, b) for a, b in combinations(tips, 2))
    return CouplingError(spread, min_enclosing_circle(tips))
