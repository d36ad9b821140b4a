"""Planar points, angles, disks, and tangent-arc routing around a disk.

All angles are radians, stored normalized to (-pi, pi]. Geometric predicates
use an absolute tolerance of ``GEOM_EPS``; every length in a scenario is O(1),
so no relative scaling is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

GEOM_EPS = 1e-9


class DegenerateGeometryError(ValueError):
    """A construction is undefined for the given inputs (e.g. coincident points)."""


class InfeasibleTargetError(ValueError):
    """No admissible path exists (e.g. the target lies inside the blocked disk)."""


def normalize_angle(a: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    r = math.remainder(a, math.tau)
    return r + math.tau if r <= -math.pi else r


def wrap_diff(a: float, b: float) -> float:
    """Shortest signed difference a - b, wrapped to (-pi, pi]."""
    return normalize_angle(a - b)


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __add__(self, other: "Point2") -> "Point2":
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point2") -> "Point2":
        return Point2(self.x - other.x, self.y - other.y)

    def scaled(self, k: float) -> "Point2":
        return Point2(k * self.x, k * self.y)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)


def distance(a: Point2, b: Point2) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


def unit(angle: float) -> Point2:
    """Unit vector at the given heading."""
    return Point2(math.cos(angle), math.sin(angle))


@dataclass(frozen=True)
class Disk:
    center: Point2
    radius: float

    def __post_init__(self) -> None:
        if not (self.radius > 0.0):
            raise ValueError(f"disk radius must be positive, got {self.radius}")

    def contains(self, p: Point2) -> bool:
        """Strict interior membership; points on the boundary count as outside."""
        return distance(self.center, p) < self.radius - GEOM_EPS


def los_angle(frm: Point2, to: Point2) -> float:
    """Angle of the line of sight from ``frm`` to ``to``, in (-pi, pi].

    Raises DegenerateGeometryError when the points coincide.
    """
    dx = to.x - frm.x
    dy = to.y - frm.y
    if dx == 0.0 and dy == 0.0:
        raise DegenerateGeometryError("line of sight undefined for coincident points")
    return normalize_angle(math.atan2(dy, dx))


def ez_center(pursuer_pos: Point2, evader_heading: float, mu: float,
              range_remaining: float) -> Point2:
    """Center of the zone a pursuer can still force an interception in.

    The zone is the pursuer's remaining-reach disk displaced opposite the
    evader's heading by mu times the remaining range.
    """
    if not (0.0 < mu <= 1.0):
        raise ValueError(f"speed ratio must be in (0, 1], got {mu}")
    if range_remaining < 0.0:
        raise ValueError(f"range_remaining must be nonnegative, got {range_remaining}")
    shift = mu * range_remaining
    return Point2(pursuer_pos.x - shift * math.cos(evader_heading),
                  pursuer_pos.y - shift * math.sin(evader_heading))


def in_engagement_zone(evader_pos: Point2, pursuer_pos: Point2, evader_heading: float,
                       mu: float, range_remaining: float) -> bool:
    """True iff the evader's current heading can still be intercepted.

    Boundary contact counts as outside: an interception that happens exactly
    at range exhaustion is neglected.
    """
    c = ez_center(pursuer_pos, evader_heading, mu, range_remaining)
    return distance(evader_pos, c) < range_remaining - GEOM_EPS


def point_segment_distance(p: Point2, a: Point2, b: Point2) -> float:
    """Distance from ``p`` to the closed segment ``a``-``b``."""
    ab = b - a
    denom = ab.x * ab.x + ab.y * ab.y
    if denom == 0.0:
        return distance(p, a)
    t = ((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / denom
    t = min(1.0, max(0.0, t))
    return distance(p, a + ab.scaled(t))


def segment_enters_disk(a: Point2, b: Point2, disk: Disk) -> bool:
    """True iff the closed segment ``a``-``b`` intersects the open disk."""
    return point_segment_distance(disk.center, a, b) < disk.radius - GEOM_EPS


def min_distance_linear_motion(rel_pos: Point2, rel_vel: Point2, horizon: float) -> float:
    """Minimum of |rel_pos + tau * rel_vel| over tau in [0, horizon]."""
    vv = rel_vel.x * rel_vel.x + rel_vel.y * rel_vel.y
    if vv == 0.0:
        return rel_pos.norm()
    tau = -(rel_pos.x * rel_vel.x + rel_pos.y * rel_vel.y) / vv
    tau = min(horizon, max(0.0, tau))
    return (rel_pos + rel_vel.scaled(tau)).norm()


@dataclass(frozen=True)
class PathDescription:
    """Shortest route around a disk: optional lead-in tangent, boundary arc,
    departure tangent. ``direction`` is -1 for decreasing polar angle around
    the disk center, +1 for increasing, 0 when the route is a single segment."""

    approach_length: float
    arc_entry: Point2 | None
    arc_exit: Point2 | None
    arc_sweep: float
    arc_length: float
    straight_length: float
    total_length: float
    direction: int


def _wrap_positive(a: float) -> float:
    r = math.fmod(a, math.tau)
    return r + math.tau if r < 0.0 else r


def circumnavigation_path(start: Point2, target: Point2, rr: Disk) -> PathDescription:
    """Shortest path from ``start`` to ``target`` that stays out of the open disk.

    When the direct segment misses the open disk the path is that segment.
    Otherwise it hugs the boundary: a tangent lead-in (zero length when the
    start already sits on the boundary), the shorter boundary arc, and the
    tangent segment to the target.

    Raises InfeasibleTargetError if either endpoint is strictly inside.
    """
    R = rr.radius
    c = rr.center
    ds = distance(c, start)
    dt = distance(c, target)
    if ds < R - GEOM_EPS:
        raise InfeasibleTargetError("start lies inside the disk")
    if dt < R - GEOM_EPS:
        raise InfeasibleTargetError("target lies inside the disk")

    direct = distance(start, target)
    if not segment_enters_disk(start, target, rr):
        return PathDescription(
            approach_length=0.0, arc_entry=None, arc_exit=None, arc_sweep=0.0,
            arc_length=0.0, straight_length=direct, total_length=direct, direction=0)

    lam_s = los_angle(c, start)
    lam_t = los_angle(c, target)
    beta_s = math.acos(min(1.0, R / ds))
    beta_t = math.acos(min(1.0, R / dt))
    lead_in = math.sqrt(max(ds * ds - R * R, 0.0))
    lead_out = math.sqrt(max(dt * dt - R * R, 0.0))

    # direction -1 enters at lam_s - beta_s and exits at lam_t + beta_t;
    # direction +1 mirrors. Pick the smaller sweep, preferring -1 on a tie.
    sweep_neg = _wrap_positive((lam_s - beta_s) - (lam_t + beta_t))
    sweep_pos = _wrap_positive((lam_t - beta_t) - (lam_s + beta_s))
    if sweep_neg <= sweep_pos + GEOM_EPS:
        direction, sweep = -1, sweep_neg
        entry_angle, exit_angle = lam_s - beta_s, lam_t + beta_t
    else:
        direction, sweep = 1, sweep_pos
        entry_angle, exit_angle = lam_s + beta_s, lam_t - beta_t

    entry = c + unit(entry_angle).scaled(R)
    exit_ = c + unit(exit_angle).scaled(R)
    arc_length = R * sweep
    total = lead_in + arc_length + lead_out
    return PathDescription(
        approach_length=lead_in, arc_entry=entry, arc_exit=exit_, arc_sweep=sweep,
        arc_length=arc_length, straight_length=lead_out, total_length=total,
        direction=direction)
