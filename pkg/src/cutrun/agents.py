"""Evader heading policies, pursuer guidance laws, and the launch schedule.

Policies are pure functions of (state, time). Every state record here is an
immutable value; the simulation engine owns all mutation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .cutting import (
    CuttingParams,
    Regime,
    Side,
    cutting_from_heading,
    heading_from_cutting,
    phi_max_l2,
    phi_max_l3,
    phi_max_static,
)
from .geometry import (
    DegenerateGeometryError,
    Disk,
    GEOM_EPS,
    InfeasibleTargetError,
    Point2,
    distance,
    los_angle,
    normalize_angle,
    segment_enters_disk,
    wrap_diff,
)

ADMIT_EPS = 1e-12

VIRTUAL_SOURCE = "virtual"


class KnowledgeLevel(Enum):
    """What the evader knows about its pursuers.

    L1: initial location and motion parameters only.
    L2: additionally, each launch instant.
    L3: additionally, every launched pursuer's position.
    IDEAL_NO_LAUNCH: the L2 policy in a world where nothing ever launches.
    UNSAFE_STRAIGHT: head straight at the target, ignoring everything
        (deliberately unsafe; exists to exercise the safety audit).
    """

    L1 = "L1"
    L2 = "L2"
    L3 = "L3"
    IDEAL_NO_LAUNCH = "ideal"
    UNSAFE_STRAIGHT = "unsafe_straight"


class PursuerStatus(Enum):
    UNLAUNCHED = "unlaunched"
    ACTIVE = "active"
    EXPIRED = "expired"


@dataclass(frozen=True)
class ScenarioParams:
    """Engagement constants. Pursuer speed and time budget are derived:
    v_P = v_E / mu and t_max = R / v_P."""

    mu: float
    v_E: float
    range_R: float
    target_q: float
    launch_period_tL: float
    pn_gain_N: float
    side: Side = Side.CCW

    def __post_init__(self) -> None:
        if not (0.0 < self.mu <= 1.0):
            raise ValueError(f"speed ratio must be in (0, 1], got {self.mu}")
        if not (self.v_E > 0.0):
            raise ValueError(f"evader speed must be positive, got {self.v_E}")
        if not (self.range_R > 0.0):
            raise ValueError(f"range must be positive, got {self.range_R}")
        if self.target_q < self.range_R:
            raise ValueError("target inside reachability region "
                             f"(q={self.target_q} < R={self.range_R})")
        if not (self.launch_period_tL > 0.0):
            raise ValueError(f"launch period must be positive, got {self.launch_period_tL}")

    @property
    def v_P(self) -> float:
        return self.v_E / self.mu

    @property
    def t_max(self) -> float:
        return self.range_R / self.v_P


@dataclass(frozen=True)
class PursuerState:
    """One pursuer. ``prev_los`` carries the last sightline angle used by the
    guidance-rate estimator; None until the first update after launch."""

    id: int
    status: PursuerStatus
    launch_time: float
    position: Point2
    heading: float
    traveled_s: float
    prev_los: float | None = None


@dataclass(frozen=True)
class EvaderState:
    position: Point2
    heading: float
    knowledge_level: KnowledgeLevel


@dataclass(frozen=True)
class HeadingConstraint:
    """A heading bound expressed as (reference point, sightline angle, max
    cutting angle). ``source`` names the pursuer it came from, or "virtual"
    for the standing not-yet-launched threat at the disk center."""

    reference_point: Point2
    lam: float
    phi_max: float
    regime: Regime
    source: str

    def bound_heading(self, side: Side) -> float:
        return heading_from_cutting(self.lam, self.phi_max, side)


class SelectionMode(Enum):
    MAX_CUT = "MaxCut"
    STRAIGHT_TO_TARGET = "StraightToTarget"
    RETREAT_ONLY = "RetreatOnly"


@dataclass(frozen=True)
class SelectionResult:
    heading: float
    mode: SelectionMode
    binding: str | None


def _active_with_range(pursuers: list[PursuerState], params: ScenarioParams,
                       now: float) -> list[tuple[PursuerState, float]]:
    out = []
    for p in pursuers:
        if p.status is not PursuerStatus.ACTIVE:
            continue
        s = params.v_P * (now - p.launch_time)
        if s >= params.range_R - GEOM_EPS:
            continue  # range exhausted; poses no further threat
        out.append((p, s))
    return out


def constraints_l2(evader: EvaderState, pursuers: list[PursuerState], rr_center: Point2,
                   params: ScenarioParams, now: float) -> list[HeadingConstraint]:
    """Heading bounds when launch instants are known but positions are not.

    One worst-case bound per in-flight pursuer plus the standing bound for a
    launch that could happen right now, all framed at the disk center.
    """
    r = distance(rr_center, evader.position)
    lam = los_angle(rr_center, evader.position)
    virtual = phi_max_static(params.mu, params.range_R, r)
    constraints = [HeadingConstraint(rr_center, lam, virtual.phi_max, virtual.regime,
                                     VIRTUAL_SOURCE)]
    for p, s in _active_with_range(pursuers, params, now):
        sol = phi_max_l2(CuttingParams(params.mu, params.range_R, r, s))
        constraints.append(HeadingConstraint(rr_center, lam, sol.phi_max, sol.regime,
                                             f"p{p.id}"))
    return constraints


def constraints_l3(evader: EvaderState, pursuers: list[PursuerState], rr_center: Point2,
                   params: ScenarioParams, now: float,
                   range_margin: float = 0.0) -> list[HeadingConstraint]:
    """Heading bounds when every launched pursuer's position is known.

    Each in-flight pursuer contributes a bound framed on its own sightline to
    the evader; the standing center-framed bound still covers future launches.

    ``range_margin`` inflates the assumed pursuer range. Riding the exact
    known-position bound lets a pursuer close to contact at the instant its
    range runs out; with a finite capture radius that neglected limit case
    must be bought off by overestimating the pursuer's reach slightly.
    """
    r = distance(rr_center, evader.position)
    lam = los_angle(rr_center, evader.position)
    virtual = phi_max_static(params.mu, params.range_R, r)
    constraints = [HeadingConstraint(rr_center, lam, virtual.phi_max, virtual.regime,
                                     VIRTUAL_SOURCE)]
    plan_R = params.range_R + range_margin
    for p, s in _active_with_range(pursuers, params, now):
        d = distance(p.position, evader.position)
        if d == 0.0:
            raise DegenerateGeometryError(
                f"pursuer {p.id} coincides with the evader; capture was missed")
        sol = phi_max_l3(CuttingParams(params.mu, plan_R, r, s, d))
        constraints.append(HeadingConstraint(p.position,
                                             los_angle(p.position, evader.position),
                                             sol.phi_max, sol.regime, f"p{p.id}"))
    return constraints


def _admits(c: HeadingConstraint, psi: float, side: Side) -> bool:
    if c.regime is Regime.UNCONSTRAINED_ALL_HEADINGS:
        return True
    return cutting_from_heading(c.lam, psi, side) <= c.phi_max + ADMIT_EPS


def select_heading(constraints: list[HeadingConstraint], evader_pos: Point2,
                   target: Point2, side: Side) -> SelectionResult:
    """Pick the evader heading under a set of cutting-angle bounds.

    Go straight at the target whenever every bound admits that heading.
    Otherwise take the most aggressive heading admitted by all bounds: each
    bound caps the cut in its own frame, and the cap whose admissible set is
    smallest (compared relative to the tangential direction) binds. A bound
    that saturated at "only retreat is safe" forces direct retreat from its
    reference point.
    """
    if not constraints:
        raise ValueError("select_heading requires at least one constraint")
    psi_tgt = los_angle(evader_pos, target)
    if all(_admits(c, psi_tgt, side) for c in constraints):
        return SelectionResult(psi_tgt, SelectionMode.STRAIGHT_TO_TARGET, None)

    for c in constraints:
        if c.regime is Regime.ONLY_RETREAT_SAFE:
            return SelectionResult(normalize_angle(c.lam), SelectionMode.RETREAT_ONLY,
                                   c.source)

    psi_ref = heading_from_cutting(constraints[0].lam, 0.0, side)
    best: HeadingConstraint | None = None
    best_heading = 0.0
    best_key = -math.inf
    for c in constraints:
        if c.regime is Regime.UNCONSTRAINED_ALL_HEADINGS:
            continue  # admits every heading; never binds
        cand = c.bound_heading(side)
        off = wrap_diff(cand, psi_ref)
        key = off if side is Side.CCW else -off
        if key > best_key:
            best, best_heading, best_key = c, cand, key
    if best is None:
        return SelectionResult(psi_tgt, SelectionMode.STRAIGHT_TO_TARGET, None)
    return SelectionResult(best_heading, SelectionMode.MAX_CUT, best.source)


def l1_policy(evader: EvaderState, target: Point2, rr: Disk,
              side: Side = Side.CCW) -> float:
    """Heading for an evader that must never enter the reach disk: skirt the
    boundary until the direct segment to the target clears the open disk,
    then head straight at it."""
    r = distance(rr.center, evader.position)
    if r < rr.radius - GEOM_EPS:
        raise ValueError("evader is inside the disk; the boundary-following "
                         "policy is undefined there")
    if distance(rr.center, target) < rr.radius - GEOM_EPS:
        raise InfeasibleTargetError("target lies inside the disk")
    if not segment_enters_disk(evader.position, target, rr):
        return los_angle(evader.position, target)
    lam = los_angle(rr.center, evader.position)
    return heading_from_cutting(lam, 0.0, side)


def pro_nav_step(pursuer: PursuerState, evader_pos: Point2, prev_los: float | None,
                 dt: float, gain_N: float) -> float:
    """Proportional-navigation heading update: turn by N times the sightline
    rotation seen over the last step. A None ``prev_los`` (first step after
    launch) means zero initial rate."""
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    los = los_angle(pursuer.position, evader_pos)
    if prev_los is None:
        return pursuer.heading
    return normalize_angle(pursuer.heading + gain_N * wrap_diff(los, prev_los))


def collision_course_heading(pursuer_pos: Point2, evader_pos: Point2,
                             evader_heading: float, mu: float) -> float:
    """Heading that solves the constant-velocity intercept triangle.

    The lead angle off the pursuer->evader sightline satisfies
    sin(lead) = mu * sin(aspect); a solution always exists for mu <= 1.
    """
    los = los_angle(pursuer_pos, evader_pos)
    aspect = wrap_diff(evader_heading, los)
    lead = math.asin(min(1.0, max(-1.0, mu * math.sin(aspect))))
    return normalize_angle(los + lead)


@dataclass(frozen=True)
class LaunchEvent:
    index: int
    time: float


def next_launch_time(entry_time: float, slots_consumed: int, launch_period: float,
                     include_entry_launch: bool = False) -> float:
    """Scheduled instant of the next launch slot after ``slots_consumed`` slots
    have already been used (fired or skipped)."""
    offset = slots_consumed if include_entry_launch else slots_consumed + 1
    return entry_time + offset * launch_period


def launch_scheduler(now: float, entry_time: float, evader_inside: bool,
                     params: ScenarioParams, already_launched: int,
                     include_entry_launch: bool = False) -> LaunchEvent | None:
    """Emit at most one launch per call.

    Slots occur at fixed instants after the evader first entered the disk (at
    entry itself too when ``include_entry_launch``). A slot whose instant has
    been reached fires only if the evader is strictly inside at that moment;
    a skipped slot is never deferred, so ``already_launched`` counts consumed
    slots, fired or not.
    """
    if entry_time > now:
        raise ValueError("entry_time must not be in the future")
    due = next_launch_time(entry_time, already_launched, params.launch_period_tL,
                           include_entry_launch)
    if now + 1e-12 < due:
        return None
    if not evader_inside:
        return None
    return LaunchEvent(index=already_launched + 1, time=now)
