"""Deterministic fixed-step closed-loop simulation.

Step order, repeated at interval dt until a terminal condition:

1. fire any due launch slot (gated on the evader being strictly inside);
2. evader picks a heading from its knowledge-level policy;
3. in-flight pursuers update their guidance headings;
4. everyone moves in a straight sub-step at constant speed;
5. pursuers that exhausted their range expire (before capture is checked,
   so a range-limit interception never counts);
6. capture: closest approach between the evader and any still-active pursuer
   over the sub-step at or below capture_eps;
7. arrival: evader within arrive_eps of the target.

Identical configs produce bit-identical results; there is no randomness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .agents import (
    EvaderState,
    KnowledgeLevel,
    LaunchEvent,
    PursuerState,
    PursuerStatus,
    ScenarioParams,
    SelectionMode,
    SelectionResult,
    collision_course_heading,
    constraints_l2,
    constraints_l3,
    l1_policy,
    launch_scheduler,
    next_launch_time,
    pro_nav_step,
    select_heading,
)
from .geometry import (
    Disk,
    GEOM_EPS,
    Point2,
    distance,
    los_angle,
    min_distance_linear_motion,
    segment_enters_disk,
    unit,
    wrap_diff,
)

MODE_ARC = "Arc"

# Planning inflation of pursuer range for the known-position policy, as a
# multiple of the capture radius: riding the exact bound ends in contact at
# range exhaustion, the limit case that only point capture may neglect. The
# factor keeps the realized closest approach well over an order of magnitude
# above the capture ball against navigating pursuers.
L3_RANGE_MARGIN_FACTOR = 60.0


def range_neglect_band(v_E: float, v_P: float, range_R: float, capture_eps: float,
                       dt: float) -> float:
    """Range window before exhaustion inside which capture does not count.

    With point capture, an evader riding a safe-heading bound is touched only
    at the instant the pursuer's range runs out, and such contact is
    neglected. A finite capture ball of radius capture_eps trips up to
    capture_eps / (v_P - v_E) before that instant (slowest closing is the
    tail chase), so the neglect must extend that far back, plus one step of
    discretization. Capped at 5% of the range so near-equal speeds cannot
    hollow out the capture test.
    """
    closing = max(v_P - v_E, 1e-9)
    return min(v_P * (capture_eps / closing) + v_P * dt, 0.05 * range_R)


class NumericalDivergenceError(RuntimeError):
    """A state variable stopped being finite; the diagnostic names it."""


class GuidanceLaw(Enum):
    """How launched pursuers steer. All launches are guided by proportional
    navigation; the law picks the initial orientation: PRO_NAV launches
    facing -x, COLLISION_COURSE launches on the instantaneous intercept
    course. NONE holds the -x launch heading forever."""

    PRO_NAV = "pronav"
    COLLISION_COURSE = "collision_course"
    NONE = "none"


class Outcome(Enum):
    ARRIVED = "Arrived"
    CAPTURED = "Captured"
    TIMED_OUT = "TimedOut"


@dataclass(frozen=True)
class SimConfig:
    scenario: ScenarioParams
    knowledge_level: KnowledgeLevel
    guidance: GuidanceLaw = GuidanceLaw.PRO_NAV
    dt: float = 1e-3
    capture_eps: float = 1e-3
    arrive_eps: float = 1e-3
    time_limit: float | None = None
    first_launch_at_entry: bool = False

    def __post_init__(self) -> None:
        if not (self.dt > 0.0):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not (self.capture_eps > 0.0):
            raise ValueError(f"capture_eps must be positive, got {self.capture_eps}")
        if not (self.arrive_eps > 0.0):
            raise ValueError(f"arrive_eps must be positive, got {self.arrive_eps}")
        if self.time_limit is not None and not (self.time_limit > 0.0):
            raise ValueError(f"time_limit must be positive, got {self.time_limit}")

    @property
    def effective_time_limit(self) -> float:
        if self.time_limit is not None:
            return self.time_limit
        sc = self.scenario
        return 10.0 * (sc.target_q + 2.0 * sc.range_R) / sc.v_E


@dataclass(frozen=True)
class EvaderSample:
    t: float
    x: float
    y: float
    psi: float
    mode: str
    binding: str
    n_active: int

    @property
    def position(self) -> Point2:
        return Point2(self.x, self.y)


@dataclass(frozen=True)
class PursuerSample:
    t: float
    x: float
    y: float
    psi: float
    s: float


@dataclass(frozen=True)
class Event:
    kind: str  # "launch" | "boundary" | "arrival" | "capture" | "timeout"
    t: float
    pursuer_id: int | None = None


@dataclass
class SimResult:
    config: SimConfig
    samples: list[EvaderSample]
    pursuer_tracks: dict[int, list[PursuerSample]]
    events: list[Event]
    outcome: Outcome
    path_length: float
    min_separation: float
    final_time: float

    def launch_events(self) -> list[Event]:
        return [e for e in self.events if e.kind == "launch"]


def path_length(points: Iterable) -> float:
    """Sum of straight-line distances between consecutive trajectory points.

    Accepts evader samples or bare (x, y) pairs; fewer than two points give 0.
    """
    total = 0.0
    prev: tuple[float, float] | None = None
    for p in points:
        xy = (p.x, p.y) if hasattr(p, "x") else (p[0], p[1])
        if prev is not None:
            total += math.hypot(xy[0] - prev[0], xy[1] - prev[1])
        prev = xy
    return total


@dataclass(frozen=True)
class ImprovementRow:
    level: str
    length: float
    improvement_pct: float | None  # None for the baseline row


def improvement_table(results: Mapping) -> list[ImprovementRow]:
    """Rows of (level, path length, percent shorter than the avoid-everything
    baseline). The mapping must contain an L1 entry to anchor the comparison."""
    keyed = {(k.value if isinstance(k, KnowledgeLevel) else str(k)): v
             for k, v in results.items()}
    if "L1" not in keyed:
        raise ValueError("improvement table requires an L1 baseline result")
    base = keyed["L1"].path_length
    rows = []
    for level, res in keyed.items():
        pct = None if level == "L1" else 100.0 * (base - res.path_length) / base
        rows.append(ImprovementRow(level=level, length=res.path_length,
                                   improvement_pct=pct))
    return rows


def _decide(config: SimConfig, evader: EvaderState, pursuers: list[PursuerState],
            rr: Disk, target: Point2, now: float) -> tuple[float, str, str]:
    kl = config.knowledge_level
    if kl is KnowledgeLevel.L1:
        heading = l1_policy(evader, target, rr, config.scenario.side)
        blocked = segment_enters_disk(evader.position, target, rr)
        mode = MODE_ARC if blocked else SelectionMode.STRAIGHT_TO_TARGET.value
        return heading, mode, ""
    if kl is KnowledgeLevel.UNSAFE_STRAIGHT:
        return (los_angle(evader.position, target),
                SelectionMode.STRAIGHT_TO_TARGET.value, "")
    if kl is KnowledgeLevel.L3:
        cons = constraints_l3(evader, pursuers, rr.center, config.scenario, now,
                              range_margin=L3_RANGE_MARGIN_FACTOR * config.capture_eps)
    else:  # L2 and the no-launch ideal share the launch-aware policy
        cons = constraints_l2(evader, pursuers, rr.center, config.scenario, now)
    sel: SelectionResult = select_heading(cons, evader.position, target,
                                          config.scenario.side)
    return sel.heading, sel.mode.value, sel.binding or ""


def _update_guidance(config: SimConfig, pursuers: list[PursuerState],
                     evader_pos: Point2, evader_heading: float) -> None:
    sc = config.scenario
    for i, p in enumerate(pursuers):
        if p.status is not PursuerStatus.ACTIVE:
            continue
        los = los_angle(p.position, evader_pos)
        if config.guidance is GuidanceLaw.PRO_NAV:
            heading = pro_nav_step(p, evader_pos, p.prev_los, config.dt, sc.pn_gain_N)
        elif config.guidance is GuidanceLaw.COLLISION_COURSE:
            if p.prev_los is None:
                heading = collision_course_heading(p.position, evader_pos,
                                                   evader_heading, sc.mu)
            else:
                heading = pro_nav_step(p, evader_pos, p.prev_los, config.dt,
                                       sc.pn_gain_N)
        else:
            heading = p.heading
        pursuers[i] = replace(p, heading=heading, prev_los=los)


def _check_finite(evader: EvaderState, pursuers: Sequence[PursuerState],
                  t: float) -> None:
    if not (math.isfinite(evader.position.x) and math.isfinite(evader.position.y)
            and math.isfinite(evader.heading)):
        raise NumericalDivergenceError(f"evader state non-finite at t={t}")
    for p in pursuers:
        if not (math.isfinite(p.position.x) and math.isfinite(p.position.y)
                and math.isfinite(p.heading)):
            raise NumericalDivergenceError(f"pursuer {p.id} state non-finite at t={t}")


def _boundary_events(samples: Sequence[EvaderSample], rr: Disk, v_E: float,
                     dt: float) -> list[Event]:
    """Boundary contacts recovered from the recorded track: sign changes of
    (radius - R) plus tangential touches, i.e. local radius maxima within one
    step length of the boundary."""
    events: list[Event] = []
    radii = [distance(rr.center, s.position) for s in samples]
    R = rr.radius
    tol = v_E * dt
    for k in range(1, len(radii)):
        prev_out = radii[k - 1] >= R
        now_out = radii[k] >= R
        if prev_out != now_out:
            events.append(Event("boundary", samples[k].t))
        elif (not now_out and 0 < k < len(radii) - 1
              and radii[k - 1] < radii[k] >= radii[k + 1]
              and R - radii[k] <= tol):
            events.append(Event("boundary", samples[k].t))
    return events


def run(config: SimConfig) -> SimResult:
    """Simulate one engagement: evader from (-R, 0) to (q, 0) with the reach
    disk centered at the origin. See the module docstring for step order."""
    sc = config.scenario
    rr_center = Point2(0.0, 0.0)
    rr = Disk(rr_center, sc.range_R)
    target = Point2(sc.target_q, 0.0)
    dt = config.dt
    time_limit = config.effective_time_limit
    launches_enabled = config.knowledge_level is not KnowledgeLevel.IDEAL_NO_LAUNCH

    policy_level = (KnowledgeLevel.L2
                    if config.knowledge_level is KnowledgeLevel.IDEAL_NO_LAUNCH
                    else config.knowledge_level)
    evader = EvaderState(Point2(-sc.range_R, 0.0), 0.0, policy_level)
    pursuers: list[PursuerState] = []
    tracks: dict[int, list[PursuerSample]] = {}
    samples: list[EvaderSample] = []
    events: list[Event] = []

    entry_time: float | None = None
    slots_consumed = 0
    launched = 0
    step_index = 0
    t = 0.0
    min_sep = math.inf
    neglect_band = range_neglect_band(sc.v_E, sc.v_P, sc.range_R,
                                      config.capture_eps, dt)
    outcome: Outcome | None = None
    last_mode = SelectionMode.STRAIGHT_TO_TARGET.value
    last_binding = ""

    def n_active() -> int:
        return sum(1 for p in pursuers if p.status is PursuerStatus.ACTIVE)

    def record_terminal(t_now: float, heading: float) -> None:
        samples.append(EvaderSample(t_now, evader.position.x, evader.position.y,
                                    heading, last_mode, last_binding, n_active()))
        for p in pursuers:
            if p.status is PursuerStatus.ACTIVE:
                tracks[p.id].append(PursuerSample(t_now, p.position.x, p.position.y,
                                                  p.heading, p.traveled_s))

    while True:
        _check_finite(evader, pursuers, t)

        if distance(evader.position, target) <= config.arrive_eps:
            outcome = Outcome.ARRIVED
            events.append(Event("arrival", t))
            record_terminal(t, evader.heading)
            break
        if t >= time_limit:
            outcome = Outcome.TIMED_OUT
            events.append(Event("timeout", t))
            record_terminal(t, evader.heading)
            break

        # 1. launches
        if launches_enabled and entry_time is not None:
            while next_launch_time(entry_time, slots_consumed, sc.launch_period_tL,
                                   config.first_launch_at_entry) <= t + 1e-12:
                ev: LaunchEvent | None = launch_scheduler(
                    t, entry_time, rr.contains(evader.position), sc, slots_consumed,
                    config.first_launch_at_entry)
                slots_consumed += 1
                if ev is not None:
                    launched += 1
                    p = PursuerState(launched, PursuerStatus.ACTIVE, t, rr_center,
                                     math.pi, 0.0)
                    pursuers.append(p)
                    tracks[p.id] = []
                    events.append(Event("launch", t, pursuer_id=p.id))

        # 2. evader decision
        heading, mode, binding = _decide(config, evader, pursuers, rr, target, t)
        evader = replace(evader, heading=heading)
        last_mode, last_binding = mode, binding

        # 3. pursuer guidance
        _update_guidance(config, pursuers, evader.position, heading)

        samples.append(EvaderSample(t, evader.position.x, evader.position.y,
                                    heading, mode, binding, n_active()))
        for p in pursuers:
            if p.status is PursuerStatus.ACTIVE:
                tracks[p.id].append(PursuerSample(t, p.position.x, p.position.y,
                                                  p.heading, p.traveled_s))

        # 4. move; the last step toward the target may be partial
        step = dt
        dist_tgt = distance(evader.position, target)
        aimed = abs(wrap_diff(heading, los_angle(evader.position, target))) < 1e-9
        if aimed and dist_tgt <= sc.v_E * dt:
            step = dist_tgt / sc.v_E
        evader_vel = unit(heading).scaled(sc.v_E)
        new_pos = evader.position + evader_vel.scaled(step)

        captured_by: int | None = None
        for i, p in enumerate(pursuers):
            if p.status is not PursuerStatus.ACTIVE:
                continue
            p_vel = unit(p.heading).scaled(sc.v_P)
            p_new = p.position + p_vel.scaled(step)
            s_new = p.traveled_s + sc.v_P * step
            if s_new >= sc.range_R - GEOM_EPS:
                # expiry precedes the capture check: range-limit interceptions
                # are neglected
                pursuers[i] = replace(p, position=p_new, traveled_s=s_new,
                                      status=PursuerStatus.EXPIRED)
                tracks[p.id].append(PursuerSample(t + step, p_new.x, p_new.y,
                                                  p.heading, s_new))
                continue
            sep = min_distance_linear_motion(p.position - evader.position,
                                             p_vel - evader_vel, step)
            if sep < min_sep:
                min_sep = sep
            # contact this close to range exhaustion is the neglected
            # max-range interception, not a capture
            if (sep <= config.capture_eps and captured_by is None
                    and s_new < sc.range_R - neglect_band):
                captured_by = p.id
            pursuers[i] = replace(p, position=p_new, traveled_s=s_new)

        evader = replace(evader, position=new_pos)
        t_end = (step_index + 1) * dt if step == dt else t + step
        step_index += 1

        if captured_by is not None:
            outcome = Outcome.CAPTURED
            events.append(Event("capture", t_end, pursuer_id=captured_by))
            record_terminal(t_end, heading)
            t = t_end
            break
        if distance(new_pos, target) <= config.arrive_eps:
            outcome = Outcome.ARRIVED
            events.append(Event("arrival", t_end))
            record_terminal(t_end, heading)
            t = t_end
            break

        if entry_time is None and rr.contains(new_pos):
            entry_time = t_end
        t = t_end

    events.extend(_boundary_events(samples, rr, sc.v_E, dt))
    events.sort(key=lambda e: (e.t, e.kind))
    return SimResult(
        config=config,
        samples=samples,
        pursuer_tracks=tracks,
        events=events,
        outcome=outcome,
        path_length=path_length(samples),
        min_separation=min_sep,
        final_time=t,
    )
