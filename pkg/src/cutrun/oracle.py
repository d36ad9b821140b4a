"""Independent brute-force checks for the closed-form results and the runs.

Nothing here reuses the closed forms it verifies: the bearing sweep minimizes
the raw per-bearing bound on a dense grid, the detour length comes from plane
geometry, and the safety audit replays a recorded evader track against a grid
of pursuer behaviors none of which informed that track.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .agents import KnowledgeLevel
from .cutting import CuttingParams, ExpiredPursuerError
from .engine import SimResult, range_neglect_band
from .geometry import (
    GEOM_EPS,
    InfeasibleTargetError,
    Point2,
    los_angle,
    min_distance_linear_motion,
    normalize_angle,
    unit,
    wrap_diff,
)

AUDIT_GUIDANCE_LAWS = ("pn3", "pn4", "pn5", "pn6", "cc", "pp")


def brute_min_phi(params: CuttingParams, grid_size: int) -> tuple[float, float]:
    """Worst cutting-angle bound over a dense bearing grid on [0, pi].

    Evaluates the per-bearing bound (raw angle minus the frame correction) at
    ``grid_size`` evenly spaced bearings and returns (minimum, bearing at the
    minimum). The scan covers half the circle; the other half mirrors for the
    +y routing side.
    """
    if grid_size < 100:
        raise ValueError(f"grid_size must be at least 100, got {grid_size}")
    if params.traveled_s >= params.range_R:
        raise ExpiredPursuerError(
            f"pursuer out of range (s={params.traveled_s} >= R={params.range_R})")
    mu, R = params.mu, params.range_R
    r, s = params.radial_r, params.traveled_s
    remaining = R - s
    gammas = np.linspace(0.0, math.pi, grid_size)
    d = np.sqrt(r * r - 2.0 * r * s * np.cos(gammas) + s * s)
    arg = ((mu * mu - 1.0) * remaining * remaining + d * d) / (2.0 * mu * d * remaining)
    alpha = np.arcsin(np.clip(arg, -1.0, 1.0))
    delta = np.arctan2(s * np.sin(gammas), r - s * np.cos(gammas))
    phi = alpha - delta
    k = int(np.argmin(phi))
    return float(phi[k]), float(gammas[k])


def l1_length_closed_form(R: float, q: float) -> float:
    """Length of the shortest path from (-R, 0) to (q, 0) that never enters
    the open disk of radius R at the origin: boundary arc plus tangent."""
    if q < R:
        raise InfeasibleTargetError(f"target inside the disk (q={q} < R={R})")
    beta = math.acos(R / q)
    return R * (math.pi - beta) + math.sqrt(q * q - R * R)


@dataclass(frozen=True)
class AuditGrid:
    """Pursuer behaviors to replay against a recorded evader track.

    ``guidance_laws`` are tokens from AUDIT_GUIDANCE_LAWS (pnN = proportional
    navigation with gain N, cc = continuous collision course, pp = pure
    pursuit). ``launch_spacing`` controls the extra launch-time sweep used for
    evaders whose track cannot have depended on launch instants.
    """

    label: str
    guidance_laws: tuple[str, ...] = AUDIT_GUIDANCE_LAWS
    launch_spacing: float = 0.1

    @classmethod
    def coarse(cls) -> "AuditGrid":
        return cls(label="coarse", launch_spacing=0.1)

    @classmethod
    def fine(cls) -> "AuditGrid":
        return cls(label="fine", launch_spacing=0.02)


@dataclass(frozen=True)
class CaptureRecord:
    strategy: str
    time: float
    separation: float


@dataclass
class AuditReport:
    scenario_id: str
    strategies_tested: int
    captures: int
    min_separation: float
    worst_strategy: str
    violations: list[CaptureRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.captures == 0


def _pursuer_heading(law: str, gain_default: float, heading: float,
                     prev_los: float | None, los: float, evader_vel_heading: float,
                     mu: float) -> float:
    if law.startswith("pn"):
        if prev_los is None:
            return heading
        return normalize_angle(heading + float(law[2:]) * wrap_diff(los, prev_los))
    if law == "cc":
        # collision-course launch, proportional navigation afterwards
        if prev_los is None:
            aspect = wrap_diff(evader_vel_heading, los)
            lead = math.asin(min(1.0, max(-1.0, mu * math.sin(aspect))))
            return normalize_angle(los + lead)
        return normalize_angle(heading + gain_default * wrap_diff(los, prev_los))
    if law == "pp":
        return los
    raise ValueError(f"unknown guidance law {law!r}")


def _replay(result: SimResult, launch_index: int, law: str) -> tuple[float, float | None]:
    """Fly one pursuer from the disk center against the recorded evader track.

    Returns (minimum separation while in range, capture time or None). The
    replay mirrors the engine's stepping: expiry is applied before the capture
    check, so range-limit contact never counts.
    """
    sc = result.config.scenario
    eps = result.config.capture_eps
    band = range_neglect_band(sc.v_E, sc.v_P, sc.range_R, eps, result.config.dt)
    samples = result.samples
    pos = Point2(0.0, 0.0)
    heading = math.pi
    prev_los: float | None = None
    s = 0.0
    min_sep = math.inf
    capture_time: float | None = None
    for k in range(launch_index, len(samples) - 1):
        a, b = samples[k], samples[k + 1]
        step = b.t - a.t
        if step <= 0.0:
            continue
        e_pos = a.position
        e_vel = Point2((b.x - a.x) / step, (b.y - a.y) / step)
        e_heading = math.atan2(e_vel.y, e_vel.x) if (e_vel.x or e_vel.y) else a.psi
        los = los_angle(pos, e_pos) if (pos.x != e_pos.x or pos.y != e_pos.y) else heading
        heading = _pursuer_heading(law, sc.pn_gain_N, heading, prev_los, los,
                                   e_heading, sc.mu)
        prev_los = los
        p_vel = unit(heading).scaled(sc.v_P)
        s_new = s + sc.v_P * step
        if s_new >= sc.range_R - GEOM_EPS:
            break
        sep = min_distance_linear_motion(pos - e_pos, p_vel - e_vel, step)
        if sep < min_sep:
            min_sep = sep
        # contact within the neglect band of range exhaustion is the
        # max-range limit case, not a capture
        if sep <= eps and capture_time is None and s_new < sc.range_R - band:
            capture_time = b.t
        pos = pos + p_vel.scaled(step)
        s = s_new
    return min_sep, capture_time


def _launch_indices(result: SimResult, grid: AuditGrid) -> list[tuple[str, int]]:
    """(descriptor, sample index) pairs for audited launch instants.

    Tracks that reacted to recorded launches are replayed at exactly those
    instants; launch-agnostic tracks (avoid-the-disk and the deliberately
    unsafe straight line) additionally sweep launch times over the whole run.
    """
    samples = result.samples
    times = [s.t for s in samples]
    pairs: list[tuple[str, int]] = []
    seen: set[int] = set()

    def add(t: float) -> None:
        k = min(range(len(times)), key=lambda i: abs(times[i] - t))
        if k < len(samples) - 1 and k not in seen:
            seen.add(k)
            pairs.append((f"t{times[k]:.3f}", k))

    for e in result.launch_events():
        add(e.t)
    if result.config.knowledge_level in (KnowledgeLevel.L1, KnowledgeLevel.UNSAFE_STRAIGHT):
        horizon = times[-1]
        n = max(1, int(horizon / grid.launch_spacing))
        for j in range(n + 1):
            add(min(j * grid.launch_spacing, times[-1]))
    return pairs


def _effective_laws(result: SimResult, grid: AuditGrid) -> tuple[str, ...]:
    """Guidance laws whose replays are consistent with what the evader knew.

    A track recorded under position knowledge reacted to the pursuers'
    actual launch orientation; a collision-course launch replaces that
    orientation, perturbing the launch state rather than the guidance, so it
    is excluded there just as launch-time perturbation is excluded for any
    launch-aware track. Position-blind tracks face the full grid.
    """
    if result.config.knowledge_level is KnowledgeLevel.L3:
        return tuple(law for law in grid.guidance_laws if law != "cc")
    return grid.guidance_laws


def safety_audit(result: SimResult, grid: AuditGrid | None = None,
                 scenario_id: str = "") -> AuditReport:
    """Replay the recorded evader track against every gridded pursuer behavior
    and report captures. Replays are independent of one another; the report is
    an order-insensitive merge of the per-strategy outcomes."""
    if grid is None:
        grid = AuditGrid.coarse()
    pairs = _launch_indices(result, grid)
    laws = _effective_laws(result, grid)
    strategies = 0
    captures = 0
    min_sep = math.inf
    worst = "none"
    violations: list[CaptureRecord] = []
    for desc, k in pairs:
        for law in laws:
            strategies += 1
            name = f"{law}@{desc}"
            sep, cap_t = _replay(result, k, law)
            if sep < min_sep:
                min_sep = sep
                worst = name
            if cap_t is not None:
                captures += 1
                violations.append(CaptureRecord(strategy=name, time=cap_t, separation=sep))
    return AuditReport(
        scenario_id=scenario_id or result.config.knowledge_level.value,
        strategies_tested=strategies,
        captures=captures,
        min_separation=min_sep,
        worst_strategy=worst,
        violations=violations,
    )


def heading_rate_check(result: SimResult, window: tuple[float, float]) -> float:
    """Largest |heading rate| over an event-free time window, by central
    differences of the recorded headings. Raises if any recorded event falls
    inside the window, since heading jumps are expected there."""
    t0, t1 = window
    if t1 <= t0:
        raise ValueError(f"empty window {window}")
    for e in result.events:
        if t0 < e.t < t1:
            raise ValueError(f"window {window} contains a {e.kind} event at t={e.t}")
    inside = [s for s in result.samples if t0 <= s.t <= t1]
    if len(inside) < 3:
        raise ValueError(f"window {window} holds fewer than 3 samples")
    worst = 0.0
    for k in range(1, len(inside) - 1):
        dt_pair = inside[k + 1].t - inside[k - 1].t
        rate = abs(wrap_diff(inside[k + 1].psi, inside[k - 1].psi)) / dt_pair
        if rate > worst:
            worst = rate
    return worst
