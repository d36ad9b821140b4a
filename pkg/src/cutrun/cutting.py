"""Maximum cutting angles: how far toward a threat an evader may steer.

A cutting angle phi is measured from the local perpendicular of the line
from a reference point to the evader; positive values cut toward the
reference. For each knowledge level there is a closed-form largest phi that
keeps the evader out of the relevant interception zone:

* ``phi_max_static``  - the threat sits at a known point with full range R,
  evader at radial distance r:  asin(((mu^2 - 1) R^2 + r^2) / (2 mu r R)).
* ``phi_max_l2``      - the threat launched a known time ago (distance
  traveled s) but its position is unknown; the bound is the worst case over
  every position it could occupy, which lands on the circle of radius s at
  bearing ``gamma_star``.
* ``phi_max_l3``      - the threat's position is known at distance d with
  remaining range R - s; measured against the threat->evader sightline
  normal rather than the center->evader one.

Saturated arguments are clamped: an argument >= 1 means every heading is
safe (regime ``UNCONSTRAINED_ALL_HEADINGS``), an argument <= -1 means only
direct retreat is (regime ``ONLY_RETREAT_SAFE``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .geometry import normalize_angle

HALF_PI = math.pi / 2.0


class ExpiredPursuerError(ValueError):
    """The pursuer has exhausted its range; callers must filter these out."""


class Regime(Enum):
    INTERIOR = "interior"
    UNCONSTRAINED_ALL_HEADINGS = "unconstrained_all_headings"
    ONLY_RETREAT_SAFE = "only_retreat_safe"


class Side(Enum):
    """Which half-plane the evader routes through; CCW is the +y side of the
    canonical scenario."""

    CCW = "ccw"
    CW = "cw"


@dataclass(frozen=True)
class CuttingParams:
    """Inputs to the cutting-angle formulas.

    mu: evader/pursuer speed ratio, in (0, 1].
    range_R: pursuer's full range.
    radial_r: evader distance from the reference point (reach-disk center).
    traveled_s: distance the pursuer has covered since launch.
    dist_d: actual pursuer-evader distance, needed only when the pursuer's
        position is known.
    """

    mu: float
    range_R: float
    radial_r: float
    traveled_s: float = 0.0
    dist_d: float | None = None

    def __post_init__(self) -> None:
        if not (0.0 < self.mu <= 1.0):
            raise ValueError(f"speed ratio must be in (0, 1], got {self.mu}")
        if not (self.range_R > 0.0):
            raise ValueError(f"range must be positive, got {self.range_R}")
        if not (self.radial_r > 0.0):
            raise ValueError(f"radial distance must be positive, got {self.radial_r}")
        if not (0.0 <= self.traveled_s <= self.range_R):
            raise ValueError(
                f"traveled distance must lie in [0, {self.range_R}], got {self.traveled_s}")
        if self.dist_d is not None and not (self.dist_d > 0.0):
            raise ValueError(f"pursuer-evader distance must be positive, got {self.dist_d}")


@dataclass(frozen=True)
class CuttingSolution:
    """A maximum cutting angle plus how it was obtained.

    ``phi_max`` always lies in [-pi/2, pi/2]. ``alpha`` and ``delta`` are the
    raw bound and the frame correction for the unknown-position case;
    ``gamma_star`` is the worst-case bearing when one was computed. ``regime``
    reports whether the underlying argument saturated.
    """

    phi_max: float
    regime: Regime
    alpha: float | None = None
    delta: float | None = None
    gamma_star: float | None = None


def _clamped_asin(arg: float) -> tuple[float, Regime]:
    if arg >= 1.0:
        return HALF_PI, Regime.UNCONSTRAINED_ALL_HEADINGS
    if arg <= -1.0:
        return -HALF_PI, Regime.ONLY_RETREAT_SAFE
    return math.asin(arg), Regime.INTERIOR


def phi_max_static(mu: float, range_R: float, radial_r: float) -> CuttingSolution:
    """Largest safe cutting angle against a full-range threat at a known point."""
    if not (radial_r > 0.0):
        raise ValueError(f"radial distance must be positive, got {radial_r}")
    if not (0.0 < mu <= 1.0):
        raise ValueError(f"speed ratio must be in (0, 1], got {mu}")
    if not (range_R > 0.0):
        raise ValueError(f"range must be positive, got {range_R}")
    arg = ((mu * mu - 1.0) * range_R * range_R + radial_r * radial_r) \
        / (2.0 * mu * radial_r * range_R)
    phi, regime = _clamped_asin(arg)
    return CuttingSolution(phi_max=phi, regime=regime)


def d_of_gamma(radial_r: float, traveled_s: float, gamma: float) -> float:
    """Distance to a hypothetical pursuer at bearing ``gamma`` on the circle of
    radius ``traveled_s`` around the reference point."""
    return math.sqrt(radial_r * radial_r
                     - 2.0 * radial_r * traveled_s * math.cos(gamma)
                     + traveled_s * traveled_s)


def phi_of_gamma(params: CuttingParams, gamma: float) -> CuttingSolution:
    """Safe cutting angle against a launched pursuer assumed at bearing ``gamma``.

    The raw bound ``alpha`` treats the hypothetical position as a known threat
    with the remaining range; ``delta`` re-expresses it against the common
    perpendicular of the center->evader line so bounds for different bearings
    are comparable. The reported regime describes ``alpha``'s saturation.
    """
    if params.traveled_s >= params.range_R:
        raise ExpiredPursuerError(
            f"pursuer out of range (s={params.traveled_s} >= R={params.range_R})")
    remaining = params.range_R - params.traveled_s
    d = d_of_gamma(params.radial_r, params.traveled_s, gamma)
    arg = ((params.mu * params.mu - 1.0) * remaining * remaining + d * d) \
        / (2.0 * params.mu * d * remaining)
    alpha, regime = _clamped_asin(arg)
    delta = math.atan2(params.traveled_s * math.sin(gamma),
                       params.radial_r - params.traveled_s * math.cos(gamma))
    return CuttingSolution(phi_max=alpha - delta, regime=regime, alpha=alpha, delta=delta)


def gamma_star(params: CuttingParams) -> float:
    """Worst-case bearing of an unseen launched pursuer.

    This is where the bearing-dependent bound is smallest. When the interior
    critical point vanishes the argument is clamped and the worst case is the
    collinear one (gamma = 0).
    """
    if params.traveled_s >= params.range_R:
        raise ExpiredPursuerError(
            f"pursuer out of range (s={params.traveled_s} >= R={params.range_R})")
    remaining = params.range_R - params.traveled_s
    arg = (params.range_R * params.range_R + params.radial_r * params.radial_r
           - params.mu * params.mu * remaining * remaining) \
        / (2.0 * params.radial_r * params.range_R)
    arg = min(1.0, max(-1.0, arg))
    return math.acos(arg)


def phi_max_l2(params: CuttingParams) -> CuttingSolution:
    """Largest cutting angle safe from a launched pursuer whose position is
    unknown: the worst case over everywhere it could have flown."""
    if params.traveled_s >= params.range_R:
        raise ExpiredPursuerError(
            f"pursuer out of range (s={params.traveled_s} >= R={params.range_R})")
    remaining = params.range_R - params.traveled_s
    r = params.radial_r
    arg = (params.mu * params.mu * remaining * remaining
           + r * r - params.range_R * params.range_R) \
        / (2.0 * params.mu * r * remaining)
    phi, regime = _clamped_asin(arg)
    return CuttingSolution(phi_max=phi, regime=regime, gamma_star=gamma_star(params))


def phi_max_l3(params: CuttingParams) -> CuttingSolution:
    """Largest cutting angle safe from a launched pursuer at a known position,
    measured against the pursuer->evader sightline normal."""
    if params.traveled_s >= params.range_R:
        raise ExpiredPursuerError(
            f"pursuer out of range (s={params.traveled_s} >= R={params.range_R})")
    if params.dist_d is None:
        raise ValueError("known-position bound requires dist_d")
    remaining = params.range_R - params.traveled_s
    d = params.dist_d
    arg = ((params.mu * params.mu - 1.0) * remaining * remaining + d * d) \
        / (2.0 * params.mu * d * remaining)
    phi, regime = _clamped_asin(arg)
    return CuttingSolution(phi_max=phi, regime=regime)


def heading_from_cutting(lam: float, phi: float, side: Side) -> float:
    """Absolute heading for cutting angle ``phi`` in the frame whose sightline
    (reference point to evader) has angle ``lam``."""
    if side is Side.CCW:
        return normalize_angle(lam - phi - HALF_PI)
    return normalize_angle(lam + phi + HALF_PI)


def cutting_from_heading(lam: float, psi: float, side: Side) -> float:
    """Cutting angle required to fly heading ``psi``; inverse of
    heading_from_cutting for the same side."""
    if side is Side.CCW:
        return normalize_angle(lam - psi - HALF_PI)
    return normalize_angle(psi - lam - HALF_PI)
