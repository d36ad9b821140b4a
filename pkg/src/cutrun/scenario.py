"""Scenario files: flat ``key = value`` lines with ``#`` comments.

All quantities are dimensionless scenario units. Unknown and duplicate keys
are rejected with the offending line number. Every run is deterministic, so
there is no seed key.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

from .agents import KnowledgeLevel, ScenarioParams
from .cutting import Side
from .engine import GuidanceLaw, SimConfig

REQUIRED_KEYS = ("mu", "v_E", "R", "q", "t_L", "N", "knowledge_level")
DEFAULTS: dict[str, str] = {
    "dt": "0.001",
    "capture_eps": "0.001",
    "arrive_eps": "0.001",
    "guidance": "pronav",
    "side": "ccw",
    "first_launch_at_entry": "false",
}
KEY_ORDER = ("mu", "v_E", "R", "q", "t_L", "N", "dt", "capture_eps", "arrive_eps",
             "knowledge_level", "guidance", "side", "first_launch_at_entry")

_LEVELS = {lv.value.lower(): lv for lv in KnowledgeLevel}
_GUIDANCE = {g.value: g for g in GuidanceLaw}
_SIDES = {s.value: s for s in Side}


class ScenarioError(ValueError):
    """Malformed scenario file; the message is anchored to a line when known."""


@dataclass(frozen=True)
class Scenario:
    mu: float
    v_E: float
    R: float
    q: float
    t_L: float
    N: float
    dt: float
    capture_eps: float
    arrive_eps: float
    knowledge_level: KnowledgeLevel
    guidance: GuidanceLaw
    side: Side
    first_launch_at_entry: bool

    def to_config(self, dt_override: float | None = None) -> SimConfig:
        params = ScenarioParams(mu=self.mu, v_E=self.v_E, range_R=self.R,
                                target_q=self.q, launch_period_tL=self.t_L,
                                pn_gain_N=self.N, side=self.side)
        return SimConfig(scenario=params, knowledge_level=self.knowledge_level,
                         guidance=self.guidance,
                         dt=self.dt if dt_override is None else dt_override,
                         capture_eps=self.capture_eps, arrive_eps=self.arrive_eps,
                         first_launch_at_entry=self.first_launch_at_entry)

    def with_value(self, key: str, raw: str) -> "Scenario":
        """Copy with one key replaced by a raw string value (sweep support)."""
        if key not in KEY_ORDER:
            raise ScenarioError(f"unknown scenario key {key!r}")
        return replace(self, **{_FIELD_BY_KEY[key]: _convert(key, raw, line=None)})


_FIELD_BY_KEY = {k: k for k in KEY_ORDER}


def _fail(line: int | None, msg: str, source: str = "scenario") -> ScenarioError:
    prefix = f"{source}:{line}: " if line is not None else f"{source}: "
    return ScenarioError(prefix + msg)


def _convert(key: str, raw: str, line: int | None, source: str = "scenario"):
    if key in ("mu", "v_E", "R", "q", "t_L", "N", "dt", "capture_eps", "arrive_eps"):
        try:
            return float(raw)
        except ValueError:
            raise _fail(line, f"key {key!r} needs a number, got {raw!r}", source) from None
    if key == "knowledge_level":
        lv = _LEVELS.get(raw.lower())
        if lv is None:
            raise _fail(line, f"unknown knowledge_level {raw!r} "
                        f"(expected one of {sorted(set(l.value for l in KnowledgeLevel))})",
                        source)
        return lv
    if key == "guidance":
        g = _GUIDANCE.get(raw.lower())
        if g is None:
            raise _fail(line, f"unknown guidance {raw!r}", source)
        return g
    if key == "side":
        s = _SIDES.get(raw.lower())
        if s is None:
            raise _fail(line, f"unknown side {raw!r}", source)
        return s
    if key == "first_launch_at_entry":
        low = raw.lower()
        if low not in ("true", "false"):
            raise _fail(line, f"key {key!r} needs true or false, got {raw!r}", source)
        return low == "true"
    raise _fail(line, f"unknown key {key!r}", source)


def parse_scenario_text(text: str, source: str = "scenario") -> Scenario:
    seen: dict[str, str] = {}
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        stripped = rawline.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise _fail(lineno, f"expected 'key = value', got {rawline.strip()!r}", source)
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if key not in KEY_ORDER:
            raise _fail(lineno, f"unknown key {key!r}", source)
        if key in seen:
            raise _fail(lineno, f"duplicate key {key!r}", source)
        if not value:
            raise _fail(lineno, f"key {key!r} has no value", source)
        seen[key] = value
        _convert(key, value, lineno, source)  # validate with line context
    for key in REQUIRED_KEYS:
        if key not in seen and key not in DEFAULTS:
            raise _fail(None, f"missing required key {key!r}", source)
    merged = {**DEFAULTS, **seen}
    values = {k: _convert(k, merged[k], None, source) for k in KEY_ORDER}
    scn = Scenario(**values)
    if scn.q < scn.R:
        raise _fail(None, "target inside reachability region "
                    f"(q={scn.q} < R={scn.R})", source)
    _validate_numbers(scn, source)
    return scn


def _validate_numbers(scn: Scenario, source: str) -> None:
    checks = (
        ("mu", 0.0 < scn.mu <= 1.0, "must be in (0, 1]"),
        ("v_E", scn.v_E > 0.0, "must be positive"),
        ("R", scn.R > 0.0, "must be positive"),
        ("t_L", scn.t_L > 0.0, "must be positive"),
        ("dt", scn.dt > 0.0, "must be positive"),
        ("capture_eps", scn.capture_eps > 0.0, "must be positive"),
        ("arrive_eps", scn.arrive_eps > 0.0, "must be positive"),
    )
    for key, ok, msg in checks:
        if not ok:
            raise _fail(None, f"key {key!r} {msg}", source)


def parse_scenario(path: str | Path) -> Scenario:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ScenarioError(f"{p}: cannot read scenario file ({exc})") from exc
    return parse_scenario_text(text, source=str(p))


def _format_value(scn: Scenario, key: str) -> str:
    v = getattr(scn, key)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, "g")
    if isinstance(v, (KnowledgeLevel, GuidanceLaw, Side)):
        return v.value
    return str(v)


def serialize_scenario(scn: Scenario) -> str:
    """Canonical text form: every key explicit, fixed order. Parsing the
    output yields a scenario equal to the input."""
    lines = [f"{k} = {_format_value(scn, k)}" for k in KEY_ORDER]
    return "\n".join(lines) + "\n"


def fixture_path(name: str) -> Path:
    """Absolute path of a bundled scenario fixture, e.g. ``table1_l2``."""
    fname = name if name.endswith(".scn") else f"{name}.scn"
    path = Path(str(resources.files("cutrun") / "fixtures" / fname))
    if not path.exists():
        raise FileNotFoundError(f"no bundled fixture named {name!r}")
    return path
