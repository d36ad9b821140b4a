"""cutrun: safe constant-speed navigation through the reach disk of
range-limited pursuers, with a deterministic simulator, brute-force safety
oracles, and a small CLI."""

from .agents import (
    EvaderState,
    HeadingConstraint,
    KnowledgeLevel,
    PursuerState,
    PursuerStatus,
    ScenarioParams,
    SelectionMode,
    collision_course_heading,
    constraints_l2,
    constraints_l3,
    l1_policy,
    launch_scheduler,
    pro_nav_step,
    select_heading,
)
from .cutting import (
    CuttingParams,
    CuttingSolution,
    ExpiredPursuerError,
    Regime,
    Side,
    cutting_from_heading,
    d_of_gamma,
    gamma_star,
    heading_from_cutting,
    phi_max_l2,
    phi_max_l3,
    phi_max_static,
    phi_of_gamma,
)
from .engine import (
    GuidanceLaw,
    NumericalDivergenceError,
    Outcome,
    SimConfig,
    SimResult,
    improvement_table,
    path_length,
    run,
)
from .geometry import (
    DegenerateGeometryError,
    Disk,
    InfeasibleTargetError,
    Point2,
    circumnavigation_path,
    distance,
    ez_center,
    in_engagement_zone,
    los_angle,
    normalize_angle,
    wrap_diff,
)
from .oracle import (
    AuditGrid,
    AuditReport,
    brute_min_phi,
    heading_rate_check,
    l1_length_closed_form,
    safety_audit,
)
from .scenario import Scenario, ScenarioError, fixture_path, parse_scenario, serialize_scenario

__version__ = "0.1.0"
