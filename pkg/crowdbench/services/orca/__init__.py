"""ORCA simulator and forecaster."""

from crowdbench.services.orca.config import OrcaParams
from crowdbench.services.orca.halfplane import HalfPlane, solve_velocity
from crowdbench.services.orca.simulator import (
    orca_forecast,
    orca_lines,
    orca_rollout,
    orca_step,
    preferred_velocity,
)

__all__ = [
    "HalfPlane",
    "OrcaParams",
    "orca_forecast",
    "orca_lines",
    "orca_rollout",
    "orca_step",
    "preferred_velocity",
    "solve_velocity",
]
