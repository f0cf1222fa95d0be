"""Social Force forecaster."""

from crowdbench.services.social_force.config import SFParams
from crowdbench.services.social_force.simulator import (
    driving_force,
    repulsive_force,
    sf_acceleration,
    sf_forecast,
    sf_rollout,
)

__all__ = ["SFParams", "driving_force", "repulsive_force", "sf_acceleration", "sf_forecast", "sf_rollout"]
