"""Parameters of the Social Force forecaster.

Classes:
    SFParams: Force-law constants and integration step.
"""

from pydantic import BaseModel, ConfigDict, Field


class SFParams(BaseModel):
    """Social Force parameters.

    Attributes:
        A (float): Repulsion strength, m/s^2.
        B (float): Repulsion range, m.
        tau_relax (float): Relaxation time towards the desired velocity, s.
        desired_speed (float | None): m/s; None uses each pedestrian's observed mean speed.
        agent_radius (float): m.
        dt_sim (float): Integration step, s.
        speed_factor (float): Speeds are clipped to ``speed_factor * desired_speed``.
    """

    model_config = ConfigDict(frozen=True)
    A: float = Field(default=2.0, ge=0)
    B: float = Field(default=0.3, gt=0)
    tau_relax: float = Field(default=0.5, gt=0)
    desired_speed: float | None = Field(default=None, gt=0)
    agent_radius: float = Field(default=0.3, gt=0)
    dt_sim: float = Field(default=0.1, gt=0)
    speed_factor: float = Field(default=1.5, gt=0)
