"""Parameters of the ORCA simulator.

Classes:
    OrcaParams: Agent size, reaction horizon, speed limit, sensing range and step.
"""

from pydantic import BaseModel, ConfigDict, Field, model_validator


class OrcaParams(BaseModel):
    """ORCA parameters.

    Attributes:
        agent_radius (float): m.
        tau (float): Reciprocal time horizon, s.
        max_speed (float): m/s.
        neighbour_dist (float): Agents farther than this are ignored, m.
        dt_sim (float): Simulation step, s.
    """

    model_config = ConfigDict(frozen=True)
    agent_radius: float = Field(default=0.3, gt=0)
    tau: float = Field(default=3.0, gt=0)
    max_speed: float = Field(default=1.5, gt=0)
    neighbour_dist: float = Field(default=10.0, gt=0)
    dt_sim: float = Field(default=0.1, gt=0)

    @model_validator(mode="after")
    def check_horizon(self) -> "OrcaParams":
        """The reaction horizon spans at least one step.

        Returns:
            OrcaParams: The validated parameters.

        Raises:
            ValueError: If ``tau < dt_sim``.
        """
        if self.tau < self.dt_sim:
            raise ValueError(f"tau ({self.tau}) must be >= dt_sim ({self.dt_sim})")
        return self
