"""Parameters of the synthetic scene generator.

Classes:
    SynthConfig: Scenario sampling, rollout, windowing and filter parameters.
"""

from pydantic import BaseModel, ConfigDict, Field, model_validator


class SynthConfig(BaseModel):
    """Synthetic generation parameters.

    Attributes:
        n_range (tuple[int, int]): Agents per scenario, half-open ``[low, high)``.
        radius (float): Radius of the start circle, m.
        d_min (float): Minimum pairwise start distance, m.
        noise_thresh (float): Half-width of the uniform perturbation of the sensitivity filter, m.
        k_perturb (int): Perturbed re-simulations per candidate.
        ade_reject (float): A perturbed ADE above this rejects the candidate, m.
        seed (int): Master seed.
        scenes_target (int): Scenes to emit.
        max_scenarios (int): Scenarios tried before giving up on ``scenes_target``.
        max_retries (int): Placement attempts per scenario.
        stride (int): Samples between consecutive window starts.
        max_time (float): Rollout cap, s.
        goal_tolerance (float): Rollouts stop once every agent is this close to its goal, m.
        turn_angle (float): Heading change per step above which a turn is sharp, degrees.
        turn_speed (float): Turns only count when both steps are faster than this, m/s.
        dt (float): Seconds per emitted frame.
        obs_len (int): Observed steps per scene.
        pred_len (int): Predicted steps per scene.
    """

    model_config = ConfigDict(frozen=True)
    n_range: tuple[int, int] = (4, 7)
    radius: float = Field(default=10.0, gt=0)
    d_min: float = Field(default=2.0, gt=0)
    noise_thresh: float = Field(default=0.01, ge=0)
    k_perturb: int = Field(default=20, ge=0)
    ade_reject: float = Field(default=0.3, gt=0)
    seed: int = Field(default=0, ge=0)
    scenes_target: int = Field(default=200, ge=0)
    max_scenarios: int = Field(default=10_000, ge=1)
    max_retries: int = Field(default=10_000, ge=1)
    stride: int = Field(default=3, ge=1)
    max_time: float = Field(default=40.0, gt=0)
    goal_tolerance: float = Field(default=0.5, gt=0)
    turn_angle: float = Field(default=60.0, gt=0)
    turn_speed: float = Field(default=0.3, ge=0)
    dt: float = Field(default=0.4, gt=0)
    obs_len: int = Field(default=9, ge=2)
    pred_len: int = Field(default=12, ge=1)

    @model_validator(mode="after")
    def check_agent_range(self) -> "SynthConfig":
        """``n_range`` holds at least one count of two or more agents.

        Returns:
            SynthConfig: The validated config.

        Raises:
            ValueError: On an empty range.
        """
        low, high = self.n_range
        if low < 2 or high <= low:
            raise ValueError(f"n_range {self.n_range} must be a non-empty range of counts >= 2")
        return self

    @property
    def seq_len(self) -> int:
        """Frames per scene."""
        return self.obs_len + self.pred_len
