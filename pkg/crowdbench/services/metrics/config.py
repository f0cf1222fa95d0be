"""Parameters of the collision and likelihood metrics.

Classes:
    CollisionConfig: Collision distance and interpolation mode.
    KDEConfig: Kernel bandwidth rule and floors of the NLL metric.
"""

from pydantic import BaseModel, ConfigDict, Field


class CollisionConfig(BaseModel):
    """Collision test parameters.

    Attributes:
        threshold (float): Center distance below which two pedestrians collide, m.
        sub_steps (int): 0 for the exact closest approach per interval, otherwise the number
            of uniform subdivisions sampled per interval.
    """

    model_config = ConfigDict(frozen=True)
    threshold: float = Field(default=0.1, ge=0)
    sub_steps: int = Field(default=0, ge=0)


class KDEConfig(BaseModel):
    """Kernel density estimate parameters.

    Attributes:
        bandwidth (float | None): Fixed isotropic bandwidth, m; None applies Scott's rule.
        h_min (float): Lower bound of the data-driven bandwidth, m.
        density_floor (float): Densities are floored here before the log.
    """

    model_config = ConfigDict(frozen=True)
    bandwidth: float | None = Field(default=None, gt=0)
    h_min: float = Field(default=0.05, gt=0)
    density_floor: float = Field(default=1e-12, gt=0)
