"""Thresholds of the trajectory categorization rules.

Classes:
    CategoryThresholds: Distances, angles and durations of the rules.
"""

from pydantic import BaseModel, ConfigDict, Field


class CategoryThresholds(BaseModel):
    """Categorization thresholds; angles in degrees.

    Attributes:
        static_dist (float): Path length below which a primary is static, m.
        linear_fde (float): Kalman FDE below which a primary is linear, m.
        cone_half_angle (float): Half width of every angular range.
        lf_duration (float): A leader must be followed for strictly longer than this, s.
        ca_opposite_center (float): Center of the opposing-velocity range.
        grp_bearing_center (float): Center of the abreast bearing ranges (+-).
        grp_mean_dist (float): Maximum mean distance to a group member, m.
        grp_std_dist (float): Maximum standard deviation of that distance, m.
        interaction_range (float): Range of the general interaction cone, m.
        eps_speed (float): Speeds at or below this leave a direction undefined, m/s.
    """

    model_config = ConfigDict(frozen=True)
    static_dist: float = Field(default=1.0, gt=0)
    linear_fde: float = Field(default=0.5, gt=0)
    cone_half_angle: float = Field(default=15.0, gt=0)
    lf_duration: float = Field(default=2.0, gt=0)
    ca_opposite_center: float = Field(default=180.0, gt=0)
    grp_bearing_center: float = Field(default=90.0, gt=0)
    grp_mean_dist: float = Field(default=1.0, gt=0)
    grp_std_dist: float = Field(default=0.2, gt=0)
    interaction_range: float = Field(default=5.0, gt=0)
    eps_speed: float = Field(default=1e-3, gt=0)
