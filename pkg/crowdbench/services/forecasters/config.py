"""Parameters of the Kalman forecaster.

Classes:
    KalmanConfig: Noise levels and time step of the constant-velocity filter.
"""

from pydantic import BaseModel, ConfigDict, Field


class KalmanConfig(BaseModel):
    """Constant-velocity Kalman filter parameters.

    Attributes:
        q (float): Spectral density of the continuous white-noise acceleration.
        r (float): Measurement noise variance, m^2.
        dt (float): Seconds between samples.
        initial_variance (float): Diagonal of the initial state covariance.
    """

    model_config = ConfigDict(frozen=True)
    q: float = Field(default=1e-4, gt=0)
    r: float = Field(default=0.0025, gt=0)
    dt: float = Field(default=0.4, gt=0)
    initial_variance: float = Field(default=1.0, gt=0)
