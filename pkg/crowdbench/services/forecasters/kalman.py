"""Kalman forecaster with a constant-velocity state ``[x, y, vx, vy]``.

The motion model is linear, so the extended filter used to tell linear from
non-linear primaries coincides with the linear Kalman filter run here.

Classes:
    KalmanRun: The filter after the observation plus the covariance after every update.

Functions:
    run_kalman: Filter an observation.
    kalman_forecast: Filter an observation and roll the motion model forward.
"""

from typing import NamedTuple

import numpy as np
from filterpy.common import Q_continuous_white_noise
from filterpy.kalman import KalmanFilter
from loguru import logger

from crowdbench.services.forecasters.config import KalmanConfig


class KalmanRun(NamedTuple):
    """Filter state after the observation.

    Attributes:
        kf (KalmanFilter): The filter, positioned at the last observed step.
        covariances (list[np.ndarray]): Posterior covariance after each update.
    """

    kf: KalmanFilter
    covariances: list[np.ndarray]


def _make_filter(config: KalmanConfig) -> KalmanFilter:
    dt = config.dt
    kf = KalmanFilter(dim_x=4, dim_z=2)
    kf.F = np.array(
        [
            [1.0, 0.0, dt, 0.0],
            [0.0, 1.0, 0.0, dt],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ],
    )
    kf.H = np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
        ],
    )
    kf.Q = Q_continuous_white_noise(dim=2, dt=dt, spectral_density=config.q, block_size=2, order_by_dim=False)
    kf.R = np.eye(2) * config.r
    kf.P = np.eye(4) * config.initial_variance
    return kf


def run_kalman(observation: np.ndarray, config: KalmanConfig) -> KalmanRun:
    """Run predict/update over an observation.

    The state starts at the first point with the first finite difference as velocity
    (zero for a single point).

    Args:
        observation (np.ndarray): ``(T_obs, 2)`` observed positions, ``T_obs >= 1``.
        config (KalmanConfig): Filter parameters.

    Returns:
        KalmanRun: Filter and covariance history.
    """
    observation = np.asarray(observation, dtype=float)
    kf = _make_filter(config)
    velocity = (observation[1] - observation[0]) / config.dt if len(observation) > 1 else np.zeros(2)
    kf.x = np.array([observation[0, 0], observation[0, 1], velocity[0], velocity[1]]).reshape(4, 1)
    covariances = []
    for measurement in observation[1:]:
        kf.predict()
        kf.update(measurement.reshape(2, 1))
        covariances.append(kf.P.copy())
    return KalmanRun(kf=kf, covariances=covariances)


def kalman_forecast(
    observation: np.ndarray,
    config: KalmanConfig,
    pred_len: int,
    velocity_offset: np.ndarray | None = None,
) -> np.ndarray:
    """Filter the observation, then predict ``pred_len`` steps without updates.

    Args:
        observation (np.ndarray): ``(T_obs, 2)`` observed positions.
        config (KalmanConfig): Filter parameters.
        pred_len (int): Steps to predict.
        velocity_offset (np.ndarray | None): Added to the filtered velocity before the rollout, m/s.

    Returns:
        np.ndarray: ``(pred_len, 2)`` predicted positions.
    """
    kf = run_kalman(observation, config).kf
    if velocity_offset is not None:
        kf.x[2:, 0] += velocity_offset
    logger.debug(f"Kalman rollout from state {kf.x.ravel()}")
    prediction = np.empty((pred_len, 2))
    for step in range(pred_len):
        kf.predict()
        prediction[step] = kf.x[:2, 0]
    return prediction
