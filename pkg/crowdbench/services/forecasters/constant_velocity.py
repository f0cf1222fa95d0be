"""Constant-velocity baseline."""

import numpy as np

from crowdbench.core.errors import ForecastError


def cv_forecast(
    observation: np.ndarray,
    pred_len: int,
    velocity_offset: np.ndarray | None = None,
) -> np.ndarray:
    """Extrapolate the last observed step.

    Args:
        observation (np.ndarray): ``(T_obs, 2)`` observed positions.
        pred_len (int): Steps to predict.
        velocity_offset (np.ndarray | None): Displacement added to the last step, per step.

    Returns:
        np.ndarray: ``(pred_len, 2)`` predicted positions.

    Raises:
        ForecastError: With fewer than two observed points.
    """
    observation = np.asarray(observation, dtype=float)
    if len(observation) < 2:
        raise ForecastError(f"constant velocity needs 2 observed points, got {len(observation)}")
    step = observation[-1] - observation[-2]
    if velocity_offset is not None:
        step = step + velocity_offset
    return observation[-1] + step * np.arange(1, pred_len + 1)[:, None]
