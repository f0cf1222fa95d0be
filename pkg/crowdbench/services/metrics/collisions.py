"""Collision metrics over linearly interpolated tracks.

Functions:
    closest_approach: Smallest distance between two tracks and where it happens.
    scene_collides: Whether two tracks come closer than the threshold.
    col_i: Collisions of the predicted primary with predicted neighbours.
    col_ii: Collisions of the predicted primary with ground-truth neighbours.

Classes:
    CollisionSummary: Per-scene flags and the aggregate percentage.
"""

from typing import NamedTuple

import numpy as np

from crowdbench.core.errors import MissingNeighbourPredictionsError
from crowdbench.core.schema import PredictionSet
from crowdbench.core.windows import SceneWindow
from crowdbench.services.geometry import segment_min_distances
from crowdbench.services.metrics.config import CollisionConfig


class Approach(NamedTuple):
    """Closest approach of two tracks.

    Attributes:
        distance (float): Minimum distance, inf when the tracks never co-exist.
        time (float): Fractional frame index where it is reached.
    """

    distance: float
    time: float


class CollisionSummary(NamedTuple):
    """Result of a collision metric.

    Attributes:
        flags (dict[int, bool | None]): Per scene; None marks scenes outside the denominator.
        percent (float): Colliding share of eligible scenes, one decimal for display; 0.0 without eligible scenes.
    """

    flags: dict[int, bool | None]
    percent: float

    @property
    def colliding(self) -> int:
        """Exact number of colliding scenes."""
        return sum(flag is True for flag in self.flags.values())

    @property
    def eligible(self) -> int:
        """Scenes in the denominator."""
        return sum(flag is not None for flag in self.flags.values())


def closest_approach(track_a: np.ndarray, track_b: np.ndarray, config: CollisionConfig) -> Approach:
    """Closest approach under linear interpolation between frames.

    Intervals with an ABSENT (NaN) endpoint on either track are skipped; isolated
    frames where both are present still count.

    Args:
        track_a (np.ndarray): ``(T, 2)`` positions.
        track_b (np.ndarray): ``(T, 2)`` positions, NaN where absent.
        config (CollisionConfig): Exact (``sub_steps == 0``) or sampled evaluation.

    Returns:
        Approach: Minimum distance and its fractional frame index.
    """
    present = ~np.isnan(track_a[:, 0]) & ~np.isnan(track_b[:, 0])
    if not present.any():
        return Approach(float("inf"), 0.0)
    frames = np.flatnonzero(present)
    gaps = track_a[frames] - track_b[frames]
    point_dist = np.hypot(gaps[:, 0], gaps[:, 1])
    best = int(np.argmin(point_dist))
    approach = Approach(float(point_dist[best]), float(frames[best]))
    intervals = np.flatnonzero(present[:-1] & present[1:])
    if not len(intervals):
        return approach
    start_a, start_b = track_a[intervals], track_b[intervals]
    step_a = track_a[intervals + 1] - start_a
    step_b = track_b[intervals + 1] - start_b
    if config.sub_steps:
        fractions = np.linspace(0.0, 1.0, config.sub_steps + 1)
        offsets = (start_a - start_b)[:, None, :] + (step_a - step_b)[:, None, :] * fractions[None, :, None]
        distances = np.hypot(offsets[..., 0], offsets[..., 1])
        flat = int(np.argmin(distances))
        row, column = divmod(flat, len(fractions))
        distance, time = float(distances[row, column]), float(intervals[row] + fractions[column])
    else:
        mins, times = segment_min_distances(start_a, step_a, start_b, step_b, 1.0)
        row = int(np.argmin(mins))
        distance, time = float(mins[row]), float(intervals[row] + times[row])
    return Approach(distance, time) if distance < approach.distance else approach


def scene_collides(
    track_a: np.ndarray,
    track_b: np.ndarray,
    config: CollisionConfig | None = None,
) -> bool:
    """Whether the tracks come closer than ``config.threshold``.

    Args:
        track_a (np.ndarray): ``(T, 2)`` positions.
        track_b (np.ndarray): ``(T, 2)`` positions, NaN where absent.
        config (CollisionConfig | None): Threshold and evaluation mode.

    Returns:
        bool: True on a collision.
    """
    config = config or CollisionConfig()
    return closest_approach(track_a, track_b, config).distance < config.threshold


def _summary(flags: dict[int, bool | None]) -> CollisionSummary:
    eligible = [flag for flag in flags.values() if flag is not None]
    percent = round(100.0 * sum(eligible) / len(eligible), 1) if eligible else 0.0
    return CollisionSummary(flags=flags, percent=percent)


def col_i(
    predictions: list[PredictionSet],
    config: CollisionConfig | None = None,
    windows: dict[int, SceneWindow] | None = None,
) -> CollisionSummary:
    """Prediction collisions: mode 0 primary against mode 0 neighbours.

    Scenes whose mode 0 has no neighbour track are excluded from the denominator.

    Args:
        predictions (list[PredictionSet]): Joint predictions.
        config (CollisionConfig | None): Threshold and evaluation mode.
        windows (dict[int, SceneWindow] | None): When given, a scene with a neighbour present at its last
            observed frame must carry neighbour predictions.

    Returns:
        CollisionSummary: Flags and percentage.

    Raises:
        MissingNeighbourPredictionsError: If a scene's neighbours were not forecast.
    """
    config = config or CollisionConfig()
    flags: dict[int, bool | None] = {}
    for prediction in predictions:
        neighbours = prediction.neighbours(0)
        if windows is not None and not neighbours:
            window = windows[prediction.scene_id]
            if any(not np.isnan(track[window.last_obs, 0]) for track in window.neighbours.values()):
                raise MissingNeighbourPredictionsError(
                    f"scene {prediction.scene_id}: neighbours were not forecast, Col-I is undefined",
                )
        if not neighbours:
            flags[prediction.scene_id] = None
            continue
        primary = prediction.primary(0)
        flags[prediction.scene_id] = any(
            closest_approach(primary, track, config).distance < config.threshold for track in neighbours.values()
        )
    return _summary(flags)


def col_ii(
    predictions: list[PredictionSet],
    windows: dict[int, SceneWindow],
    config: CollisionConfig | None = None,
) -> CollisionSummary:
    """Ground-truth collisions: mode 0 primary against the neighbours' true futures.

    Scenes without a neighbour present in the prediction horizon are excluded.

    Args:
        predictions (list[PredictionSet]): Predictions.
        windows (dict[int, SceneWindow]): Ground-truth windows keyed by scene id.
        config (CollisionConfig | None): Threshold and evaluation mode.

    Returns:
        CollisionSummary: Flags and percentage.
    """
    config = config or CollisionConfig()
    flags: dict[int, bool | None] = {}
    for prediction in predictions:
        window = windows[prediction.scene_id]
        futures = [
            track[window.obs_len :]
            for track in window.neighbours.values()
            if not np.isnan(track[window.obs_len :, 0]).all()
        ]
        if not futures:
            flags[prediction.scene_id] = None
            continue
        primary = prediction.primary(0)
        flags[prediction.scene_id] = any(
            closest_approach(primary, future, config).distance < config.threshold for future in futures
        )
    return _summary(flags)
