"""Simulator plumbing shared by the Social Force and ORCA forecasters.

Functions:
    observed_poses: Poses at the last observed frame of every present pedestrian.
    observed_mean_speed: Mean finite-difference speed over the observation.
    steps_per_sample: Integer ratio between the scene step and the simulation step.
    to_prediction_set: Wrap per-pedestrian tracks into a single-mode PredictionSet.
"""

import numpy as np

from crowdbench.core.errors import ForecastError
from crowdbench.core.schema import ModePrediction, PredictionSet
from crowdbench.core.windows import SceneWindow, finite_difference_velocity
from crowdbench.services.geometry.kinematics import Pose2


def observed_poses(window: SceneWindow) -> dict[int, Pose2]:
    """Poses of every pedestrian present at the last observed frame.

    Undefined velocities (single-frame presence) become zero.

    Args:
        window (SceneWindow): Scene window.

    Returns:
        dict[int, Pose2]: Poses keyed by ascending ``ped_id``, primary included.
    """
    last = window.last_obs
    poses = {}
    for ped_id, track in sorted(window.tracks().items()):
        if np.isnan(track[last, 0]):
            continue
        velocity = finite_difference_velocity(track[: last + 1], window.dt)[last]
        poses[ped_id] = Pose2.of(track[last], np.nan_to_num(velocity))
    return poses


def observed_mean_speed(window: SceneWindow, ped_id: int) -> float:
    """Mean observed speed of a pedestrian.

    Args:
        window (SceneWindow): Scene window.
        ped_id (int): Pedestrian identifier.

    Returns:
        float: Mean speed over observed frames with a defined velocity, 0 when there is none.
    """
    track = window.tracks()[ped_id][: window.obs_len]
    steps = np.diff(track, axis=0)
    speeds = np.hypot(steps[:, 0], steps[:, 1]) / window.dt
    speeds = speeds[~np.isnan(speeds)]
    return float(speeds.mean()) if len(speeds) else 0.0


def steps_per_sample(dt: float, dt_sim: float) -> int:
    """Number of simulation steps per scene step.

    Args:
        dt (float): Scene step, s.
        dt_sim (float): Simulation step, s.

    Returns:
        int: ``dt / dt_sim``.

    Raises:
        ForecastError: If ``dt`` is not an integer multiple of ``dt_sim``.
    """
    ratio = dt / dt_sim
    steps = round(ratio)
    if steps < 1 or abs(ratio - steps) > 1e-6:
        raise ForecastError(f"scene step {dt} s is not a multiple of the simulation step {dt_sim} s")
    return steps


def to_prediction_set(window: SceneWindow, tracks: dict[int, np.ndarray]) -> PredictionSet:
    """Wrap predicted tracks of a window into a single-mode PredictionSet.

    Args:
        window (SceneWindow): Scene window the tracks continue.
        tracks (dict[int, np.ndarray]): ``(pred_len, 2)`` tracks keyed by ``ped_id``.

    Returns:
        PredictionSet: One mode holding every track.
    """
    mode = ModePrediction(
        tracks={ped_id: tuple((float(x), float(y)) for x, y in track) for ped_id, track in sorted(tracks.items())},
    )
    return PredictionSet(
        scene_id=window.scene_id,
        primary_ped=window.primary_ped,
        frames=window.prediction_frames[: len(tracks[window.primary_ped])],
        modes=(mode,),
    )
