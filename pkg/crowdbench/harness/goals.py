"""Virtual goals extrapolated from observed motion.

Functions:
    virtual_goals: Goal per pedestrian present in the observation.
"""

import numpy as np

from crowdbench.core.windows import SceneWindow, finite_difference_velocity
from crowdbench.settings import settings


def virtual_goals(window: SceneWindow, distance: float | None = None) -> dict[int, np.ndarray]:
    """Goal ``distance`` meters ahead along each pedestrian's mean observed velocity.

    Pedestrians without a defined velocity, or whose mean velocity is zero, keep their
    last observed position as goal.

    Args:
        window (SceneWindow): Scene window.
        distance (float | None): Extrapolation distance, settings default when None.

    Returns:
        dict[int, np.ndarray]: Goals keyed by ``ped_id`` for every pedestrian observed at least once.
    """
    reach = settings.goal_distance if distance is None else distance
    goals = {}
    for ped_id, track in window.tracks().items():
        observed = track[: window.obs_len]
        present = np.flatnonzero(~np.isnan(observed[:, 0]))
        if not len(present):
            continue
        last = observed[present[-1]].copy()
        velocities = finite_difference_velocity(observed, window.dt)
        velocities = velocities[~np.isnan(velocities[:, 0])]
        if not len(velocities):
            goals[ped_id] = last
            continue
        mean = velocities.mean(axis=0)
        speed = float(np.hypot(*mean))
        goals[ped_id] = last + mean / speed * reach if speed > 0.0 else last
    return goals
