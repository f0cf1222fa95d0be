"""Categorization rules evaluated on a scene window.

Angular predicates are taken in the primary's heading frame. Frames where the
primary (or, for velocity tests, the neighbour) moves slower than ``eps_speed``
fail every angular predicate.

Functions:
    tag_static: Path length below ``static_dist``.
    tag_linear: Kalman FDE below ``linear_fde``.
    tag_interactions: Leader-follower, collision avoidance, group and other interactions.
"""

from typing import NamedTuple

import numpy as np

from crowdbench.core.schema import SubTag
from crowdbench.core.windows import SceneWindow
from crowdbench.services.categorize.config import CategoryThresholds
from crowdbench.services.forecasters import KalmanConfig, kalman_forecast
from crowdbench.services.geometry import relative_angle


class NeighbourGeometry(NamedTuple):
    """Per-frame geometry of one neighbour relative to the primary.

    Attributes:
        bearing (np.ndarray): ``(T,)`` degrees, NaN where undefined.
        velocity_angle (np.ndarray): ``(T,)`` neighbour heading relative to the primary, NaN where undefined.
        distance (np.ndarray): ``(T,)`` center distance, NaN where absent.
    """

    bearing: np.ndarray
    velocity_angle: np.ndarray
    distance: np.ndarray


def _within(angle: np.ndarray, center: float, half_width: float) -> np.ndarray:
    # NaN compares False
    offset = np.abs((angle - center + 180.0) % 360.0 - 180.0)
    return offset <= half_width


def _longest_run(flags: np.ndarray) -> int:
    longest = current = 0
    for flag in flags:
        current = current + 1 if flag else 0
        longest = max(longest, current)
    return longest


def neighbour_geometry(window: SceneWindow, thresholds: CategoryThresholds) -> dict[int, NeighbourGeometry]:
    """Bearings, velocity angles and distances of every neighbour.

    Args:
        window (SceneWindow): Scene window.
        thresholds (CategoryThresholds): Provides ``eps_speed``.

    Returns:
        dict[int, NeighbourGeometry]: Geometry keyed by neighbour id.
    """
    primary_velocity = window.primary_velocity()
    primary_speed = np.hypot(primary_velocity[:, 0], primary_velocity[:, 1])
    heading = primary_speed > thresholds.eps_speed
    geometry = {}
    with np.errstate(invalid="ignore"):
        for ped_id, track in window.neighbours.items():
            offset = track - window.primary
            velocity = window.neighbour_velocity(ped_id)
            speed = np.hypot(velocity[:, 0], velocity[:, 1])
            moving = heading & (speed > thresholds.eps_speed)
            geometry[ped_id] = NeighbourGeometry(
                bearing=np.where(heading, relative_angle(primary_velocity, offset), np.nan),
                velocity_angle=np.where(moving, relative_angle(primary_velocity, velocity), np.nan),
                distance=np.hypot(offset[:, 0], offset[:, 1]),
            )
    return geometry


def tag_static(window: SceneWindow, thresholds: CategoryThresholds) -> bool:
    """Whether the primary travels less than ``static_dist`` over the whole window.

    Args:
        window (SceneWindow): Scene window.
        thresholds (CategoryThresholds): Rule thresholds.

    Returns:
        bool: True for a static primary.
    """
    steps = np.diff(window.primary, axis=0)
    return bool(np.hypot(steps[:, 0], steps[:, 1]).sum() < thresholds.static_dist)


def tag_linear(window: SceneWindow, kalman: KalmanConfig, thresholds: CategoryThresholds) -> bool:
    """Whether the Kalman forecast of the observation ends within ``linear_fde`` of the truth.

    Args:
        window (SceneWindow): Scene window.
        kalman (KalmanConfig): Filter parameters; its ``dt`` is replaced by the window's.
        thresholds (CategoryThresholds): Rule thresholds.

    Returns:
        bool: True for a linear primary.
    """
    config = kalman if kalman.dt == window.dt else kalman.model_copy(update={"dt": window.dt})
    prediction = kalman_forecast(window.primary[: window.obs_len], config, window.pred_len)
    final = prediction[-1] - window.primary[-1]
    return bool(np.hypot(*final) < thresholds.linear_fde)


def tag_interactions(window: SceneWindow, thresholds: CategoryThresholds) -> frozenset[SubTag]:
    """Interaction sub-tags of the primary.

    LF, CA and the general interaction are evaluated over the prediction frames;
    Grp requires one abreast neighbour over the whole window.

    Args:
        window (SceneWindow): Scene window.
        thresholds (CategoryThresholds): Rule thresholds.

    Returns:
        frozenset[SubTag]: Sub-tags; Others only when no named sub-tag holds.
    """
    half = thresholds.cone_half_angle
    min_run = round(thresholds.lf_duration / window.dt, 9)
    prediction = slice(window.obs_len, None)
    tags: set[SubTag] = set()
    interacting = False
    with np.errstate(invalid="ignore"):
        for geometry in neighbour_geometry(window, thresholds).values():
            ahead = _within(geometry.bearing, 0.0, half)
            following = ahead & _within(geometry.velocity_angle, 0.0, half)
            if _longest_run(following[prediction]) > min_run:
                tags.add(SubTag.LF)
            opposing = ahead & _within(geometry.velocity_angle, thresholds.ca_opposite_center, half)
            if opposing[prediction].any():
                tags.add(SubTag.CA)
            abreast = _within(geometry.bearing, thresholds.grp_bearing_center, half) | _within(
                geometry.bearing,
                -thresholds.grp_bearing_center,
                half,
            )
            if abreast.all():
                distance = geometry.distance
                if distance.mean() <= thresholds.grp_mean_dist and distance.std() <= thresholds.grp_std_dist:
                    tags.add(SubTag.GRP)
            if (ahead & (geometry.distance < thresholds.interaction_range))[prediction].any():
                interacting = True
    if not tags and interacting:
        tags.add(SubTag.OTHERS)
    return frozenset(tags)
