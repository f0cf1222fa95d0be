"""Kinematic primitives shared by the categorizer, simulators, metrics and grids.

Classes:
    Pose2: Position and velocity of a pedestrian.
    AgentState: Simulator state of one agent.

Functions:
    heading_frame: Express a point in the frame of a pedestrian's heading.
    bearing: Angle of a point in a pedestrian's heading frame.
    relative_angle: Signed angle between two directions.
    segment_min_distance: Closest approach of two linearly moving points.
    segment_min_distances: Vectorized ``segment_min_distance``.
"""

import math
from typing import NamedTuple

import numpy as np

from crowdbench.core.errors import UndefinedHeadingError

EPS_SPEED = 1e-3

Vec2 = tuple[float, float]


class Pose2(NamedTuple):
    """Position (m) and velocity (m/s) of a pedestrian."""

    position: np.ndarray
    velocity: np.ndarray

    @classmethod
    def of(cls, position: object, velocity: object) -> "Pose2":
        """Build a pose from array-likes.

        Args:
            position (object): 2-vector in meters.
            velocity (object): 2-vector in meters per second.

        Returns:
            Pose2: The pose.
        """
        return cls(np.asarray(position, dtype=float), np.asarray(velocity, dtype=float))

    def speed(self) -> float:
        """Euclidean norm of the velocity."""
        return float(np.hypot(*self.velocity))


class AgentState(NamedTuple):
    """State of one simulated agent.

    Attributes:
        ped_id (int): Agent identifier; neighbours are processed in ascending id order.
        position (Vec2): Meters.
        velocity (Vec2): Meters per second.
        goal (Vec2): Meters.
        radius (float): Meters.
    """

    ped_id: int
    position: Vec2
    velocity: Vec2
    goal: Vec2
    radius: float


def heading_frame(primary: Pose2, point: np.ndarray, eps_speed: float = EPS_SPEED) -> np.ndarray:
    """Express ``point - primary.position`` in the frame whose +x axis is the primary's velocity.

    Args:
        primary (Pose2): Reference pedestrian.
        point (np.ndarray): ``(2,)`` or ``(N, 2)`` world positions.
        eps_speed (float): Speeds at or below this leave the heading undefined.

    Returns:
        np.ndarray: Rotated relative positions, same shape as ``point``.

    Raises:
        UndefinedHeadingError: If the primary's speed is ``<= eps_speed``.
    """
    speed = primary.speed()
    if not speed > eps_speed:
        raise UndefinedHeadingError(f"speed {speed:.2e} m/s leaves the heading undefined")
    cos, sin = primary.velocity / speed
    relative = np.asarray(point, dtype=float) - primary.position
    rx, ry = relative[..., 0], relative[..., 1]
    return np.stack([cos * rx + sin * ry, -sin * rx + cos * ry], axis=-1)


def bearing(primary: Pose2, point: np.ndarray, eps_speed: float = EPS_SPEED) -> np.ndarray | float:
    """Angle of a neighbour position in the primary's heading frame, in degrees.

    0 means dead ahead, positive angles are to the left; the range is (-180, 180].

    Args:
        primary (Pose2): Reference pedestrian.
        point (np.ndarray): ``(2,)`` or ``(N, 2)`` world positions.
        eps_speed (float): Heading cutoff, see ``heading_frame``.

    Returns:
        np.ndarray | float: Bearing(s) in degrees.
    """
    local = heading_frame(primary, point, eps_speed)
    angle = np.degrees(np.arctan2(local[..., 1], local[..., 0]))
    angle = np.where(angle <= -180.0, angle + 360.0, angle)
    return float(angle) if angle.ndim == 0 else angle


def relative_angle(reference: np.ndarray, other: np.ndarray) -> np.ndarray:
    """Signed angle from ``reference`` to ``other`` in degrees, in (-180, 180].

    Args:
        reference (np.ndarray): ``(..., 2)`` directions.
        other (np.ndarray): ``(..., 2)`` directions.

    Returns:
        np.ndarray: Angles in degrees.
    """
    cross = reference[..., 0] * other[..., 1] - reference[..., 1] * other[..., 0]
    dot = reference[..., 0] * other[..., 0] + reference[..., 1] * other[..., 1]
    angle = np.degrees(np.arctan2(cross, dot))
    return np.where(angle <= -180.0, angle + 360.0, angle)


def segment_min_distance(
    p1: Vec2 | np.ndarray,
    v1: Vec2 | np.ndarray,
    p2: Vec2 | np.ndarray,
    v2: Vec2 | np.ndarray,
    horizon: float,
) -> float:
    """Exact minimum of ``|(p1 + v1 t) - (p2 + v2 t)|`` over ``t in [0, horizon]``.

    Args:
        p1 (Vec2 | np.ndarray): Start of the first point.
        v1 (Vec2 | np.ndarray): Velocity of the first point.
        p2 (Vec2 | np.ndarray): Start of the second point.
        v2 (Vec2 | np.ndarray): Velocity of the second point.
        horizon (float): Time interval length, ``>= 0``.

    Returns:
        float: Minimum distance in meters.
    """
    dx, dy = p1[0] - p2[0], p1[1] - p2[1]
    wx, wy = v1[0] - v2[0], v1[1] - v2[1]
    speed_sq = wx * wx + wy * wy
    t = 0.0 if speed_sq == 0.0 else min(max(-(dx * wx + dy * wy) / speed_sq, 0.0), horizon)
    return math.hypot(dx + wx * t, dy + wy * t)


def segment_min_distances(
    p1: np.ndarray,
    v1: np.ndarray,
    p2: np.ndarray,
    v2: np.ndarray,
    horizon: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ``segment_min_distance`` over ``(N, 2)`` inputs.

    Args:
        p1 (np.ndarray): Starts of the first points.
        v1 (np.ndarray): Velocities of the first points.
        p2 (np.ndarray): Starts of the second points.
        v2 (np.ndarray): Velocities of the second points.
        horizon (float): Time interval length.

    Returns:
        tuple[np.ndarray, np.ndarray]: Minimum distances and the times they are reached.
    """
    offset = p1 - p2
    relative = v1 - v2
    speed_sq = np.einsum("ij,ij->i", relative, relative)
    dot = np.einsum("ij,ij->i", offset, relative)
    moving = speed_sq > 0.0
    t = np.zeros(len(offset))
    t[moving] = np.clip(-dot[moving] / speed_sq[moving], 0.0, horizon)
    closest = offset + relative * t[:, None]
    return np.hypot(closest[:, 0], closest[:, 1]), t
