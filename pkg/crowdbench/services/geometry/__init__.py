"""Kinematic primitives."""

from crowdbench.services.geometry.kinematics import (
    EPS_SPEED,
    AgentState,
    Pose2,
    Vec2,
    bearing,
    heading_frame,
    relative_angle,
    segment_min_distance,
    segment_min_distances,
)

__all__ = [
    "EPS_SPEED",
    "AgentState",
    "Pose2",
    "Vec2",
    "bearing",
    "heading_frame",
    "relative_angle",
    "segment_min_distance",
    "segment_min_distances",
]
