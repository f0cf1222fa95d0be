"""Interaction grids and nearest-neighbour states."""

from crowdbench.services.pooling.config import GridFrame, GridSpec
from crowdbench.services.pooling.grids import (
    InteractionGrid,
    NeighbourState,
    directional_grid,
    frame_poses,
    grids_to_frame,
    occupancy_grid,
    social_grid,
    topk_neighbour_states,
)

__all__ = [
    "GridFrame",
    "GridSpec",
    "InteractionGrid",
    "NeighbourState",
    "directional_grid",
    "frame_poses",
    "grids_to_frame",
    "occupancy_grid",
    "social_grid",
    "topk_neighbour_states",
]
