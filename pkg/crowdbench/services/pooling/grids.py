"""Occupancy, directional and social grids around a primary pedestrian.

Cell indices are ``floor(rel / resolution) + cells_per_side / 2`` per axis on the
neighbour's position relative to the primary; neighbours outside the grid are
skipped and co-cell contributions are summed.

Classes:
    InteractionGrid: Grid values and the geometry they were built with.
    NeighbourState: Relative state of one of the k nearest neighbours.

Functions:
    occupancy_grid: Neighbour counts per cell.
    directional_grid: Summed relative velocities per cell.
    social_grid: Summed caller-supplied features per cell.
    topk_neighbour_states: The k nearest neighbours, padded with absent entries.
    frame_poses: Poses of the primary and the present neighbours at one frame of a window.
    grids_to_frame: Long-format table of grids for CSV export.

Dependencies:
    - numpy: Index arithmetic and unbuffered accumulation.
    - pandas: CSV export table.
"""

from collections.abc import Sequence
from typing import NamedTuple

import numpy as np
import pandas as pd
from loguru import logger

from crowdbench.core.errors import PoolingError
from crowdbench.core.windows import SceneWindow
from crowdbench.services.geometry import EPS_SPEED, Pose2, heading_frame
from crowdbench.services.pooling.config import GridFrame, GridSpec


class InteractionGrid(NamedTuple):
    """Grid of ``cells_per_side x cells_per_side x C`` values.

    Attributes:
        values (np.ndarray): Cell values; ``values[i, j]`` covers x-cell ``i`` and y-cell ``j``.
        spec (GridSpec): Geometry of the grid.
    """

    values: np.ndarray
    spec: GridSpec

    @property
    def channels(self) -> int:
        """Number of values per cell."""
        return int(self.values.shape[-1])


class NeighbourState(NamedTuple):
    """Relative state of a neighbour.

    Attributes:
        ped_id (int | None): Neighbour id, None for padding.
        rel_position (np.ndarray): Position minus the primary's, m.
        rel_velocity (np.ndarray): Velocity minus the primary's, m/s.
        present (bool): False for padding entries.
    """

    ped_id: int | None
    rel_position: np.ndarray
    rel_velocity: np.ndarray
    present: bool


def _heading_aligned(primary: Pose2, spec: GridSpec) -> bool:
    if spec.frame is GridFrame.WORLD:
        return False
    if primary.speed() > EPS_SPEED:
        return True
    logger.debug("Primary is standing still, the heading grid falls back to world axes.")
    return False


def _relative_positions(primary: Pose2, positions: np.ndarray, spec: GridSpec) -> np.ndarray:
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    if _heading_aligned(primary, spec):
        return heading_frame(primary, positions)
    return positions - primary.position


def _relative_velocities(primary: Pose2, velocities: np.ndarray, spec: GridSpec) -> np.ndarray:
    relative = np.asarray(velocities, dtype=float).reshape(-1, 2) - primary.velocity
    if _heading_aligned(primary, spec):
        return heading_frame(Pose2.of((0.0, 0.0), primary.velocity), relative)
    return relative


def _cells(relative: np.ndarray, spec: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """Cell indices of in-range rows and the mask selecting them."""
    index = np.floor(relative / spec.resolution).astype(int) + spec.cells_per_side // 2
    inside = ((index >= 0) & (index < spec.cells_per_side)).all(axis=1)
    return index[inside], inside


def _accumulate(relative: np.ndarray, contributions: np.ndarray, spec: GridSpec) -> InteractionGrid:
    values = np.zeros((spec.cells_per_side, spec.cells_per_side, contributions.shape[1]))
    index, inside = _cells(relative, spec)
    np.add.at(values, (index[:, 0], index[:, 1]), contributions[inside])
    return InteractionGrid(values=values, spec=spec)


def occupancy_grid(primary: Pose2, positions: np.ndarray, spec: GridSpec | None = None) -> InteractionGrid:
    """Count neighbours per cell.

    Args:
        primary (Pose2): The grid center; its velocity orients heading grids.
        positions (np.ndarray): ``(N, 2)`` neighbour positions.
        spec (GridSpec | None): Grid geometry.

    Returns:
        InteractionGrid: One channel of counts.
    """
    spec = spec or GridSpec()
    relative = _relative_positions(primary, positions, spec)
    return _accumulate(relative, np.ones((len(relative), 1)), spec)


def directional_grid(
    primary: Pose2,
    positions: np.ndarray,
    velocities: np.ndarray,
    spec: GridSpec | None = None,
) -> InteractionGrid:
    """Sum neighbour velocities relative to the primary per cell.

    Args:
        primary (Pose2): The grid center.
        positions (np.ndarray): ``(N, 2)`` neighbour positions.
        velocities (np.ndarray): ``(N, 2)`` neighbour velocities.
        spec (GridSpec | None): Grid geometry.

    Returns:
        InteractionGrid: Two channels of relative velocity.
    """
    spec = spec or GridSpec()
    relative = _relative_positions(primary, positions, spec)
    return _accumulate(relative, _relative_velocities(primary, velocities, spec), spec)


def social_grid(
    primary: Pose2,
    positions: np.ndarray,
    features: Sequence[np.ndarray],
    spec: GridSpec | None = None,
    channels: int | None = None,
) -> InteractionGrid:
    """Sum opaque per-neighbour feature vectors per cell.

    Args:
        primary (Pose2): The grid center.
        positions (np.ndarray): ``(N, 2)`` neighbour positions.
        features (Sequence[np.ndarray]): One vector per neighbour, all of the same size.
        spec (GridSpec | None): Grid geometry.
        channels (int | None): Feature size. Shapes the zero grid of a scene without
            neighbours and must match the features otherwise.

    Returns:
        InteractionGrid: One channel per feature.

    Raises:
        PoolingError: If feature sizes differ, do not match the neighbours or ``channels``,
            or if ``channels`` is missing without neighbours.
    """
    spec = spec or GridSpec()
    vectors = [np.asarray(feature, dtype=float).ravel() for feature in features]
    sizes = {len(vector) for vector in vectors}
    if len(sizes) > 1:
        raise PoolingError(f"feature vectors have different sizes {sorted(sizes)}")
    relative = _relative_positions(primary, positions, spec)
    if len(vectors) != len(relative):
        raise PoolingError(f"{len(vectors)} feature vectors for {len(relative)} neighbours")
    if channels is not None and (channels < 1 or sizes - {channels}):
        raise PoolingError(f"expected {channels} channels, got feature sizes {sorted(sizes)}")
    if not vectors:
        if channels is None:
            raise PoolingError("the channel count of an empty social grid must be given")
        return InteractionGrid(values=np.zeros((spec.cells_per_side, spec.cells_per_side, channels)), spec=spec)
    return _accumulate(relative, np.stack(vectors), spec)


def topk_neighbour_states(primary: Pose2, neighbours: dict[int, Pose2], k: int) -> list[NeighbourState]:
    """The ``k`` nearest neighbours by Euclidean distance, ties broken by id.

    Args:
        primary (Pose2): Reference pedestrian.
        neighbours (dict[int, Pose2]): Neighbour poses keyed by id.
        k (int): Number of entries, ``>= 1``.

    Returns:
        list[NeighbourState]: Exactly ``k`` entries, zero-valued and absent past the last neighbour.

    Raises:
        PoolingError: If ``k < 1``.
    """
    if k < 1:
        raise PoolingError(f"k must be >= 1, got {k}")
    ranked = sorted(
        neighbours.items(),
        key=lambda item: (float(np.hypot(*(item[1].position - primary.position))), item[0]),
    )
    states = [
        NeighbourState(
            ped_id=ped_id,
            rel_position=pose.position - primary.position,
            rel_velocity=pose.velocity - primary.velocity,
            present=True,
        )
        for ped_id, pose in ranked[:k]
    ]
    padding = NeighbourState(ped_id=None, rel_position=np.zeros(2), rel_velocity=np.zeros(2), present=False)
    return states + [padding] * (k - len(states))


def frame_poses(window: SceneWindow, index: int) -> tuple[Pose2, dict[int, Pose2]]:
    """Poses at frame ``index`` of a window.

    Neighbours absent at the frame are left out; undefined velocities become zero.

    Args:
        window (SceneWindow): Scene window.
        index (int): Frame index within the window.

    Returns:
        tuple[Pose2, dict[int, Pose2]]: The primary and the present neighbours.
    """
    primary = Pose2.of(window.primary[index], window.primary_velocity()[index])
    neighbours = {
        ped_id: Pose2.of(track[index], np.nan_to_num(window.neighbour_velocity(ped_id)[index]))
        for ped_id, track in window.neighbours.items()
        if not np.isnan(track[index, 0])
    }
    return primary, neighbours


def grids_to_frame(grids: dict[int, InteractionGrid]) -> pd.DataFrame:
    """Long-format table with one row per scene, cell and channel.

    Args:
        grids (dict[int, InteractionGrid]): Grids keyed by scene id.

    Returns:
        pd.DataFrame: Columns scene, i, j, channel, value.
    """
    tables = []
    for scene_id, grid in sorted(grids.items()):
        i, j, channel = np.indices(grid.values.shape)
        tables.append(
            pd.DataFrame(
                {
                    "scene": scene_id,
                    "i": i.ravel(),
                    "j": j.ravel(),
                    "channel": channel.ravel(),
                    "value": grid.values.ravel(),
                },
            ),
        )
    if not tables:
        return pd.DataFrame(columns=["scene", "i", "j", "channel", "value"])
    return pd.concat(tables, ignore_index=True)
