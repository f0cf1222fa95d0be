"""Scene windows: the per-scene array view the forecasters and metrics work on.

A ``SceneWindow`` holds the primary track and every co-present neighbour on the
sampled frames of a scene. ABSENT neighbour entries are NaN rows in the arrays and
``None`` in the point view.

Classes:
    SceneSegment: Frames plus primary and neighbour arrays of a contiguous part of a window.
    SceneWindow: A full observation + prediction window.

Functions:
    finite_difference_velocity: Per-frame velocities of a track with gaps.
    build_window: Assemble a window from arrays.
    scene_window: Resolve a SceneRecord against its Dataset.
    split_obs_pred: Split a window into observation and prediction segments.
    concat_segments: Inverse of ``split_obs_pred``.
    enumerate_windows: All fully covered windows of one pedestrian.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from crowdbench.core.errors import DatasetValidationError, IncompleteTrackError
from crowdbench.core.schema import Dataset, SceneRecord, TrackPoint


def finite_difference_velocity(xy: np.ndarray, dt: float) -> np.ndarray:
    """Velocities ``(x_t - x_{t-1}) / dt`` of a track that may contain NaN rows.

    The first frame of every present run copies the velocity of the second one.
    Single-frame runs get a NaN velocity.

    Args:
        xy (np.ndarray): ``(T, 2)`` positions, NaN where absent.
        dt (float): Seconds between samples.

    Returns:
        np.ndarray: ``(T, 2)`` velocities, NaN where undefined.
    """
    velocity = np.full_like(xy, np.nan, dtype=float)
    if len(xy) < 2:
        return velocity
    velocity[1:] = (xy[1:] - xy[:-1]) / dt
    present = ~np.isnan(xy[:, 0])
    run_starts = present & ~np.concatenate(([False], present[:-1]))
    for start in np.flatnonzero(run_starts):
        velocity[start] = velocity[start + 1] if start + 1 < len(xy) and present[start + 1] else np.nan
    return velocity


class SceneSegment(NamedTuple):
    """Contiguous frames of a window.

    Attributes:
        frames (tuple[int, ...]): Sampled frame indices.
        primary (np.ndarray): ``(len(frames), 2)`` primary positions.
        neighbours (dict[int, np.ndarray]): ``(len(frames), 2)`` arrays per neighbour, NaN where absent.
    """

    frames: tuple[int, ...]
    primary: np.ndarray
    neighbours: dict[int, np.ndarray]


@dataclass(frozen=True)
class SceneWindow:
    """Observation and prediction frames of one scene.

    Attributes:
        scene_id (int): Scene identifier.
        primary_ped (int): Primary pedestrian.
        frames (tuple[int, ...]): The ``obs_len + pred_len`` sampled frames.
        dt (float): Seconds per sampled step.
        obs_len (int): Observed steps.
        pred_len (int): Predicted steps.
        primary (np.ndarray): ``(T, 2)`` primary positions, never NaN.
        neighbours (dict[int, np.ndarray]): ``(T, 2)`` neighbour positions keyed by ascending ``ped_id``.
    """

    scene_id: int
    primary_ped: int
    frames: tuple[int, ...]
    dt: float
    obs_len: int
    pred_len: int
    primary: np.ndarray
    neighbours: dict[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        """Check lengths and completeness of the primary track.

        Raises:
            DatasetValidationError: On inconsistent lengths.
            IncompleteTrackError: If the primary has an ABSENT entry.
        """
        seq_len = self.obs_len + self.pred_len
        if len(self.frames) != seq_len or self.primary.shape != (seq_len, 2):
            raise DatasetValidationError(
                f"scene {self.scene_id}: expected {seq_len} frames, got {len(self.frames)}",
            )
        if np.isnan(self.primary).any():
            raise IncompleteTrackError(f"scene {self.scene_id}: primary track has absent frames")
        for ped_id, track in self.neighbours.items():
            if track.shape != (seq_len, 2):
                raise DatasetValidationError(f"scene {self.scene_id}: neighbour {ped_id} has wrong length")

    @property
    def seq_len(self) -> int:
        """Total number of frames."""
        return self.obs_len + self.pred_len

    @property
    def last_obs(self) -> int:
        """Index of the last observed frame."""
        return self.obs_len - 1

    @property
    def prediction_frames(self) -> tuple[int, ...]:
        """Frames of the prediction part."""
        return self.frames[self.obs_len :]

    def primary_velocity(self) -> np.ndarray:
        """Finite-difference velocities of the primary.

        Returns:
            np.ndarray: ``(T, 2)`` velocities.
        """
        return finite_difference_velocity(self.primary, self.dt)

    def neighbour_velocity(self, ped_id: int) -> np.ndarray:
        """Finite-difference velocities of a neighbour.

        Args:
            ped_id (int): Neighbour identifier.

        Returns:
            np.ndarray: ``(T, 2)`` velocities, NaN where undefined.
        """
        return finite_difference_velocity(self.neighbours[ped_id], self.dt)

    def tracks(self) -> dict[int, np.ndarray]:
        """All tracks, primary included, keyed by ``ped_id``.

        Returns:
            dict[int, np.ndarray]: ``(T, 2)`` arrays.
        """
        return {self.primary_ped: self.primary, **self.neighbours}

    def primary_points(self) -> list[TrackPoint]:
        """The primary track as TrackPoints.

        Returns:
            list[TrackPoint]: One point per frame.
        """
        return [
            TrackPoint(frame=frame, ped_id=self.primary_ped, x=float(x), y=float(y))
            for frame, (x, y) in zip(self.frames, self.primary, strict=True)
        ]

    def neighbour_points(self) -> dict[int, list[TrackPoint | None]]:
        """Neighbour tracks with ``None`` marking ABSENT frames.

        Returns:
            dict[int, list[TrackPoint | None]]: One entry per frame for each neighbour.
        """
        return {
            ped_id: [
                None if np.isnan(x) else TrackPoint(frame=frame, ped_id=ped_id, x=float(x), y=float(y))
                for frame, (x, y) in zip(self.frames, track, strict=True)
            ]
            for ped_id, track in self.neighbours.items()
        }

    def as_segment(self) -> SceneSegment:
        """The whole window as one segment.

        Returns:
            SceneSegment: Frames and arrays of the window.
        """
        return SceneSegment(self.frames, self.primary, self.neighbours)


def build_window(
    primary: np.ndarray,
    neighbours: dict[int, np.ndarray],
    dt: float,
    obs_len: int,
    pred_len: int,
    scene_id: int = 0,
    primary_ped: int = 0,
    frames: tuple[int, ...] | None = None,
) -> SceneWindow:
    """Assemble a window from arrays.

    Args:
        primary (np.ndarray): ``(T, 2)`` primary positions.
        neighbours (dict[int, np.ndarray]): ``(T, 2)`` neighbour positions, NaN where absent.
        dt (float): Seconds per sampled step.
        obs_len (int): Observed steps.
        pred_len (int): Predicted steps.
        scene_id (int): Scene identifier.
        primary_ped (int): Primary pedestrian identifier.
        frames (tuple[int, ...] | None): Frame indices; ``0..T-1`` when omitted.

    Returns:
        SceneWindow: The window, neighbours ordered by id.
    """
    primary = np.asarray(primary, dtype=float)
    return SceneWindow(
        scene_id=scene_id,
        primary_ped=primary_ped,
        frames=tuple(range(len(primary))) if frames is None else frames,
        dt=dt,
        obs_len=obs_len,
        pred_len=pred_len,
        primary=primary,
        neighbours={ped_id: np.asarray(neighbours[ped_id], dtype=float) for ped_id in sorted(neighbours)},
    )


def scene_window(dataset: Dataset, scene: SceneRecord, obs_len: int, pred_len: int) -> SceneWindow:
    """Resolve a scene against the points of its dataset.

    Neighbours are all other pedestrians with at least one point on the sampled frames.

    Args:
        dataset (Dataset): Dataset holding the points.
        scene (SceneRecord): Scene to resolve.
        obs_len (int): Observed steps.
        pred_len (int): Predicted steps.

    Returns:
        SceneWindow: The resolved window.

    Raises:
        IncompleteTrackError: If the primary misses a sampled frame.
    """
    frames = tuple(scene.frames)
    primary = np.full((len(frames), 2), np.nan)
    neighbours: dict[int, np.ndarray] = {}
    for index, frame in enumerate(frames):
        for ped_id in dataset.peds_at(frame):
            position = dataset.position(ped_id, frame)
            if ped_id == scene.primary_ped:
                primary[index] = position
                continue
            if ped_id not in neighbours:
                neighbours[ped_id] = np.full((len(frames), 2), np.nan)
            neighbours[ped_id][index] = position
    if np.isnan(primary).any():
        raise IncompleteTrackError(f"scene {scene.scene_id}: primary {scene.primary_ped} is incomplete")
    return build_window(
        primary,
        neighbours,
        dt=dataset.dt,
        obs_len=obs_len,
        pred_len=pred_len,
        scene_id=scene.scene_id,
        primary_ped=scene.primary_ped,
        frames=frames,
    )


def split_obs_pred(window: SceneWindow) -> tuple[SceneSegment, SceneSegment]:
    """Split a window at ``obs_len``.

    Args:
        window (SceneWindow): Window to split.

    Returns:
        tuple[SceneSegment, SceneSegment]: Observation and prediction parts.
    """
    cut = window.obs_len
    observation = SceneSegment(
        window.frames[:cut],
        window.primary[:cut],
        {ped_id: track[:cut] for ped_id, track in window.neighbours.items()},
    )
    prediction = SceneSegment(
        window.frames[cut:],
        window.primary[cut:],
        {ped_id: track[cut:] for ped_id, track in window.neighbours.items()},
    )
    return observation, prediction


def concat_segments(first: SceneSegment, second: SceneSegment) -> SceneSegment:
    """Concatenate two segments of the same pedestrians.

    Args:
        first (SceneSegment): Earlier segment.
        second (SceneSegment): Later segment.

    Returns:
        SceneSegment: The joined segment.
    """
    return SceneSegment(
        first.frames + second.frames,
        np.concatenate([first.primary, second.primary]),
        {ped_id: np.concatenate([track, second.neighbours[ped_id]]) for ped_id, track in first.neighbours.items()},
    )


def enumerate_windows(
    dataset: Dataset,
    ped_id: int,
    seq_len: int,
    stride: int = 1,
    frame_skip: int = 1,
) -> list[tuple[int, int]]:
    """All windows over which a pedestrian is present at every sampled frame.

    Args:
        dataset (Dataset): Dataset holding the points.
        ped_id (int): Pedestrian identifier.
        seq_len (int): Frames per window.
        stride (int): Start offset between consecutive windows, in samples.
        frame_skip (int): Raw frames between samples.

    Returns:
        list[tuple[int, int]]: ``(start_frame, end_frame)`` pairs in ascending order.
    """
    frames = dataset.ped_frames(ped_id)
    present = set(frames)
    windows = []
    if not frames:
        return windows
    span = (seq_len - 1) * frame_skip
    start = frames[0]
    while start + span <= frames[-1]:
        if all(start + offset * frame_skip in present for offset in range(seq_len)):
            windows.append((start, start + span))
        start += stride * frame_skip
    return windows
