"""Pydantic records of the benchmark: tracks, scenes, tags and predictions.

Classes:
    MainType: Trajectory main type (I static, II linear, III interacting, IV non-interacting).
    SubTag: Interaction sub-category of a type III scene.
    TrackPoint: One observed position of one pedestrian at one frame.
    CategoryTags: Main type plus interaction sub-tags of a scene.
    SceneRecord: A (primary pedestrian, frame window) view over the points.
    Dataset: Points, scenes and the sampled time step, with a (ped, frame) index.
    ModePrediction: One predicted future of every forecast pedestrian of a scene.
    PredictionSet: k modes of a scene; mode 0 is the unimodal output.

Dependencies:
    - math: Finiteness checks.
    - enum: Type and subtag codes.
    - numpy: Array views of tracks.
    - pydantic: Validation of records.
"""

import math
from enum import IntEnum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator

from crowdbench.core.errors import DatasetValidationError, IncompleteTrackError

Track = tuple[tuple[float, float], ...]


class MainType(IntEnum):
    """Main trajectory type, coded as in the scene ``tag`` field."""

    STATIC = 1
    LINEAR = 2
    INTERACTING = 3
    NON_INTERACTING = 4


class SubTag(IntEnum):
    """Interaction sub-category of a type III scene."""

    LF = 1
    CA = 2
    GRP = 3
    OTHERS = 4


class TrackPoint(BaseModel):
    """Position of pedestrian ``ped_id`` at ``frame``, in meters."""

    model_config = ConfigDict(frozen=True)
    frame: int
    ped_id: int
    x: float
    y: float

    @field_validator("x", "y")
    @classmethod
    def check_finite(cls, value: float) -> float:
        """Reject NaN and infinite coordinates.

        Args:
            value (float): Coordinate to validate.

        Returns:
            float: The coordinate unchanged.

        Raises:
            ValueError: If the coordinate is not finite.
        """
        if not math.isfinite(value):
            raise ValueError(f"coordinate must be finite, got {value}")
        return value


class CategoryTags(BaseModel):
    """Categorization result of a scene.

    Attributes:
        main_type (MainType): Exactly one main type.
        subtags (tuple[SubTag, ...]): Sorted sub-tags; non-empty iff ``main_type`` is INTERACTING.
    """

    model_config = ConfigDict(frozen=True)
    main_type: MainType
    subtags: tuple[SubTag, ...] = ()

    @field_validator("subtags")
    @classmethod
    def normalize_subtags(cls, value: tuple[SubTag, ...]) -> tuple[SubTag, ...]:
        """Deduplicate and sort sub-tags.

        Args:
            value (tuple[SubTag, ...]): Raw sub-tags.

        Returns:
            tuple[SubTag, ...]: Sorted unique sub-tags.
        """
        return tuple(sorted(set(value)))

    @model_validator(mode="after")
    def check_consistency(self) -> "CategoryTags":
        """Enforce the sub-tag rules of the hierarchy.

        Returns:
            CategoryTags: The validated tags.

        Raises:
            ValueError: On sub-tags outside type III or ``Others`` mixed with named sub-tags.
        """
        if (self.main_type == MainType.INTERACTING) != bool(self.subtags):
            raise ValueError("subtags must be non-empty exactly for type III scenes")
        if SubTag.OTHERS in self.subtags and len(self.subtags) > 1:
            raise ValueError("Others excludes LF, CA and Grp")
        return self

    def to_code(self) -> list[object]:
        """Encode as the NDJSON ``tag`` value ``[type, [subtags...]]``.

        Returns:
            list[object]: The encoded tag.
        """
        return [int(self.main_type), [int(tag) for tag in self.subtags]]

    @classmethod
    def from_code(cls, code: list[object]) -> "CategoryTags":
        """Decode an NDJSON ``tag`` value.

        Args:
            code (list[object]): ``[type, [subtags...]]``.

        Returns:
            CategoryTags: Decoded tags.
        """
        main_type, subtags = code
        return cls(main_type=MainType(main_type), subtags=tuple(SubTag(tag) for tag in subtags))  # type: ignore


class SceneRecord(BaseModel):
    """A window of ``primary_ped`` from ``start_frame`` to ``end_frame`` inclusive."""

    model_config = ConfigDict(frozen=True)
    scene_id: int
    primary_ped: int
    start_frame: int
    end_frame: int
    frame_skip: int = Field(ge=1)
    fps: float = Field(gt=0)
    tags: CategoryTags | None = None

    @property
    def frames(self) -> range:
        """Sampled frames of the window."""
        return range(self.start_frame, self.end_frame + 1, self.frame_skip)


class Dataset(BaseModel):
    """Tracks and scenes of one benchmark split.

    Points are kept ordered by ``(ped_id, frame)``. A private index maps
    ``(ped_id, frame)`` to coordinates and each frame to the pedestrians present.
    """

    model_config = ConfigDict(frozen=True)
    points: tuple[TrackPoint, ...] = ()
    scenes: tuple[SceneRecord, ...] = ()
    dt: float = Field(default=0.4, gt=0)

    _positions: dict[tuple[int, int], tuple[float, float]] = PrivateAttr(default_factory=dict)
    _frames: dict[int, list[int]] = PrivateAttr(default_factory=dict)

    @field_validator("points")
    @classmethod
    def sort_points(cls, value: tuple[TrackPoint, ...]) -> tuple[TrackPoint, ...]:
        """Normalize point order.

        Args:
            value (tuple[TrackPoint, ...]): Points in any order.

        Returns:
            tuple[TrackPoint, ...]: Points ordered by ``(ped_id, frame)``.
        """
        return tuple(sorted(value, key=lambda point: (point.ped_id, point.frame)))

    @model_validator(mode="after")
    def build_index(self) -> "Dataset":
        """Index the points and check every scene against them.

        Returns:
            Dataset: The validated dataset.

        Raises:
            DatasetValidationError: On duplicate ``(frame, ped_id)`` pairs.
            IncompleteTrackError: If a scene's primary misses a sampled frame.
        """
        positions: dict[tuple[int, int], tuple[float, float]] = {}
        frames: dict[int, list[int]] = {}
        for point in self.points:
            key = (point.ped_id, point.frame)
            if key in positions:
                raise DatasetValidationError(f"duplicate point for ped {point.ped_id} at frame {point.frame}")
            positions[key] = (point.x, point.y)
            frames.setdefault(point.frame, []).append(point.ped_id)
        for scene in self.scenes:
            if (scene.end_frame - scene.start_frame) % scene.frame_skip:
                raise DatasetValidationError(f"scene {scene.scene_id}: window is not a multiple of frame_skip")
            missing = [frame for frame in scene.frames if (scene.primary_ped, frame) not in positions]
            if missing:
                raise IncompleteTrackError(
                    f"scene {scene.scene_id}: primary {scene.primary_ped} missing frames {missing}",
                )
        self._positions = positions
        self._frames = frames
        return self

    def position(self, ped_id: int, frame: int) -> tuple[float, float] | None:
        """Look up a position.

        Args:
            ped_id (int): Pedestrian identifier.
            frame (int): Frame index.

        Returns:
            tuple[float, float] | None: Coordinates, or None when the pedestrian is absent.
        """
        return self._positions.get((ped_id, frame))

    def peds_at(self, frame: int) -> list[int]:
        """Pedestrians with a point at ``frame``.

        Args:
            frame (int): Frame index.

        Returns:
            list[int]: Pedestrian identifiers in ascending order.
        """
        return self._frames.get(frame, [])

    def ped_frames(self, ped_id: int) -> list[int]:
        """Frames at which a pedestrian has a point.

        Args:
            ped_id (int): Pedestrian identifier.

        Returns:
            list[int]: Ascending frame indices.
        """
        return [point.frame for point in self.points if point.ped_id == ped_id]

    def scene(self, scene_id: int) -> SceneRecord:
        """Find a scene by id.

        Args:
            scene_id (int): Scene identifier.

        Returns:
            SceneRecord: The scene.

        Raises:
            KeyError: If no scene has this id.
        """
        for scene in self.scenes:
            if scene.scene_id == scene_id:
                return scene
        raise KeyError(scene_id)


class ModePrediction(BaseModel):
    """One predicted future per forecast pedestrian, keyed by ``ped_id``."""

    model_config = ConfigDict(frozen=True)
    tracks: dict[int, Track]


class PredictionSet(BaseModel):
    """Predicted futures of one scene.

    Attributes:
        scene_id (int): Scene the prediction belongs to.
        primary_ped (int): The scene's primary pedestrian.
        frames (tuple[int, ...]): Prediction frames shared by every track.
        modes (tuple[ModePrediction, ...]): ``k >= 1`` modes; mode 0 is the unimodal output.
    """

    model_config = ConfigDict(frozen=True)
    scene_id: int
    primary_ped: int
    frames: tuple[int, ...]
    modes: tuple[ModePrediction, ...] = Field(min_length=1)

    @model_validator(mode="after")
    def check_tracks(self) -> "PredictionSet":
        """Every mode predicts the primary and every track covers ``frames``.

        Returns:
            PredictionSet: The validated set.

        Raises:
            ValueError: On a missing primary or a track of the wrong length.
        """
        for index, mode in enumerate(self.modes):
            if self.primary_ped not in mode.tracks:
                raise ValueError(f"scene {self.scene_id} mode {index}: no track for primary {self.primary_ped}")
            for ped_id, track in mode.tracks.items():
                if len(track) != len(self.frames):
                    raise ValueError(
                        f"scene {self.scene_id} mode {index} ped {ped_id}: {len(track)} points, "
                        f"expected {len(self.frames)}",
                    )
        return self

    @property
    def k(self) -> int:
        """Number of modes."""
        return len(self.modes)

    def primary(self, mode: int = 0) -> np.ndarray:
        """Primary track of a mode as a ``(pred_len, 2)`` array.

        Args:
            mode (int): Mode index.

        Returns:
            np.ndarray: Predicted primary positions.
        """
        return np.asarray(self.modes[mode].tracks[self.primary_ped], dtype=float)

    def primary_modes(self) -> np.ndarray:
        """Primary tracks of all modes as a ``(k, pred_len, 2)`` array.

        Returns:
            np.ndarray: Predicted primary positions per mode.
        """
        return np.stack([self.primary(mode) for mode in range(self.k)])

    def neighbours(self, mode: int = 0) -> dict[int, np.ndarray]:
        """Neighbour tracks of a mode.

        Args:
            mode (int): Mode index.

        Returns:
            dict[int, np.ndarray]: ``(pred_len, 2)`` arrays keyed by ``ped_id``, ascending.
        """
        tracks = self.modes[mode].tracks
        return {
            ped_id: np.asarray(tracks[ped_id], dtype=float) for ped_id in sorted(tracks) if ped_id != self.primary_ped
        }
