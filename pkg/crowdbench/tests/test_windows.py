import numpy as np
import pytest

from crowdbench.core.errors import IncompleteTrackError
from crowdbench.core.ndjson import parse_ndjson
from crowdbench.core.schema import Dataset, TrackPoint
from crowdbench.core.windows import (
    SceneWindow,
    build_window,
    concat_segments,
    enumerate_windows,
    finite_difference_velocity,
    scene_window,
    split_obs_pred,
)


def test_scene_window_pads_absent_neighbour(dataset_lines: list[str]) -> None:
    """A neighbour appearing at frame 5 has five leading absent rows."""
    dataset = parse_ndjson(dataset_lines)
    window = scene_window(dataset, dataset.scene(0), 9, 12)
    neighbour = window.neighbours[2]
    assert np.isnan(neighbour[:5]).all()
    assert not np.isnan(neighbour[5:]).any()
    points = window.neighbour_points()[2]
    assert points[:5] == [None] * 5
    assert points[5] == TrackPoint(frame=5, ped_id=2, x=2.0, y=3.0)


def test_lone_primary_has_no_neighbours() -> None:
    """A scene without other pedestrians has an empty neighbour map."""
    points = tuple(TrackPoint(frame=frame, ped_id=7, x=float(frame), y=0.0) for frame in range(21))
    dataset = parse_ndjson(
        [
            *(f'{{"track": {{"f": {p.frame}, "p": 7, "x": {p.x}, "y": 0.0}}}}' for p in points),
            '{"scene": {"id": 3, "p": 7, "s": 0, "e": 20, "fps": 2.5}}',
        ],
    )
    window = scene_window(dataset, dataset.scene(3), 9, 12)
    assert window.neighbours == {}
    assert window.primary_points()[4] == points[4]


def test_default_split(linear_window: SceneWindow) -> None:
    """Windows split into 9 observed and 12 predicted frames and join back."""
    observation, prediction = split_obs_pred(linear_window)
    assert len(observation.frames) == 9
    assert len(prediction.frames) == 12
    joined = concat_segments(observation, prediction)
    assert joined.frames == linear_window.frames
    np.testing.assert_array_equal(joined.primary, linear_window.primary)


def test_single_observed_frame() -> None:
    """With one observed step only the first point is observed."""
    window = build_window(np.zeros((3, 2)), {}, dt=0.4, obs_len=1, pred_len=2)
    observation, _ = split_obs_pred(window)
    assert observation.frames == (0,)


def test_incomplete_primary_window() -> None:
    """A primary with NaN rows is rejected."""
    primary = np.zeros((21, 2))
    primary[4] = np.nan
    with pytest.raises(IncompleteTrackError):
        build_window(primary, {}, dt=0.4, obs_len=9, pred_len=12)


def test_enumerate_windows_over_long_track() -> None:
    """A 25-frame track holds five 21-frame windows at stride 1."""
    dataset = Dataset(points=tuple(TrackPoint(frame=frame, ped_id=1, x=0.0, y=0.0) for frame in range(25)))
    windows = enumerate_windows(dataset, 1, 21)
    assert windows == [(0, 20), (1, 21), (2, 22), (3, 23), (4, 24)]


def test_enumerate_windows_skips_gaps() -> None:
    """Windows over a missing frame are not enumerated."""
    frames = [frame for frame in range(25) if frame != 2]
    dataset = Dataset(points=tuple(TrackPoint(frame=frame, ped_id=1, x=0.0, y=0.0) for frame in frames))
    assert enumerate_windows(dataset, 1, 21) == [(3, 23), (4, 24)]


def test_velocity_of_track_with_gap() -> None:
    """Velocities restart after a gap and single frames stay undefined."""
    xy = np.array([[0.0, 0.0], [1.0, 0.0], [np.nan, np.nan], [5.0, 0.0], [np.nan, np.nan], [7.0, 0.0], [8.0, 0.0]])
    velocity = finite_difference_velocity(xy, 0.5)
    np.testing.assert_allclose(velocity[0], [2.0, 0.0])
    np.testing.assert_allclose(velocity[1], [2.0, 0.0])
    assert np.isnan(velocity[2]).all()
    assert np.isnan(velocity[3]).all()
    np.testing.assert_allclose(velocity[5], [2.0, 0.0])
    np.testing.assert_allclose(velocity[6], [2.0, 0.0])
