import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from crowdbench.core.errors import UndefinedHeadingError
from crowdbench.services.geometry import (
    Pose2,
    bearing,
    heading_frame,
    relative_angle,
    segment_min_distance,
    segment_min_distances,
)

coordinates = st.floats(min_value=-20.0, max_value=20.0, allow_nan=False)


def test_heading_frame_rotates_to_velocity() -> None:
    """A primary walking +y sees a point ahead on +x and a point to its left on +y."""
    primary = Pose2.of((1.0, 1.0), (0.0, 2.0))
    np.testing.assert_allclose(heading_frame(primary, np.array([1.0, 3.0])), [2.0, 0.0], atol=1e-12)
    np.testing.assert_allclose(heading_frame(primary, np.array([0.0, 1.0])), [0.0, 1.0], atol=1e-12)


def test_heading_frame_batch() -> None:
    """Rows are transformed independently."""
    primary = Pose2.of((0.0, 0.0), (1.0, 0.0))
    points = np.array([[1.0, 2.0], [-3.0, 0.5]])
    np.testing.assert_allclose(heading_frame(primary, points), points)


def test_static_primary_has_no_heading() -> None:
    """A standing pedestrian has no heading frame."""
    with pytest.raises(UndefinedHeadingError):
        heading_frame(Pose2.of((0.0, 0.0), (0.0, 0.0)), np.array([1.0, 0.0]))


@pytest.mark.parametrize(
    ("point", "expected"),
    [((1.0, 0.0), 0.0), ((0.0, 1.0), 90.0), ((-1.0, 0.0), 180.0), ((0.0, -1.0), -90.0)],
)
def test_bearing(point: tuple[float, float], expected: float) -> None:
    """Bearings are measured counter-clockwise from the heading."""
    assert bearing(Pose2.of((0.0, 0.0), (1.5, 0.0)), np.array(point)) == pytest.approx(expected)


def test_relative_angle_range() -> None:
    """Opposite directions give 180, never -180."""
    angles = relative_angle(np.array([[1.0, 0.0], [1.0, 0.0]]), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    np.testing.assert_allclose(angles, [90.0, 180.0])


def test_segment_min_distance_example() -> None:
    """Two walkers passing at 1 m lateral offset meet closest at t = 2."""
    assert segment_min_distance((0.0, 0.0), (1.0, 0.0), (4.0, 1.0), (-1.0, 0.0), 5.0) == pytest.approx(1.0)
    distances, times = segment_min_distances(
        np.array([[0.0, 0.0]]),
        np.array([[1.0, 0.0]]),
        np.array([[4.0, 1.0]]),
        np.array([[-1.0, 0.0]]),
        5.0,
    )
    assert distances[0] == pytest.approx(1.0)
    assert times[0] == pytest.approx(2.0)


def test_segment_min_distance_clamps_to_horizon() -> None:
    """The closest approach after the horizon is not reached."""
    distance = segment_min_distance((0.0, 0.0), (1.0, 0.0), (4.0, 1.0), (-1.0, 0.0), 1.0)
    assert distance == pytest.approx(np.hypot(2.0, 1.0))


@given(
    st.tuples(coordinates, coordinates),
    st.tuples(coordinates, coordinates),
    st.tuples(coordinates, coordinates),
    st.tuples(coordinates, coordinates),
)
def test_segment_min_distance_is_a_lower_bound(
    p1: tuple[float, float],
    v1: tuple[float, float],
    p2: tuple[float, float],
    v2: tuple[float, float],
) -> None:
    """No sampled time gets closer than the exact minimum."""
    exact = segment_min_distance(p1, v1, p2, v2, 1.0)
    for t in np.linspace(0.0, 1.0, 11):
        gap = np.asarray(p1) + np.asarray(v1) * t - np.asarray(p2) - np.asarray(v2) * t
        assert exact <= np.hypot(*gap) + 1e-9
