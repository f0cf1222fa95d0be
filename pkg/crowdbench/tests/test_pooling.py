import numpy as np
import pytest
from pydantic import ValidationError

from crowdbench.core.errors import PoolingError
from crowdbench.core.ndjson import parse_ndjson
from crowdbench.core.windows import scene_window
from crowdbench.services.geometry import Pose2
from crowdbench.services.pooling import (
    GridFrame,
    GridSpec,
    InteractionGrid,
    directional_grid,
    frame_poses,
    grids_to_frame,
    occupancy_grid,
    social_grid,
    topk_neighbour_states,
)

ORIGIN = Pose2.of((0.0, 0.0), (1.0, 0.0))


def test_odd_grid_is_rejected() -> None:
    """The primary sits on a cell corner, so the side must be even."""
    with pytest.raises(ValidationError):
        GridSpec(cells_per_side=15)


def test_occupancy_cell() -> None:
    """A neighbour at (0.3, 0.3) lands in cell (8, 8)."""
    grid = occupancy_grid(ORIGIN, np.array([[0.3, 0.3]]))
    assert grid.values.shape == (16, 16, 1)
    assert grid.values[8, 8, 0] == 1.0
    assert grid.values.sum() == 1.0


def test_occupancy_counts_and_skips() -> None:
    """Co-cell neighbours add up and neighbours beyond the border are skipped."""
    grid = occupancy_grid(ORIGIN, np.array([[0.1, 0.1], [0.2, 0.5], [5.0, 5.0], [-0.1, -0.1]]))
    assert grid.values[8, 8, 0] == 2.0
    assert grid.values[7, 7, 0] == 1.0
    assert grid.values.sum() == 3.0


def test_directional_relative_velocity() -> None:
    """A neighbour walking +y next to a primary walking +x contributes (-1, 1)."""
    grid = directional_grid(ORIGIN, np.array([[0.3, 0.3]]), np.array([[0.0, 1.0]]))
    assert grid.channels == 2
    np.testing.assert_allclose(grid.values[8, 8], [-1.0, 1.0])


def test_heading_grid_puts_ahead_on_x() -> None:
    """In the heading frame a neighbour ahead of a primary walking +y is on the +x axis."""
    primary = Pose2.of((1.0, 1.0), (0.0, 1.0))
    grid = occupancy_grid(primary, np.array([[1.0, 1.9]]), GridSpec(frame=GridFrame.HEADING))
    assert grid.values[9, 8, 0] == 1.0


def test_heading_grid_of_static_primary_uses_world_axes() -> None:
    """Without a heading the grid falls back to world axes."""
    primary = Pose2.of((0.0, 0.0), (0.0, 0.0))
    heading = occupancy_grid(primary, np.array([[0.3, -0.9]]), GridSpec(frame=GridFrame.HEADING))
    world = occupancy_grid(primary, np.array([[0.3, -0.9]]))
    np.testing.assert_array_equal(heading.values, world.values)


def test_world_grid_rotates_with_the_scene() -> None:
    """Rotating every neighbour by 90 degrees about the primary rotates the grid array."""
    rng = np.random.default_rng(11)
    positions = rng.uniform(-4.0, 4.0, size=(40, 2))
    rotated = np.column_stack([-positions[:, 1], positions[:, 0]])
    grid = occupancy_grid(ORIGIN, positions)
    np.testing.assert_array_equal(occupancy_grid(ORIGIN, rotated).values, np.rot90(grid.values))


def test_social_grid_sums_features() -> None:
    """Feature vectors of co-cell neighbours are summed."""
    grid = social_grid(ORIGIN, np.array([[0.1, 0.1], [0.2, 0.2]]), [np.array([1.0, 2.0, 3.0]), np.ones(3)])
    assert grid.channels == 3
    np.testing.assert_allclose(grid.values[8, 8], [2.0, 3.0, 4.0])


def test_social_grid_rejects_mismatches() -> None:
    """Features must share one size and match the neighbours."""
    with pytest.raises(PoolingError):
        social_grid(ORIGIN, np.array([[0.1, 0.1], [0.2, 0.2]]), [np.ones(3), np.ones(2)])
    with pytest.raises(PoolingError):
        social_grid(ORIGIN, np.array([[0.1, 0.1], [0.2, 0.2]]), [np.ones(3)])


def test_social_grid_without_neighbours() -> None:
    """No neighbours give a zero grid with the requested channels."""
    grid = social_grid(ORIGIN, np.empty((0, 2)), [], GridSpec(cells_per_side=4), channels=5)
    assert grid.values.shape == (4, 4, 5)
    assert not grid.values.any()
    with pytest.raises(PoolingError):
        social_grid(ORIGIN, np.empty((0, 2)), [])


def test_social_grid_checks_channels() -> None:
    """Features must have the requested size."""
    grid = social_grid(ORIGIN, np.array([[0.1, 0.1]]), [np.ones(3)], channels=3)
    assert grid.channels == 3
    with pytest.raises(PoolingError):
        social_grid(ORIGIN, np.array([[0.1, 0.1]]), [np.ones(3)], channels=2)


def test_topk_order_and_padding() -> None:
    """Neighbours come nearest first with ties broken by id, then padding."""
    neighbours = {
        3: Pose2.of((0.0, 2.0), (0.0, 0.0)),
        1: Pose2.of((1.0, 0.0), (1.0, 0.0)),
        2: Pose2.of((-2.0, 0.0), (0.0, 1.0)),
    }
    states = topk_neighbour_states(ORIGIN, neighbours, 4)
    assert [state.ped_id for state in states] == [1, 2, 3, None]
    assert [state.present for state in states] == [True, True, True, False]
    np.testing.assert_allclose(states[1].rel_position, [-2.0, 0.0])
    np.testing.assert_allclose(states[1].rel_velocity, [-1.0, 1.0])
    np.testing.assert_allclose(states[3].rel_position, [0.0, 0.0])
    assert [state.ped_id for state in topk_neighbour_states(ORIGIN, neighbours, 2)] == [1, 2]


def test_topk_needs_positive_k() -> None:
    """k must be at least one."""
    with pytest.raises(PoolingError):
        topk_neighbour_states(ORIGIN, {}, 0)


def test_frame_poses_skip_absent_neighbours(dataset_lines: list[str]) -> None:
    """Only neighbours present at the frame are returned."""
    dataset = parse_ndjson(dataset_lines)
    window = scene_window(dataset, dataset.scene(0), 9, 12)
    primary, neighbours = frame_poses(window, 2)
    np.testing.assert_allclose(primary.position, [0.8, 0.0])
    assert neighbours == {}
    _, neighbours = frame_poses(window, 8)
    assert list(neighbours) == [2]
    np.testing.assert_allclose(neighbours[2].velocity, [1.0, 0.0])


def test_grids_to_frame() -> None:
    """One row per scene, cell and channel."""
    spec = GridSpec(cells_per_side=2)
    grids = {
        4: InteractionGrid(values=np.ones((2, 2, 1)), spec=spec),
        1: InteractionGrid(values=np.zeros((2, 2, 1)), spec=spec),
    }
    frame = grids_to_frame(grids)
    assert list(frame.columns) == ["scene", "i", "j", "channel", "value"]
    assert len(frame) == 8
    assert list(frame["scene"].unique()) == [1, 4]
    assert frame.loc[frame["scene"] == 4, "value"].sum() == 4.0
    assert grids_to_frame({}).empty
