import numpy as np
import pytest

from crowdbench.core.windows import SceneWindow, build_window
from crowdbench.services.geometry import AgentState


def walking_track(start: tuple[float, float], velocity: tuple[float, float], frames: int, dt: float) -> np.ndarray:
    """Positions of a constant-velocity walker at ``frames`` samples."""
    return np.asarray(start) + np.outer(np.arange(frames) * dt, velocity)


@pytest.fixture
def dataset_lines() -> list[str]:
    """Two pedestrians and one scene: ped 1 walks +x, ped 2 appears at frame 5."""
    lines = [
        f'{{"track": {{"f": {frame}, "p": 1, "x": {0.4 * frame:.2f}, "y": 0.0}}}}' for frame in range(21)
    ]
    lines += [f'{{"track": {{"f": {frame}, "p": 2, "x": {0.4 * frame:.2f}, "y": 3.0}}}}' for frame in range(5, 21)]
    lines.append('{"scene": {"id": 0, "p": 1, "s": 0, "e": 20, "fps": 2.5}}')
    return lines


@pytest.fixture
def linear_window() -> SceneWindow:
    """A lone pedestrian walking +x at 1 m/s."""
    return build_window(walking_track((0.0, 0.0), (1.0, 0.0), 21, 0.4), {}, dt=0.4, obs_len=9, pred_len=12)


@pytest.fixture
def head_on_agents() -> list[AgentState]:
    """Two agents walking straight at each other along the x axis."""
    return [
        AgentState(ped_id=0, position=(-5.0, 0.0), velocity=(0.0, 0.0), goal=(5.0, 0.0), radius=0.3),
        AgentState(ped_id=1, position=(5.0, 0.0), velocity=(0.0, 0.0), goal=(-5.0, 0.0), radius=0.3),
    ]
