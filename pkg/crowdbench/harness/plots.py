"""Static SVG renderings of forecast scenes.

Functions:
    collision_points: Where the predicted primary collides with predicted neighbours.
    plot_scene: Render one scene to an SVG file.

Dependencies:
    - matplotlib: Figures, with the non-interactive Agg backend.
"""

from pathlib import Path

import matplotlib as mpl

mpl.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from crowdbench.core.schema import PredictionSet  # noqa: E402
from crowdbench.core.windows import SceneWindow  # noqa: E402
from crowdbench.services.metrics import CollisionConfig, closest_approach  # noqa: E402

# fixed ids keep the SVG output byte-stable
mpl.rcParams["svg.hashsalt"] = "crowdbench"


def _point_at(track: np.ndarray, time: float) -> np.ndarray:
    index = min(int(time), len(track) - 1)
    fraction = time - index
    if fraction == 0.0:
        return track[index]
    return track[index] + (track[index + 1] - track[index]) * fraction


def collision_points(prediction: PredictionSet, config: CollisionConfig | None = None) -> list[np.ndarray]:
    """Primary positions at the closest approach of every colliding predicted neighbour.

    Args:
        prediction (PredictionSet): Joint prediction; mode 0 is used.
        config (CollisionConfig | None): Collision threshold.

    Returns:
        list[np.ndarray]: One point per colliding neighbour.
    """
    config = config or CollisionConfig()
    primary = prediction.primary(0)
    points = []
    for track in prediction.neighbours(0).values():
        approach = closest_approach(primary, track, config)
        if approach.distance < config.threshold:
            points.append(_point_at(primary, approach.time))
    return points


def plot_scene(
    window: SceneWindow,
    prediction: PredictionSet,
    path: str | Path,
    config: CollisionConfig | None = None,
) -> Path:
    """Draw observations solid, predictions dashed, the primary highlighted and collisions marked.

    Args:
        window (SceneWindow): Ground-truth window.
        prediction (PredictionSet): Prediction of the same scene.
        path (str | Path): SVG file to write; parent directories are created.
        config (CollisionConfig | None): Collision threshold of the markers.

    Returns:
        Path: The written file.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    observed = slice(0, window.obs_len)
    fig, ax = plt.subplots(figsize=(6, 6))
    for track in window.neighbours.values():
        ax.plot(track[observed, 0], track[observed, 1], color="0.6", linewidth=1.0)
    ax.plot(window.primary[observed, 0], window.primary[observed, 1], color="tab:blue", linewidth=2.5, label="observed")
    ax.plot(
        window.primary[window.last_obs :, 0],
        window.primary[window.last_obs :, 1],
        color="tab:green",
        linewidth=1.5,
        label="ground truth",
    )
    for mode in range(prediction.k):
        for ped_id, track in prediction.neighbours(mode).items():
            ax.plot(track[:, 0], track[:, 1], color="0.6", linestyle="--", linewidth=1.0, gid=f"pred-{mode}-{ped_id}")
        primary = prediction.primary(mode)
        ax.plot(
            primary[:, 0],
            primary[:, 1],
            color="tab:red",
            linestyle="--",
            linewidth=2.5 if mode == 0 else 1.0,
            label="prediction" if mode == 0 else None,
        )
    for point in collision_points(prediction, config):
        ax.plot(point[0], point[1], marker="x", color="black", markersize=10)
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_title(f"scene {window.scene_id}")
    ax.legend(loc="best")
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
