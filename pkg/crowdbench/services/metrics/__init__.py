"""Displacement, collision and likelihood metrics with per-category reports."""

from crowdbench.services.metrics.collisions import (
    Approach,
    CollisionSummary,
    closest_approach,
    col_i,
    col_ii,
    scene_collides,
)
from crowdbench.services.metrics.config import CollisionConfig, KDEConfig
from crowdbench.services.metrics.displacement import displacement_errors, topk_displacement
from crowdbench.services.metrics.multimodal import avg_nll, kde_bandwidth
from crowdbench.services.metrics.report import SceneScore, aggregate_report, render_text, score_predictions

__all__ = [
    "Approach",
    "CollisionConfig",
    "CollisionSummary",
    "KDEConfig",
    "SceneScore",
    "aggregate_report",
    "avg_nll",
    "closest_approach",
    "col_i",
    "col_ii",
    "displacement_errors",
    "kde_bandwidth",
    "render_text",
    "scene_collides",
    "score_predictions",
    "topk_displacement",
]
