"""Trajectory categorization."""

from crowdbench.services.categorize.categorizer import (
    categorize_dataset,
    categorize_scene,
    category_statistics,
    filter_types,
)
from crowdbench.services.categorize.config import CategoryThresholds
from crowdbench.services.categorize.rules import tag_interactions, tag_linear, tag_static

__all__ = [
    "CategoryThresholds",
    "categorize_dataset",
    "categorize_scene",
    "category_statistics",
    "filter_types",
    "tag_interactions",
    "tag_linear",
    "tag_static",
]
