"""Displacement metrics.

Functions:
    displacement_errors: ADE and FDE of one predicted track.
    topk_displacement: Best ADE and best FDE over k modes.
"""

import numpy as np

from crowdbench.core.errors import MetricError


def displacement_errors(prediction: np.ndarray, ground_truth: np.ndarray) -> tuple[float, float]:
    """Average and final Euclidean displacement.

    Args:
        prediction (np.ndarray): ``(T, 2)`` predicted positions.
        ground_truth (np.ndarray): ``(T, 2)`` true positions.

    Returns:
        tuple[float, float]: ``(ade, fde)`` in meters.

    Raises:
        MetricError: If the tracks differ in length or are empty.
    """
    prediction = np.asarray(prediction, dtype=float)
    ground_truth = np.asarray(ground_truth, dtype=float)
    if prediction.shape != ground_truth.shape or not len(prediction):
        raise MetricError(f"track shapes differ: {prediction.shape} vs {ground_truth.shape}")
    errors = np.hypot(*(prediction - ground_truth).T)
    return float(errors.mean()), float(errors[-1])


def topk_displacement(modes: np.ndarray, ground_truth: np.ndarray) -> tuple[float, float]:
    """Minimum ADE and minimum FDE over modes, each minimized on its own.

    Args:
        modes (np.ndarray): ``(k, T, 2)`` predicted tracks.
        ground_truth (np.ndarray): ``(T, 2)`` true positions.

    Returns:
        tuple[float, float]: ``(topk_ade, topk_fde)`` in meters.
    """
    errors = [displacement_errors(mode, ground_truth) for mode in modes]
    return min(ade for ade, _ in errors), min(fde for _, fde in errors)
