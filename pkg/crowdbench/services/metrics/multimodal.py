"""Likelihood of the ground truth under a kernel density estimate of the modes.

Functions:
    kde_bandwidth: Scott's rule bandwidth with a floor.
    avg_nll: Average negative log-likelihood over the prediction steps.
"""

import math

import numpy as np

from crowdbench.services.metrics.config import KDEConfig


def kde_bandwidth(points: np.ndarray, config: KDEConfig) -> float:
    """Isotropic bandwidth for the ``(k, 2)`` mode points of one step.

    Args:
        points (np.ndarray): Mode positions.
        config (KDEConfig): Bandwidth rule.

    Returns:
        float: The fixed bandwidth, else ``max(sigma * k ** (-1/6), h_min)``.
    """
    if config.bandwidth is not None:
        return config.bandwidth
    if len(points) < 2:
        return config.h_min
    sigma = math.sqrt(float(points.var(axis=0, ddof=1).mean()))
    return max(sigma * len(points) ** (-1.0 / 6.0), config.h_min)


def avg_nll(modes: np.ndarray, ground_truth: np.ndarray, config: KDEConfig | None = None) -> float:
    """Mean over steps of ``-log`` of the Gaussian KDE density at the true position.

    Args:
        modes (np.ndarray): ``(k, T, 2)`` predicted tracks.
        ground_truth (np.ndarray): ``(T, 2)`` true positions.
        config (KDEConfig | None): Bandwidth rule and floors.

    Returns:
        float: Average NLL in nats.
    """
    config = config or KDEConfig()
    modes = np.asarray(modes, dtype=float)
    nll = []
    for step, target in enumerate(np.asarray(ground_truth, dtype=float)):
        points = modes[:, step]
        h = kde_bandwidth(points, config)
        sq_dist = ((points - target) ** 2).sum(axis=1)
        density = float(np.mean(np.exp(-sq_dist / (2.0 * h * h)))) / (2.0 * math.pi * h * h)
        nll.append(-math.log(max(density, config.density_floor)))
    return float(np.mean(nll))
