"""Social Force forecaster: goal relaxation plus circular exponential repulsion.

The acceleration of agent ``i`` is::

    a_i = (v0_i * e_i - v_i) / tau_relax + sum_j A * exp((2 r - d_ij) / B) * n_ij

with ``e_i`` the unit direction to the goal, ``d_ij`` the center distance and
``n_ij`` the unit vector from ``j`` to ``i``. Integration is symplectic Euler.

Functions:
    driving_force: Relaxation towards the desired velocity.
    repulsive_force: Pairwise repulsion summed per agent.
    sf_acceleration: Acceleration of a single agent.
    sf_rollout: Integrate a group of agents.
    sf_forecast: Forecast every present pedestrian of a scene window.
"""

from collections.abc import Sequence

import numpy as np
from loguru import logger

from crowdbench.core.schema import PredictionSet
from crowdbench.core.windows import SceneWindow
from crowdbench.services.geometry.kinematics import Pose2
from crowdbench.services.geometry.scene_state import (
    observed_mean_speed,
    observed_poses,
    steps_per_sample,
    to_prediction_set,
)
from crowdbench.services.social_force.config import SFParams

COINCIDENT = 1e-9


def driving_force(
    positions: np.ndarray,
    velocities: np.ndarray,
    goals: np.ndarray,
    desired_speeds: np.ndarray,
    params: SFParams,
) -> np.ndarray:
    """Relaxation term ``(v0 * e - v) / tau_relax``.

    An agent standing on its goal has a zero desired direction.

    Args:
        positions (np.ndarray): ``(N, 2)`` positions.
        velocities (np.ndarray): ``(N, 2)`` velocities.
        goals (np.ndarray): ``(N, 2)`` goals.
        desired_speeds (np.ndarray): ``(N,)`` desired speeds.
        params (SFParams): Force parameters.

    Returns:
        np.ndarray: ``(N, 2)`` accelerations.
    """
    to_goal = goals - positions
    distance = np.hypot(to_goal[:, 0], to_goal[:, 1])
    directions = np.zeros_like(to_goal)
    reached = distance > 0.0
    directions[reached] = to_goal[reached] / distance[reached, None]
    return (desired_speeds[:, None] * directions - velocities) / params.tau_relax


def repulsive_force(
    positions: np.ndarray,
    params: SFParams,
    ped_ids: Sequence[int] | None = None,
) -> np.ndarray:
    """Sum of ``A * exp((2 r - d_ij) / B) * n_ij`` over the other agents.

    Coincident agents are pushed apart along the x axis with the capped magnitude
    ``A * exp(2 r / B)``, the lower ``ped_id`` towards +x.

    Args:
        positions (np.ndarray): ``(N, 2)`` positions.
        params (SFParams): Force parameters.
        ped_ids (Sequence[int] | None): Identifier per row, row order when None.

    Returns:
        np.ndarray: ``(N, 2)`` accelerations.
    """
    offsets = positions[:, None, :] - positions[None, :, :]
    distance = np.hypot(offsets[..., 0], offsets[..., 1])
    np.fill_diagonal(distance, np.inf)
    # the diagonal is inf, so its magnitude is exactly 0
    magnitude = params.A * np.exp((2.0 * params.agent_radius - distance) / params.B)
    coincident = distance < COINCIDENT
    units = np.zeros_like(offsets)
    separated = ~coincident & ~np.isinf(distance)
    units[separated] = offsets[separated] / distance[separated][:, None]
    ranks = np.arange(len(positions)) if ped_ids is None else np.asarray(ped_ids)
    lower = ranks[:, None] < ranks[None, :]
    units[coincident & lower] = (1.0, 0.0)
    units[coincident & ~lower] = (-1.0, 0.0)
    return (magnitude[..., None] * units).sum(axis=1)


def sf_acceleration(
    agent: Pose2,
    goal: np.ndarray,
    neighbours: list[Pose2],
    params: SFParams,
    desired_speed: float | None = None,
    ped_ids: Sequence[int] | None = None,
) -> np.ndarray:
    """Acceleration of one agent under the force law.

    Args:
        agent (Pose2): The agent.
        goal (np.ndarray): Its goal.
        neighbours (list[Pose2]): Other agents; only their positions matter.
        params (SFParams): Force parameters.
        desired_speed (float | None): Overrides ``params.desired_speed``.
        ped_ids (Sequence[int] | None): Identifiers of the agent then its neighbours.

    Returns:
        np.ndarray: ``(2,)`` acceleration, m/s^2.
    """
    speed = desired_speed if desired_speed is not None else params.desired_speed or 0.0
    positions = np.vstack([agent.position, *[neighbour.position for neighbour in neighbours]])
    drive = driving_force(
        agent.position[None, :],
        agent.velocity[None, :],
        np.asarray(goal, dtype=float)[None, :],
        np.array([speed]),
        params,
    )[0]
    return drive + repulsive_force(positions, params, ped_ids)[0]


def sf_rollout(
    positions: np.ndarray,
    velocities: np.ndarray,
    goals: np.ndarray,
    desired_speeds: np.ndarray,
    params: SFParams,
    n_steps: int,
    ped_ids: Sequence[int] | None = None,
) -> np.ndarray:
    """Integrate agents with symplectic Euler at ``params.dt_sim``.

    Velocities are updated first, clipped to ``speed_factor * desired_speed``,
    then used to advance positions.

    Args:
        positions (np.ndarray): ``(N, 2)`` initial positions.
        velocities (np.ndarray): ``(N, 2)`` initial velocities.
        goals (np.ndarray): ``(N, 2)`` goals.
        desired_speeds (np.ndarray): ``(N,)`` desired speeds.
        params (SFParams): Force parameters.
        n_steps (int): Number of simulation steps.
        ped_ids (Sequence[int] | None): Identifier per agent, row order when None.

    Returns:
        np.ndarray: ``(n_steps, N, 2)`` positions after each step.
    """
    positions = np.array(positions, dtype=float)
    velocities = np.array(velocities, dtype=float)
    max_speeds = params.speed_factor * desired_speeds
    history = np.empty((n_steps, len(positions), 2))
    for step in range(n_steps):
        acceleration = driving_force(positions, velocities, goals, desired_speeds, params)
        acceleration += repulsive_force(positions, params, ped_ids)
        velocities = velocities + acceleration * params.dt_sim
        speeds = np.hypot(velocities[:, 0], velocities[:, 1])
        too_fast = speeds > max_speeds
        velocities[too_fast] *= (max_speeds[too_fast] / speeds[too_fast])[:, None]
        positions = positions + velocities * params.dt_sim
        history[step] = positions
    return history


def sf_forecast(
    window: SceneWindow,
    goals: dict[int, np.ndarray],
    params: SFParams,
    pred_len: int,
    velocity_jitter: dict[int, np.ndarray] | None = None,
) -> PredictionSet:
    """Forecast every pedestrian present at the last observed frame.

    Args:
        window (SceneWindow): Scene window.
        goals (dict[int, np.ndarray]): Goal per pedestrian.
        params (SFParams): Force parameters.
        pred_len (int): Steps to predict.
        velocity_jitter (dict[int, np.ndarray] | None): Added to initial velocities, m/s.

    Returns:
        PredictionSet: One mode with a track per simulated pedestrian.
    """
    poses = observed_poses(window)
    ped_ids = list(poses)
    positions = np.array([poses[ped_id].position for ped_id in ped_ids])
    velocities = np.array([poses[ped_id].velocity for ped_id in ped_ids])
    if velocity_jitter is not None:
        velocities += np.array([velocity_jitter.get(ped_id, np.zeros(2)) for ped_id in ped_ids])
    if params.desired_speed is not None:
        desired_speeds = np.full(len(ped_ids), params.desired_speed)
    else:
        desired_speeds = np.array([observed_mean_speed(window, ped_id) for ped_id in ped_ids])
    steps = steps_per_sample(window.dt, params.dt_sim)
    history = sf_rollout(
        positions,
        velocities,
        np.array([goals[ped_id] for ped_id in ped_ids]),
        desired_speeds,
        params,
        pred_len * steps,
        ped_ids,
    )
    sampled = history[steps - 1 :: steps]
    logger.debug(f"Social Force forecast of scene {window.scene_id} for {len(ped_ids)} pedestrians")
    return to_prediction_set(window, {ped_id: sampled[:, index] for index, ped_id in enumerate(ped_ids)})
