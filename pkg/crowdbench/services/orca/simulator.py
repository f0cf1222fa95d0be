"""ORCA simulator and forecaster.

Every agent builds one half-plane per neighbour from the truncated velocity
obstacle, takes half of the avoidance effort, and picks its new velocity with
``solve_velocity``. All agents read the same pre-step snapshot.

Functions:
    orca_lines: Half-planes of one agent.
    preferred_velocity: Velocity towards the goal, slowed to stop on it.
    orca_step: One synchronous simulation step.
    orca_rollout: Several steps, keeping every intermediate state.
    orca_forecast: Forecast every present pedestrian of a scene window.
"""

import math

import numpy as np
from loguru import logger

from crowdbench.core.schema import PredictionSet
from crowdbench.core.windows import SceneWindow
from crowdbench.services.geometry.kinematics import AgentState, Vec2
from crowdbench.services.geometry.scene_state import observed_poses, steps_per_sample, to_prediction_set
from crowdbench.services.orca.config import OrcaParams
from crowdbench.services.orca.halfplane import HalfPlane, det, solve_velocity


def orca_lines(agent: AgentState, neighbours: list[AgentState], params: OrcaParams) -> list[HalfPlane]:
    """Half-planes induced on ``agent`` by the neighbours within ``neighbour_dist``.

    Neighbours are processed in ascending ``ped_id``. Exactly coincident agents
    escape along +x (lower id) and -x (higher id).

    Args:
        agent (AgentState): The agent choosing a velocity.
        neighbours (list[AgentState]): Other agents; ``agent`` itself is skipped.
        params (OrcaParams): Simulator parameters.

    Returns:
        list[HalfPlane]: One constraint per neighbour in range.
    """
    inv_tau = 1.0 / params.tau
    range_sq = params.neighbour_dist * params.neighbour_dist
    (ax, ay), (avx, avy) = agent.position, agent.velocity
    lines = []
    for other in sorted(neighbours, key=lambda state: state.ped_id):
        if other.ped_id == agent.ped_id:
            continue
        rpx, rpy = other.position[0] - ax, other.position[1] - ay
        dist_sq = rpx * rpx + rpy * rpy
        if dist_sq >= range_sq:
            continue
        rvx, rvy = avx - other.velocity[0], avy - other.velocity[1]
        combined = agent.radius + other.radius
        combined_sq = combined * combined
        if dist_sq > combined_sq:
            # no collision yet: truncated cone
            wx, wy = rvx - inv_tau * rpx, rvy - inv_tau * rpy
            w_len_sq = wx * wx + wy * wy
            dot1 = wx * rpx + wy * rpy
            if dot1 < 0.0 and dot1 * dot1 > combined_sq * w_len_sq:
                # project on the cutoff circle
                w_len = math.sqrt(w_len_sq)
                ux, uy = wx / w_len, wy / w_len
                direction = (uy, -ux)
                scale = combined * inv_tau - w_len
                u = (scale * ux, scale * uy)
            else:
                # project on the legs
                leg = math.sqrt(dist_sq - combined_sq)
                if det((rpx, rpy), (wx, wy)) > 0.0:
                    direction = (
                        (rpx * leg - rpy * combined) / dist_sq,
                        (rpx * combined + rpy * leg) / dist_sq,
                    )
                else:
                    direction = (
                        -(rpx * leg + rpy * combined) / dist_sq,
                        -(-rpx * combined + rpy * leg) / dist_sq,
                    )
                dot2 = rvx * direction[0] + rvy * direction[1]
                u = (dot2 * direction[0] - rvx, dot2 * direction[1] - rvy)
        else:
            # already overlapping: resolve within one step
            inv_dt = 1.0 / params.dt_sim
            if dist_sq == 0.0:
                logger.warning(f"Agents {agent.ped_id} and {other.ped_id} coincide, escaping along the x axis.")
                ux, uy = (1.0, 0.0) if agent.ped_id < other.ped_id else (-1.0, 0.0)
                w_len = 0.0
            else:
                wx, wy = rvx - inv_dt * rpx, rvy - inv_dt * rpy
                w_len = math.hypot(wx, wy)
                ux, uy = wx / w_len, wy / w_len
            direction = (uy, -ux)
            scale = combined * inv_dt - w_len
            u = (scale * ux, scale * uy)
        lines.append(HalfPlane((avx + 0.5 * u[0], avy + 0.5 * u[1]), direction))
    return lines


def preferred_velocity(agent: AgentState, params: OrcaParams) -> Vec2:
    """``unit(goal - pos) * min(max_speed, |goal - pos| / dt_sim)``.

    Args:
        agent (AgentState): The agent.
        params (OrcaParams): Simulator parameters.

    Returns:
        Vec2: Preferred velocity, zero on the goal.
    """
    gx, gy = agent.goal[0] - agent.position[0], agent.goal[1] - agent.position[1]
    distance = math.hypot(gx, gy)
    if distance == 0.0:
        return (0.0, 0.0)
    speed = min(params.max_speed, distance / params.dt_sim)
    return (gx / distance * speed, gy / distance * speed)


def orca_step(agents: list[AgentState], params: OrcaParams) -> list[AgentState]:
    """Advance all agents by ``dt_sim`` from the same snapshot.

    Args:
        agents (list[AgentState]): Agents with distinct ids.
        params (OrcaParams): Simulator parameters.

    Returns:
        list[AgentState]: Updated agents, in input order.
    """
    updated = []
    for agent in agents:
        lines = orca_lines(agent, agents, params)
        vx, vy = solve_velocity(lines, preferred_velocity(agent, params), params.max_speed)
        position = (agent.position[0] + vx * params.dt_sim, agent.position[1] + vy * params.dt_sim)
        updated.append(agent._replace(position=position, velocity=(vx, vy)))
    return updated


def orca_rollout(agents: list[AgentState], params: OrcaParams, n_steps: int) -> list[list[AgentState]]:
    """Run ``n_steps`` synchronous steps.

    Args:
        agents (list[AgentState]): Initial agents.
        params (OrcaParams): Simulator parameters.
        n_steps (int): Number of steps.

    Returns:
        list[list[AgentState]]: States after each step.
    """
    states = []
    for _ in range(n_steps):
        agents = orca_step(agents, params)
        states.append(agents)
    return states


def orca_forecast(
    window: SceneWindow,
    goals: dict[int, np.ndarray],
    params: OrcaParams,
    pred_len: int,
    velocity_jitter: dict[int, np.ndarray] | None = None,
) -> PredictionSet:
    """Forecast every pedestrian present at the last observed frame.

    Args:
        window (SceneWindow): Scene window.
        goals (dict[int, np.ndarray]): Goal per pedestrian.
        params (OrcaParams): Simulator parameters.
        pred_len (int): Steps to predict.
        velocity_jitter (dict[int, np.ndarray] | None): Added to initial velocities, m/s.

    Returns:
        PredictionSet: One mode with a track per simulated pedestrian.
    """
    agents = []
    for ped_id, pose in observed_poses(window).items():
        velocity = pose.velocity
        if velocity_jitter is not None and ped_id in velocity_jitter:
            velocity = velocity + velocity_jitter[ped_id]
        agents.append(
            AgentState(
                ped_id=ped_id,
                position=(float(pose.position[0]), float(pose.position[1])),
                velocity=(float(velocity[0]), float(velocity[1])),
                goal=(float(goals[ped_id][0]), float(goals[ped_id][1])),
                radius=params.agent_radius,
            ),
        )
    steps = steps_per_sample(window.dt, params.dt_sim)
    states = orca_rollout(agents, params, pred_len * steps)[steps - 1 :: steps]
    logger.debug(f"ORCA forecast of scene {window.scene_id} for {len(agents)} pedestrians")
    return to_prediction_set(
        window,
        {agent.ped_id: np.array([state[index].position for state in states]) for index, agent in enumerate(agents)},
    )
