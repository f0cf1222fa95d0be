"""Filters rejecting unrealistic or chaotic synthetic scenes.

Classes:
    SceneCandidate: A window and the exact simulator state at its last observed frame.

Functions:
    sharp_turn_filter: Reject primaries turning sharply at walking speed.
    sensitivity_filter: Reject scenes whose future flips under tiny perturbations.
"""

from typing import NamedTuple

import numpy as np
from loguru import logger

from crowdbench.core.schema import CategoryTags
from crowdbench.core.windows import SceneWindow
from crowdbench.services.geometry import AgentState, relative_angle
from crowdbench.services.geometry.scene_state import steps_per_sample
from crowdbench.services.metrics import displacement_errors
from crowdbench.services.orca import OrcaParams, orca_rollout
from crowdbench.services.synthgen.config import SynthConfig


class SceneCandidate(NamedTuple):
    """A window cut from a rollout.

    Attributes:
        window (SceneWindow): Sampled positions of the scene.
        agents (list[AgentState]): Every simulated agent at the window's last observed frame.
        tags (CategoryTags | None): Categorization of the window.
    """

    window: SceneWindow
    agents: list[AgentState]
    tags: CategoryTags | None = None


def sharp_turn_filter(window: SceneWindow, config: SynthConfig | None = None) -> bool:
    """Whether the primary never turns sharply while walking.

    A turn is sharp when consecutive step headings differ by more than
    ``turn_angle`` and both steps are faster than ``turn_speed``.

    Args:
        window (SceneWindow): Candidate window.
        config (SynthConfig | None): Turn thresholds.

    Returns:
        bool: True to keep the window.
    """
    config = config or SynthConfig()
    steps = np.diff(window.primary, axis=0)
    speeds = np.hypot(steps[:, 0], steps[:, 1]) / window.dt
    turns = np.abs(relative_angle(steps[:-1], steps[1:]))
    walking = (speeds[:-1] > config.turn_speed) & (speeds[1:] > config.turn_speed)
    return not bool((walking & (turns > config.turn_angle)).any())


def _perturb(agent: AgentState, rng: np.random.Generator, noise: float, dt: float) -> AgentState:
    shift = rng.uniform(-noise, noise, 2)
    previous_shift = rng.uniform(-noise, noise, 2)
    velocity = np.asarray(agent.velocity) + (shift - previous_shift) / dt
    return agent._replace(
        position=(agent.position[0] + float(shift[0]), agent.position[1] + float(shift[1])),
        velocity=(float(velocity[0]), float(velocity[1])),
    )


def sensitivity_filter(
    candidate: SceneCandidate,
    params: OrcaParams,
    config: SynthConfig,
    rng: np.random.Generator,
) -> bool:
    """Whether the candidate's future is robust to tiny input perturbations.

    Each of the ``k_perturb`` trials shifts every agent's position, and the previous
    position its velocity is derived from, by i.i.d. ``U[-noise_thresh, noise_thresh]``
    per coordinate, re-simulates the future and compares the primary with the stored one.

    Args:
        candidate (SceneCandidate): Window with the simulator state it was rolled out from.
        params (OrcaParams): Parameters that produced the future.
        config (SynthConfig): Noise, trial count and rejection threshold.
        rng (np.random.Generator): Source of perturbations.

    Returns:
        bool: True to keep the scene.
    """
    window = candidate.window
    steps = steps_per_sample(window.dt, params.dt_sim)
    future = window.primary[window.obs_len :]
    index = next(i for i, agent in enumerate(candidate.agents) if agent.ped_id == window.primary_ped)
    for trial in range(config.k_perturb):
        agents = [_perturb(agent, rng, config.noise_thresh, window.dt) for agent in candidate.agents]
        states = orca_rollout(agents, params, window.pred_len * steps)[steps - 1 :: steps]
        ade, _ = displacement_errors(np.array([state[index].position for state in states]), future)
        if ade > config.ade_reject:
            logger.debug(f"Primary {window.primary_ped} diverges by {ade:.3f} m in trial {trial}, rejected.")
            return False
    return True
