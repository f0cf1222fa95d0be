"""Synthetic dataset generation: simulate circle scenarios, cut windows, filter.

Classes:
    Rollout: Sampled frames of one simulated scenario.
    ScenarioResult: Track points and kept scenes of one scenario.
    GeneratedDataset: The dataset and its manifest.

Functions:
    rollout_scenario: Simulate until every agent reaches its goal or time runs out.
    make_candidate: Cut one window out of a rollout.
    window_candidates: Interacting windows of a rollout.
    simulate_and_window: Every interacting window of a scenario.
    process_scenario: Sample, simulate, window and filter one scenario.
    generate_dataset: Collect scenes over scenarios until the target count.
"""

import math
from functools import partial
from typing import Any, NamedTuple

import numpy as np
from loguru import logger

from crowdbench.core.schema import CategoryTags, Dataset, MainType, SceneRecord, TrackPoint
from crowdbench.core.windows import build_window
from crowdbench.services.categorize import CategoryThresholds, categorize_scene
from crowdbench.services.geometry import AgentState
from crowdbench.services.geometry.scene_state import steps_per_sample
from crowdbench.services.orca import OrcaParams, orca_step
from crowdbench.services.synthgen.config import SynthConfig
from crowdbench.services.synthgen.filters import SceneCandidate, sensitivity_filter, sharp_turn_filter
from crowdbench.services.synthgen.scenarios import sample_circle_scenario
from crowdbench.utils.utils import derive_rng, parallel_map


class Rollout(NamedTuple):
    """Simulator states at the emitted frames.

    Attributes:
        frames (tuple[int, ...]): Frame number of every sample.
        samples (list[list[AgentState]]): Agents at every sample, in id order.
    """

    frames: tuple[int, ...]
    samples: list[list[AgentState]]

    def positions(self, ped_index: int) -> np.ndarray:
        """``(F, 2)`` sampled positions of the agent at ``ped_index``."""
        return np.array([sample[ped_index].position for sample in self.samples])


class KeptScene(NamedTuple):
    """A scene accepted by every filter, before it gets an id."""

    primary_ped: int
    start_frame: int
    end_frame: int
    tags: CategoryTags | None


class ScenarioResult(NamedTuple):
    """Output of one scenario.

    Attributes:
        index (int): Scenario index.
        points (list[TrackPoint]): Every sampled position of every agent.
        scenes (list[KeptScene]): Accepted scenes in primary, then start order.
    """

    index: int
    points: list[TrackPoint]
    scenes: list[KeptScene]


class GeneratedDataset(NamedTuple):
    """Generated scenes and the record of how they were made."""

    dataset: Dataset
    manifest: dict[str, Any]


def _frames_per_scenario(config: SynthConfig) -> int:
    return math.ceil(config.max_time / config.dt) + 2


def rollout_scenario(
    agents: list[AgentState],
    params: OrcaParams,
    config: SynthConfig,
    frame_offset: int = 0,
) -> Rollout:
    """Simulate until every agent is within ``goal_tolerance`` of its goal or ``max_time`` elapses.

    Args:
        agents (list[AgentState]): Initial agents.
        params (OrcaParams): Simulator parameters.
        config (SynthConfig): Emitted frame rate, time cap and goal tolerance.
        frame_offset (int): Frame number of the initial state.

    Returns:
        Rollout: The initial state and every ``dt``-th simulator state after it.
    """
    steps = steps_per_sample(config.dt, params.dt_sim)
    max_steps = round(config.max_time / params.dt_sim)
    samples = [agents]
    for step in range(1, max_steps + 1):
        agents = orca_step(agents, params)
        if step % steps == 0:
            samples.append(agents)
        if all(math.dist(agent.position, agent.goal) <= config.goal_tolerance for agent in agents):
            break
    else:
        logger.debug(f"Rollout truncated at {config.max_time} s.")
    return Rollout(frames=tuple(range(frame_offset, frame_offset + len(samples))), samples=samples)


def make_candidate(rollout: Rollout, start: int, ped_index: int, config: SynthConfig) -> SceneCandidate:
    """Window of ``seq_len`` samples starting at sample ``start`` around one agent.

    Args:
        rollout (Rollout): Simulated scenario.
        start (int): First sample of the window.
        ped_index (int): Position of the primary in the agent lists.
        config (SynthConfig): Window lengths and frame rate.

    Returns:
        SceneCandidate: The untagged candidate.
    """
    span = slice(start, start + config.seq_len)
    agents = rollout.samples[0]
    primary = agents[ped_index].ped_id
    window = build_window(
        rollout.positions(ped_index)[span],
        {agent.ped_id: rollout.positions(index)[span] for index, agent in enumerate(agents) if index != ped_index},
        dt=config.dt,
        obs_len=config.obs_len,
        pred_len=config.pred_len,
        primary_ped=primary,
        frames=rollout.frames[span],
    )
    return SceneCandidate(window=window, agents=rollout.samples[start + config.obs_len - 1])


def window_candidates(
    rollout: Rollout,
    config: SynthConfig,
    thresholds: CategoryThresholds | None = None,
) -> list[SceneCandidate]:
    """Type III windows of a rollout, every agent taking its turn as primary.

    Args:
        rollout (Rollout): Simulated scenario.
        config (SynthConfig): Window lengths and stride.
        thresholds (CategoryThresholds | None): Categorization thresholds.

    Returns:
        list[SceneCandidate]: Tagged candidates in primary, then start order.
    """
    candidates = []
    for ped_index in range(len(rollout.samples[0])):
        for start in range(0, len(rollout.samples) - config.seq_len + 1, config.stride):
            candidate = make_candidate(rollout, start, ped_index, config)
            tags = categorize_scene(candidate.window, thresholds)
            if tags.main_type is MainType.INTERACTING:
                candidates.append(candidate._replace(tags=tags))
    return candidates


def simulate_and_window(
    agents: list[AgentState],
    params: OrcaParams,
    config: SynthConfig,
    frame_offset: int = 0,
    thresholds: CategoryThresholds | None = None,
) -> list[SceneCandidate]:
    """Interacting windows of a scenario, every agent taking its turn as primary.

    Windows start every ``stride`` samples; only type III windows are returned.

    Args:
        agents (list[AgentState]): Initial agents.
        params (OrcaParams): Simulator parameters.
        config (SynthConfig): Window and rollout parameters.
        frame_offset (int): Frame number of the initial state.
        thresholds (CategoryThresholds | None): Categorization thresholds.

    Returns:
        list[SceneCandidate]: Tagged candidates in primary, then start order.
    """
    return window_candidates(rollout_scenario(agents, params, config, frame_offset), config, thresholds)


def process_scenario(
    index: int,
    config: SynthConfig,
    params: OrcaParams,
    thresholds: CategoryThresholds | None = None,
) -> ScenarioResult:
    """Sample, simulate, window and filter scenario ``index``.

    Placement draws from the stream ``(seed, index, 0)`` and perturbations from
    ``(seed, index, 1)``, so a scenario does not depend on any other.

    Args:
        index (int): Scenario index.
        config (SynthConfig): Generation parameters.
        params (OrcaParams): Simulator parameters.
        thresholds (CategoryThresholds | None): Categorization thresholds.

    Returns:
        ScenarioResult: Points of every agent and the accepted scenes.
    """
    agents = sample_circle_scenario(
        config,
        derive_rng(config.seed, index, 0),
        agent_radius=params.agent_radius,
        first_ped=index * config.n_range[1],
    )
    frame_offset = index * _frames_per_scenario(config)
    rollout = rollout_scenario(agents, params, config, frame_offset)
    perturbations = derive_rng(config.seed, index, 1)
    scenes = []
    for candidate in window_candidates(rollout, config, thresholds):
        if not sharp_turn_filter(candidate.window, config):
            continue
        if not sensitivity_filter(candidate, params, config, perturbations):
            continue
        frames = candidate.window.frames
        scenes.append(KeptScene(candidate.window.primary_ped, frames[0], frames[-1], candidate.tags))
    points = [
        TrackPoint(frame=frame, ped_id=agent.ped_id, x=agent.position[0], y=agent.position[1])
        for frame, sample in zip(rollout.frames, rollout.samples, strict=True)
        for agent in sample
    ]
    logger.debug(f"Scenario {index}: {len(agents)} agents, {len(rollout.frames)} frames, {len(scenes)} scenes kept.")
    return ScenarioResult(index=index, points=points if scenes else [], scenes=scenes)


def generate_dataset(
    config: SynthConfig,
    params: OrcaParams | None = None,
    thresholds: CategoryThresholds | None = None,
    workers: int = 1,
) -> GeneratedDataset:
    """Generate ``scenes_target`` scenes.

    Scenarios are processed in index order and scenes are taken in that order until
    the target is met, so the output does not depend on ``workers``.

    Args:
        config (SynthConfig): Generation parameters.
        params (OrcaParams | None): Simulator parameters.
        thresholds (CategoryThresholds | None): Categorization thresholds.
        workers (int): Processes of the parallel map.

    Returns:
        GeneratedDataset: Scenes with their points, and the manifest.
    """
    params = params or OrcaParams()
    worker = partial(process_scenario, config=config, params=params, thresholds=thresholds)
    batch = 4 * max(1, workers)
    scenes: list[SceneRecord] = []
    points: list[TrackPoint] = []
    used = 0
    next_index = 0
    while len(scenes) < config.scenes_target and next_index < config.max_scenarios:
        indices = range(next_index, min(next_index + batch, config.max_scenarios))
        for result in parallel_map(worker, indices, workers):
            if len(scenes) >= config.scenes_target or not result.scenes:
                continue
            for kept in result.scenes[: config.scenes_target - len(scenes)]:
                scenes.append(
                    SceneRecord(
                        scene_id=len(scenes),
                        primary_ped=kept.primary_ped,
                        start_frame=kept.start_frame,
                        end_frame=kept.end_frame,
                        frame_skip=1,
                        fps=1.0 / config.dt,
                        tags=kept.tags,
                    ),
                )
            points.extend(result.points)
            used = result.index + 1
        next_index = indices.stop
        logger.info(f"{len(scenes)} of {config.scenes_target} scenes after {next_index} scenarios.")
    if len(scenes) < config.scenes_target:
        logger.warning(f"Only {len(scenes)} scenes in {config.max_scenarios} scenarios.")
    manifest = {
        "synth": config.model_dump(mode="json"),
        "orca": params.model_dump(mode="json"),
        "scenes": len(scenes),
        "scenarios": used,
    }
    dataset = Dataset(points=tuple(points), scenes=tuple(scenes), dt=config.dt)
    return GeneratedDataset(dataset=dataset, manifest=manifest)
