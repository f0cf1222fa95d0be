"""Synthetic circle-crossing scene generation."""

from crowdbench.services.synthgen.config import SynthConfig
from crowdbench.services.synthgen.filters import SceneCandidate, sensitivity_filter, sharp_turn_filter
from crowdbench.services.synthgen.generator import (
    GeneratedDataset,
    Rollout,
    generate_dataset,
    make_candidate,
    process_scenario,
    rollout_scenario,
    simulate_and_window,
    window_candidates,
)
from crowdbench.services.synthgen.scenarios import sample_circle_scenario

__all__ = [
    "GeneratedDataset",
    "Rollout",
    "SceneCandidate",
    "SynthConfig",
    "generate_dataset",
    "make_candidate",
    "process_scenario",
    "rollout_scenario",
    "sample_circle_scenario",
    "sensitivity_filter",
    "sharp_turn_filter",
    "simulate_and_window",
    "window_candidates",
]
