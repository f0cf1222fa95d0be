"""Circle-crossing scenarios.

Functions:
    sample_circle_scenario: Agents on a circle walking to the antipodal point.
"""

import numpy as np
from loguru import logger

from crowdbench.core.errors import ScenarioPlacementError
from crowdbench.services.geometry import AgentState
from crowdbench.services.synthgen.config import SynthConfig


def sample_circle_scenario(
    config: SynthConfig,
    rng: np.random.Generator,
    agent_radius: float = 0.3,
    first_ped: int = 0,
) -> list[AgentState]:
    """Place ``n`` resting agents on the circle around the origin, goals diametrically opposite.

    Angles are redrawn as a whole until every pairwise start distance is at least ``d_min``.

    Args:
        config (SynthConfig): Circle radius, agent range, spacing and retry limit.
        rng (np.random.Generator): Source of randomness.
        agent_radius (float): Body radius of every agent, m.
        first_ped (int): Id of the first agent; the others follow consecutively.

    Returns:
        list[AgentState]: The agents in id order.

    Raises:
        ScenarioPlacementError: If no placement is found within ``max_retries`` attempts.
    """
    n = int(rng.integers(*config.n_range))
    for attempt in range(config.max_retries):
        angles = rng.uniform(0.0, 2.0 * np.pi, n)
        starts = config.radius * np.stack([np.cos(angles), np.sin(angles)], axis=1)
        gaps = starts[:, None, :] - starts[None, :, :]
        distances = np.hypot(gaps[..., 0], gaps[..., 1])[np.triu_indices(n, k=1)]
        if distances.min() >= config.d_min:
            logger.debug(f"Placed {n} agents after {attempt + 1} attempts.")
            return [
                AgentState(
                    ped_id=first_ped + index,
                    position=(float(x), float(y)),
                    velocity=(0.0, 0.0),
                    goal=(-float(x), -float(y)),
                    radius=agent_radius,
                )
                for index, (x, y) in enumerate(starts)
            ]
    raise ScenarioPlacementError(
        f"no placement of {n} agents {config.d_min} m apart on a {config.radius} m circle "
        f"in {config.max_retries} attempts",
    )
