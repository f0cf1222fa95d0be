import itertools

import numpy as np
import pytest
from pydantic import ValidationError

from crowdbench.core.windows import SceneWindow
from crowdbench.services.geometry import AgentState
from crowdbench.services.orca import (
    HalfPlane,
    OrcaParams,
    orca_forecast,
    orca_lines,
    orca_rollout,
    orca_step,
    preferred_velocity,
    solve_velocity,
)


def _agent(ped_id: int, position: tuple[float, float], goal: tuple[float, float]) -> AgentState:
    return AgentState(ped_id=ped_id, position=position, velocity=(0.0, 0.0), goal=goal, radius=0.3)


def test_horizon_shorter_than_step_is_rejected() -> None:
    """tau must cover at least one simulation step."""
    with pytest.raises(ValidationError):
        OrcaParams(tau=0.05, dt_sim=0.1)


def test_no_constraints_keeps_preference() -> None:
    """An unconstrained preference inside the disc is returned as is."""
    assert solve_velocity([], (0.3, -0.4), 1.5) == (0.3, -0.4)


def test_fast_preference_is_clipped() -> None:
    """A preference outside the disc is scaled onto it."""
    np.testing.assert_allclose(solve_velocity([], (3.0, 4.0), 1.0), (0.6, 0.8))


def test_single_half_plane_projects() -> None:
    """A violated half-plane projects the preference onto its boundary."""
    line = HalfPlane((0.0, 0.5), (1.0, 0.0))
    velocity = solve_velocity([line], (0.2, 0.0), 2.0)
    np.testing.assert_allclose(velocity, (0.2, 0.5), atol=1e-12)
    assert line.violation(velocity) <= 1e-9


def test_infeasible_constraints_split_the_penetration() -> None:
    """Two opposing half-planes with a gap leave each violated by half the gap."""
    lines = [HalfPlane((0.0, 0.5), (1.0, 0.0)), HalfPlane((0.0, -0.5), (-1.0, 0.0))]
    velocity = solve_velocity(lines, (0.0, 0.0), 1.0)
    assert velocity[1] == pytest.approx(0.0, abs=1e-9)
    assert np.hypot(*velocity) <= 1.0 + 1e-9
    for line in lines:
        assert line.violation(velocity) == pytest.approx(0.5)


def test_lines_skip_far_and_self() -> None:
    """Neither the agent itself nor neighbours beyond range produce constraints."""
    agent = _agent(0, (0.0, 0.0), (5.0, 0.0))
    far = _agent(1, (20.0, 0.0), (0.0, 0.0))
    assert orca_lines(agent, [agent, far], OrcaParams()) == []


def test_cutoff_circle_line() -> None:
    """Two standing agents 2 m apart limit the closing speed along their axis."""
    agent = _agent(0, (0.0, 0.0), (5.0, 0.0))
    other = _agent(1, (2.0, 0.0), (0.0, 0.0))
    (line,) = orca_lines(agent, [other], OrcaParams())
    np.testing.assert_allclose(line.direction, (0.0, 1.0), atol=1e-12)
    np.testing.assert_allclose(line.point, (0.7 / 3.0, 0.0), atol=1e-12)
    assert np.hypot(*line.direction) == pytest.approx(1.0, abs=1e-12)


def test_preferred_velocity_slows_near_goal() -> None:
    """Closer than one step from the goal, the agent aims to stop on it."""
    params = OrcaParams()
    np.testing.assert_allclose(preferred_velocity(_agent(0, (0.0, 0.0), (10.0, 0.0)), params), (1.5, 0.0))
    np.testing.assert_allclose(preferred_velocity(_agent(0, (0.0, 0.0), (0.05, 0.0)), params), (0.5, 0.0))
    assert preferred_velocity(_agent(0, (1.0, 1.0), (1.0, 1.0)), params) == (0.0, 0.0)


def test_single_agent_walks_to_goal() -> None:
    """A lone agent moves straight at max speed and stops on its goal."""
    params = OrcaParams()
    states = orca_rollout([_agent(0, (0.0, 0.0), (3.0, 0.0))], params, 30)
    np.testing.assert_allclose(states[0][0].position, (0.15, 0.0), atol=1e-12)
    np.testing.assert_allclose(states[-1][0].position, (3.0, 0.0), atol=1e-9)


def test_head_on_agents_avoid_each_other(head_on_agents: list[AgentState]) -> None:
    """Exactly head-on agents keep their distance and mirror each other through the origin."""
    params = OrcaParams()
    states = orca_rollout(head_on_agents, params, 150)
    track_a = np.array([state[0].position for state in states])
    track_b = np.array([state[1].position for state in states])
    separation = np.hypot(*(track_a - track_b).T)
    assert separation.min() >= 2 * params.agent_radius - 1e-6
    np.testing.assert_allclose(track_a, -track_b, atol=1e-9)


def test_offset_head_on_agents_pass_and_arrive() -> None:
    """A small lateral offset breaks the symmetry, so both agents pass and reach their goals."""
    params = OrcaParams()
    agents = [_agent(0, (-5.0, 0.05), (5.0, 0.05)), _agent(1, (5.0, -0.05), (-5.0, -0.05))]
    states = orca_rollout(agents, params, 300)
    track_a = np.array([state[0].position for state in states])
    track_b = np.array([state[1].position for state in states])
    assert np.hypot(*(track_a - track_b).T).min() >= 2 * params.agent_radius - 1e-3
    np.testing.assert_allclose(track_a[-1], (5.0, 0.05), atol=0.05)
    np.testing.assert_allclose(track_b[-1], (-5.0, -0.05), atol=0.05)


def test_step_is_order_independent() -> None:
    """Agents read the same snapshot, so their order does not matter."""
    agents = [
        _agent(0, (-4.0, 0.0), (4.0, 0.0)),
        _agent(1, (4.0, 0.5), (-4.0, 0.5)),
        _agent(2, (0.0, -4.0), (0.0, 4.0)),
    ]
    params = OrcaParams()
    reference = {agent.ped_id: agent for agent in orca_step(agents, params)}
    for permutation in itertools.permutations(agents):
        for agent in orca_step(list(permutation), params):
            assert agent == reference[agent.ped_id]


def test_coincident_agents_separate() -> None:
    """Coincident agents escape in opposite x directions."""
    agents = [_agent(0, (1.0, 1.0), (1.0, 1.0)), _agent(1, (1.0, 1.0), (1.0, 1.0))]
    first, second = orca_step(agents, OrcaParams())
    assert first.velocity[0] > 0.0
    assert second.velocity[0] < 0.0


def test_forecast_of_lone_walker(linear_window: SceneWindow) -> None:
    """A lone walker at cruising speed follows its ground truth towards a goal ahead."""
    prediction = orca_forecast(linear_window, {0: np.array([23.2, 0.0])}, OrcaParams(), 12)
    truth = linear_window.primary[linear_window.obs_len :]
    np.testing.assert_allclose(prediction.primary(0)[:, 1], 0.0, atol=1e-12)
    assert (np.diff(prediction.primary(0)[:, 0]) > 0.0).all()
    assert prediction.primary(0)[-1, 0] > truth[-1, 0]
