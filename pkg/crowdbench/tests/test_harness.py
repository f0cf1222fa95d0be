import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from loguru import logger

from crowdbench.conftest import walking_track
from crowdbench.core.errors import CalibrationError, DatasetValidationError, ForecastError, PoolingError
from crowdbench.core.ndjson import parse_ndjson
from crowdbench.core.schema import Dataset
from crowdbench.core.windows import SceneWindow, build_window, scene_window
from crowdbench.harness.calibrate import CandidateScore, calibrate_gridsearch, expand_grid, select_best
from crowdbench.harness.commands import evaluate_command, grid_command, split_dataset
from crowdbench.harness.goals import virtual_goals
from crowdbench.harness.plots import plot_scene
from crowdbench.harness.predict import ModelName, forecast_window, parse_model, predict_dataset, predict_scene
from crowdbench.services.metrics import col_i
from crowdbench.services.orca import OrcaParams
from crowdbench.services.social_force import SFParams
from crowdbench.services.synthgen import SynthConfig, generate_dataset


def _corridor(scenes: int) -> Dataset:
    """``scenes`` parallel walkers 2 m apart, one scene per walker."""
    lines = [
        f'{{"track": {{"f": {frame}, "p": {ped}, "x": {0.4 * frame:.2f}, "y": {2.0 * ped:.1f}}}}}'
        for ped in range(scenes)
        for frame in range(21)
    ]
    lines += [f'{{"scene": {{"id": {ped}, "p": {ped}, "s": 0, "e": 20, "fps": 2.5}}}}' for ped in range(scenes)]
    return parse_ndjson(lines)


def _pair_window() -> SceneWindow:
    primary = walking_track((0.0, 0.0), (1.0, 0.0), 21, 0.4)
    return build_window(primary, {1: walking_track((0.0, 2.0), (1.0, 0.0), 21, 0.4)}, dt=0.4, obs_len=9, pred_len=12)


def _score(index: int, ade: float, colliding: int, col_i: float | None = None) -> CandidateScore:
    """Candidate scored on 100 scenes unless ``col_i`` says otherwise."""
    percent = float(colliding) if col_i is None else col_i
    return CandidateScore(index=index, params=SFParams(), ade=ade, fde=2 * ade, col_i=percent, colliding=colliding)


def test_virtual_goal_along_mean_velocity(linear_window: SceneWindow) -> None:
    """The goal lies ``distance`` meters ahead of the last observed position."""
    goals = virtual_goals(linear_window, distance=20.0)
    np.testing.assert_allclose(goals[0], [23.2, 0.0])


def test_virtual_goal_without_motion() -> None:
    """Standing and single-point pedestrians keep their last position."""
    primary = np.tile([1.0, 1.0], (21, 1))
    late = np.full((21, 2), np.nan)
    late[8] = (4.0, 4.0)
    window = build_window(primary, {1: late}, dt=0.4, obs_len=9, pred_len=12)
    goals = virtual_goals(window)
    np.testing.assert_allclose(goals[0], [1.0, 1.0])
    np.testing.assert_allclose(goals[1], [4.0, 4.0])


def test_unknown_model_is_rejected() -> None:
    """Only the four forecasters exist."""
    assert parse_model("orca") is ModelName.ORCA
    with pytest.raises(ForecastError):
        parse_model("lstm")


@pytest.mark.parametrize("model", list(ModelName))
def test_predictions_are_seeded(model: ModelName) -> None:
    """The same seed gives the same modes and mode 0 is unperturbed."""
    window = _pair_window()
    first = predict_scene(window, model, modes=3, seed=7)
    second = predict_scene(window, model, modes=3, seed=7)
    assert first == second
    assert first.k == 3
    assert first.frames == tuple(range(9, 21))
    assert sorted(first.modes[0].tracks) == [0, 1]
    assert predict_scene(window, model, seed=8).modes[0] == first.modes[0]


@pytest.mark.parametrize("model", [ModelName.CV, ModelName.KALMAN, ModelName.SF])
def test_jittered_modes_differ(model: ModelName) -> None:
    """Each extra mode starts from its own perturbed velocity."""
    prediction = predict_scene(_pair_window(), model, modes=3, seed=7)
    assert not np.allclose(prediction.primary(1), prediction.primary(2))
    assert not np.allclose(prediction.primary(0), prediction.primary(1))


def test_constant_velocity_on_a_line(linear_window: SceneWindow) -> None:
    """Mode 0 of the constant velocity model continues the walk exactly."""
    prediction = predict_scene(linear_window, ModelName.CV)
    np.testing.assert_allclose(prediction.primary(0), linear_window.primary[9:], atol=1e-9)


@settings(max_examples=25, deadline=None)
@given(
    st.sampled_from(list(ModelName)),
    st.floats(min_value=0.0, max_value=2 * math.pi),
    st.tuples(st.floats(min_value=-50.0, max_value=50.0), st.floats(min_value=-50.0, max_value=50.0)),
)
def test_forecasts_follow_rotations_and_translations(
    model: ModelName,
    angle: float,
    shift: tuple[float, float],
) -> None:
    """Moving the whole scene rigidly moves every forecast track the same way."""
    rotation = np.array([[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]])
    primary = walking_track((0.0, 0.0), (1.0, 0.0), 21, 0.4)
    neighbour = walking_track((6.0, -7.0), (0.0, 1.1), 21, 0.4)
    base = build_window(primary, {1: neighbour}, dt=0.4, obs_len=9, pred_len=12)
    moved = build_window(
        primary @ rotation.T + shift,
        {1: neighbour @ rotation.T + shift},
        dt=0.4,
        obs_len=9,
        pred_len=12,
    )
    expected = forecast_window(base, model).modes[0].tracks
    actual = forecast_window(moved, model).modes[0].tracks
    assert sorted(actual) == sorted(expected) == [0, 1]
    for ped_id, track in expected.items():
        np.testing.assert_allclose(actual[ped_id], np.array(track) @ rotation.T + shift, atol=1e-6)


def test_predict_dataset_follows_scene_order() -> None:
    """One prediction per scene, in scene order."""
    predictions = predict_dataset(_corridor(3), "kalman", modes=2)
    assert [prediction.scene_id for prediction in predictions] == [0, 1, 2]
    assert [prediction.primary_ped for prediction in predictions] == [0, 1, 2]
    assert all(prediction.k == 2 for prediction in predictions)


def test_select_best_prefers_collision_free() -> None:
    """Among collision-free points the lowest ADE wins, ties go to grid order."""
    scores = [_score(0, 0.1, 5), _score(1, 0.4, 0), _score(2, 0.3, 0), _score(3, 0.3, 0)]
    assert select_best(scores).index == 2


def test_select_best_without_survivors() -> None:
    """Without collision-free points the fewest collisions win."""
    scores = [_score(0, 0.1, 20), _score(1, 0.9, 10), _score(2, 0.5, 10)]
    assert select_best(scores).index == 2
    with pytest.raises(CalibrationError):
        select_best([])


def test_select_best_ignores_display_rounding() -> None:
    """One collision among thousands of scenes still disqualifies a grid point."""
    colliding = _score(0, 0.1, 1, col_i=0.0)
    clean = _score(1, 0.5, 0)
    assert select_best([colliding, clean]).index == 1


def test_expand_grid() -> None:
    """The last axis varies fastest and the other parameters keep their defaults."""
    grid = expand_grid("sf", {"A": [1.0, 2.0], "B": [0.2, 0.3, 0.4]})
    assert len(grid) == 6
    assert [(params.A, params.B) for params in grid[:3]] == [(1.0, 0.2), (1.0, 0.3), (1.0, 0.4)]
    assert grid[0].tau_relax == SFParams().tau_relax
    assert all(isinstance(params, OrcaParams) for params in expand_grid("orca", {"tau": [1.0, 2.0]}))


def test_expand_grid_rejects_bad_input() -> None:
    """Only simulators with valid values can be calibrated."""
    with pytest.raises(CalibrationError):
        expand_grid("kalman", {"A": [1.0]})
    with pytest.raises(CalibrationError):
        expand_grid("sf", {"B": [-1.0]})


def test_calibration_picks_first_of_equal_points(linear_window: SceneWindow) -> None:
    """Repulsion does not matter for a lone walker, so grid order decides."""
    result = calibrate_gridsearch("sf", expand_grid("sf", {"A": [0.0, 2.0]}), [linear_window])
    assert len(result.scores) == 2
    assert result.scores[0].ade == result.scores[1].ade
    assert result.best.index == 0
    assert result.best.col_i == 0.0
    assert result.best.colliding == 0


def test_calibration_needs_grid_and_scenes(linear_window: SceneWindow) -> None:
    """Empty grids and empty scene lists are rejected."""
    with pytest.raises(CalibrationError):
        calibrate_gridsearch("orca", [], [linear_window])
    with pytest.raises(CalibrationError):
        calibrate_gridsearch("orca", [OrcaParams()], [])


def test_split_dataset() -> None:
    """Parts are disjoint, cover every scene and are reproducible."""
    dataset = _corridor(10)
    train, test = split_dataset(dataset, 0.3, seed=4)
    train_ids = {scene.scene_id for scene in train.scenes}
    test_ids = {scene.scene_id for scene in test.scenes}
    assert len(test_ids) == 3
    assert train_ids | test_ids == set(range(10))
    assert not train_ids & test_ids
    assert split_dataset(dataset, 0.3, seed=4) == (train, test)
    assert {point.ped_id for point in train.points} >= train_ids


def test_split_rejects_bad_fraction() -> None:
    """The test share must be a fraction."""
    with pytest.raises(DatasetValidationError):
        split_dataset(_corridor(2), 1.5)


def test_evaluate_perfect_constant_velocity() -> None:
    """Constant velocity is exact on straight walkers and never collides with 2 m spacing."""
    dataset = _corridor(3)
    report = evaluate_command(dataset, predict_dataset(dataset, "cv"), "cv").set_index("category")
    assert report.loc["overall", "N"] == 3
    assert report.loc["overall", "ADE"] == pytest.approx(0.0, abs=1e-6)
    assert report.loc["overall", "Col-I%"] == 0.0


def test_evaluate_reports_dropped_modes() -> None:
    """Modes past ``topk`` are left out of the scores and the drop is logged."""
    dataset = _corridor(2)
    predictions = predict_dataset(dataset, "cv", modes=4)
    messages: list[str] = []
    handler = logger.add(messages.append, level="DEBUG", format="{message}")
    try:
        report = evaluate_command(dataset, predictions, "cv", topk=1).set_index("category")
    finally:
        logger.remove(handler)
    assert any("6 modes past them are ignored" in message for message in messages)
    assert report.loc["overall", "Top-k ADE"] == pytest.approx(report.loc["overall", "ADE"])


def test_grid_command(dataset_lines: list[str]) -> None:
    """One grid per scene; unknown kinds are rejected."""
    dataset = parse_ndjson(dataset_lines)
    frame = grid_command(dataset, kind="directional")
    assert set(frame["scene"]) == {0}
    assert set(frame["channel"]) == {0, 1}
    with pytest.raises(PoolingError):
        grid_command(dataset, kind="semantic")


def test_plot_scene_writes_svg(dataset_lines: list[str], tmp_path: Path) -> None:
    """The plot lands at the requested path."""
    dataset = parse_ndjson(dataset_lines)
    window = scene_window(dataset, dataset.scene(0), 9, 12)
    prediction = predict_scene(window, ModelName.CV)
    path = plot_scene(window, prediction, tmp_path / "plots" / "scene_0.svg")
    assert path.exists()
    assert path.read_text(encoding="utf-8").lstrip().startswith("<?xml")


@pytest.fixture(scope="module")
def synthetic_dataset() -> Dataset:
    """Two hundred generated scenes with the default generator settings."""
    return generate_dataset(SynthConfig(seed=0, scenes_target=200)).dataset


@pytest.mark.slow
@pytest.mark.parametrize("model", ["orca", "sf"])
def test_simulators_do_not_collide_on_synthetic_scenes(synthetic_dataset: Dataset, model: str) -> None:
    """Both simulators forecast the generated scenes without a single prediction collision."""
    assert len(synthetic_dataset.scenes) == 200
    summary = col_i(predict_dataset(synthetic_dataset, model))
    assert summary.colliding == 0
    assert summary.percent == 0.0
