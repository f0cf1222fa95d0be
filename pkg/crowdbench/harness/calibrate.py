"""Grid-search calibration of the simulation forecasters.

Candidates predicting any collision are discarded; the survivors are ranked by
ADE, then FDE, then grid order.

Classes:
    CandidateScore: Metrics of one grid point.
    CalibrationResult: The chosen point and every score.

Functions:
    expand_grid: Cartesian product of parameter axes.
    score_candidate: Forecast and score one grid point.
    select_best: Pick the best scored candidate.
    calibrate_gridsearch: Score a whole grid and pick the best point.
"""

import itertools
from collections.abc import Sequence
from functools import partial
from typing import NamedTuple

import numpy as np
from loguru import logger
from pydantic import ValidationError

from crowdbench.core.errors import CalibrationError
from crowdbench.core.windows import SceneWindow
from crowdbench.harness.predict import ModelName, forecast_window, parse_model
from crowdbench.services.metrics import CollisionConfig, col_i, displacement_errors
from crowdbench.services.orca import OrcaParams
from crowdbench.services.social_force import SFParams
from crowdbench.utils.utils import parallel_map

SimulatorParams = SFParams | OrcaParams


class CandidateScore(NamedTuple):
    """Metrics of one grid point.

    Attributes:
        index (int): Position in the grid.
        params (SimulatorParams): The parameters.
        ade (float): Mean ADE, m.
        fde (float): Mean FDE, m.
        col_i (float): Prediction collision percentage, rounded for display.
        colliding (int): Exact number of scenes with a prediction collision.
    """

    index: int
    params: SimulatorParams
    ade: float
    fde: float
    col_i: float
    colliding: int


class CalibrationResult(NamedTuple):
    """Outcome of a grid search."""

    best: CandidateScore
    scores: list[CandidateScore]


def _simulator(model: str | ModelName) -> ModelName:
    name = parse_model(model)
    if name not in {ModelName.SF, ModelName.ORCA}:
        raise CalibrationError(f"only sf and orca can be calibrated, got {name.value}")
    return name


def expand_grid(model: str | ModelName, axes: dict[str, Sequence[float]]) -> list[SimulatorParams]:
    """Cartesian product of parameter values, last axis varying fastest.

    Args:
        model (str | ModelName): ``sf`` or ``orca``.
        axes (dict[str, Sequence[float]]): Values per parameter name; other parameters keep their defaults.

    Returns:
        list[SimulatorParams]: Grid points in product order.

    Raises:
        CalibrationError: For a non-simulator model or invalid parameter values.
    """
    params_type: type[SimulatorParams] = SFParams if _simulator(model) is ModelName.SF else OrcaParams
    names = list(axes)
    try:
        return [params_type(**dict(zip(names, values, strict=True))) for values in itertools.product(*axes.values())]
    except ValidationError as e:
        raise CalibrationError(f"invalid calibration grid: {e}") from e


def score_candidate(
    indexed: tuple[int, SimulatorParams],
    model: ModelName,
    windows: list[SceneWindow],
    collision: CollisionConfig,
    goal_distance: float | None = None,
) -> CandidateScore:
    """Forecast every window with one grid point and score it.

    Args:
        indexed (tuple[int, SimulatorParams]): Grid position and parameters.
        model (ModelName): ``sf`` or ``orca``.
        windows (list[SceneWindow]): Training scenes.
        collision (CollisionConfig): Collision threshold.
        goal_distance (float | None): Virtual goal distance.

    Returns:
        CandidateScore: Mean ADE and FDE and the Col-I percentage.
    """
    index, params = indexed
    predictions = [forecast_window(window, model, params, goal_distance=goal_distance) for window in windows]
    errors = np.array(
        [
            displacement_errors(prediction.primary(0), window.primary[window.obs_len :])
            for prediction, window in zip(predictions, windows, strict=True)
        ],
    )
    collisions = col_i(predictions, collision)
    logger.debug(f"Grid point {index}: ADE {errors[:, 0].mean():.3f}, Col-I {collisions.percent}%")
    return CandidateScore(
        index,
        params,
        float(errors[:, 0].mean()),
        float(errors[:, 1].mean()),
        collisions.percent,
        collisions.colliding,
    )


def select_best(scores: list[CandidateScore]) -> CandidateScore:
    """Best collision-free candidate by ADE, then FDE, then grid order.

    Without a collision-free candidate the one with the fewest collisions wins.

    Args:
        scores (list[CandidateScore]): Scored grid.

    Returns:
        CandidateScore: The chosen candidate.

    Raises:
        CalibrationError: If ``scores`` is empty.
    """
    if not scores:
        raise CalibrationError("empty calibration grid")
    survivors = [score for score in scores if score.colliding == 0]
    if survivors:
        return min(survivors, key=lambda score: (score.ade, score.fde, score.index))
    logger.warning("Every grid point predicts collisions, choosing the one with the fewest.")
    return min(scores, key=lambda score: (score.colliding, score.ade, score.fde, score.index))


def calibrate_gridsearch(
    model: str | ModelName,
    grid: list[SimulatorParams],
    windows: list[SceneWindow],
    collision: CollisionConfig | None = None,
    goal_distance: float | None = None,
    workers: int = 1,
) -> CalibrationResult:
    """Score every grid point on the training scenes and pick the best.

    Args:
        model (str | ModelName): ``sf`` or ``orca``.
        grid (list[SimulatorParams]): Candidate parameters.
        windows (list[SceneWindow]): Training scenes.
        collision (CollisionConfig | None): Collision threshold.
        goal_distance (float | None): Virtual goal distance.
        workers (int): Processes of the parallel map.

    Returns:
        CalibrationResult: The best point and every score in grid order.

    Raises:
        CalibrationError: On an empty grid, no scenes or a non-simulator model.
    """
    name = _simulator(model)
    if not grid:
        raise CalibrationError("empty calibration grid")
    if not windows:
        raise CalibrationError("no training scenes to calibrate on")
    worker = partial(
        score_candidate,
        model=name,
        windows=windows,
        collision=collision or CollisionConfig(),
        goal_distance=goal_distance,
    )
    scores = parallel_map(worker, list(enumerate(grid)), workers)
    best = select_best(scores)
    logger.info(f"Best of {len(grid)} grid points: #{best.index} with ADE {best.ade:.3f} m, FDE {best.fde:.3f} m.")
    return CalibrationResult(best=best, scores=scores)
