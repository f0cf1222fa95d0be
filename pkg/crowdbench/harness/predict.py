"""Forecast every pedestrian of every scene with a classical model.

Classes:
    ModelName: Forecasting models.

Functions:
    parse_model: Model name from text.
    mode_jitter: Seeded initial-velocity noise of one mode.
    forecast_window: One-mode forecast of a window.
    predict_scene: k-mode forecast of a window.
    predict_dataset: Forecasts of every scene of a dataset.
"""

import enum
from functools import partial

import numpy as np
from loguru import logger

from crowdbench.core.errors import ForecastError
from crowdbench.core.schema import Dataset, PredictionSet
from crowdbench.core.windows import SceneWindow, scene_window
from crowdbench.harness.goals import virtual_goals
from crowdbench.services.forecasters import KalmanConfig, cv_forecast, kalman_forecast
from crowdbench.services.geometry.scene_state import to_prediction_set
from crowdbench.services.orca import OrcaParams, orca_forecast
from crowdbench.services.social_force import SFParams, sf_forecast
from crowdbench.settings import settings
from crowdbench.utils.utils import derive_rng, parallel_map

ModelParams = KalmanConfig | SFParams | OrcaParams | None


class ModelName(str, enum.Enum):
    """Available forecasters."""

    CV = "cv"
    KALMAN = "kalman"
    SF = "sf"
    ORCA = "orca"


def parse_model(name: str | ModelName) -> ModelName:
    """Resolve a model name.

    Args:
        name (str | ModelName): Model name.

    Returns:
        ModelName: The model.

    Raises:
        ForecastError: For an unknown model.
    """
    try:
        return ModelName(name)
    except ValueError as e:
        raise ForecastError(f"unknown model {name!r}, expected one of {[model.value for model in ModelName]}") from e


def mode_jitter(window: SceneWindow, ped_ids: list[int], seed: int, mode: int, sigma: float) -> dict[int, np.ndarray]:
    """Normal ``N(0, sigma)`` velocity noise per pedestrian, drawn from ``(seed, scene_id, mode)``.

    Args:
        window (SceneWindow): Scene window.
        ped_ids (list[int]): Pedestrians to perturb, ascending.
        seed (int): Master seed.
        mode (int): Mode index.
        sigma (float): Standard deviation, m/s.

    Returns:
        dict[int, np.ndarray]: Velocity offsets keyed by ``ped_id``.
    """
    noise = derive_rng(seed, window.scene_id, mode).normal(0.0, sigma, (len(ped_ids), 2))
    return dict(zip(ped_ids, noise, strict=True))


def _observed_run(window: SceneWindow, track: np.ndarray) -> np.ndarray:
    """Trailing run of observed points ending at the last observed frame."""
    observed = track[: window.obs_len]
    absent = np.flatnonzero(np.isnan(observed[:, 0]))
    return observed[absent[-1] + 1 :] if len(absent) else observed


def _extrapolate(
    window: SceneWindow,
    model: ModelName,
    params: ModelParams,
    pred_len: int,
    jitter: dict[int, np.ndarray] | None,
) -> PredictionSet:
    kalman = params if isinstance(params, KalmanConfig) else KalmanConfig()
    kalman = kalman.model_copy(update={"dt": window.dt})
    tracks = {}
    for ped_id, track in window.tracks().items():
        run = _observed_run(window, track)
        if not len(run):
            continue
        offset = None if jitter is None else jitter[ped_id]
        if len(run) < 2:
            tracks[ped_id] = np.repeat(run[-1:], pred_len, axis=0)
        elif model is ModelName.CV:
            tracks[ped_id] = cv_forecast(run, pred_len, None if offset is None else offset * window.dt)
        else:
            tracks[ped_id] = kalman_forecast(run, kalman, pred_len, offset)
    return to_prediction_set(window, tracks)


def forecast_window(
    window: SceneWindow,
    model: ModelName,
    params: ModelParams = None,
    jitter: dict[int, np.ndarray] | None = None,
    goal_distance: float | None = None,
) -> PredictionSet:
    """One-mode forecast of every pedestrian present at the last observed frame.

    Args:
        window (SceneWindow): Scene window.
        model (ModelName): Forecaster.
        params (ModelParams): Parameters of the forecaster, its defaults when None.
        jitter (dict[int, np.ndarray] | None): Initial-velocity offsets per pedestrian, m/s.
        goal_distance (float | None): Virtual goal distance of the simulators.

    Returns:
        PredictionSet: One mode.
    """
    if model in {ModelName.CV, ModelName.KALMAN}:
        return _extrapolate(window, model, params, window.pred_len, jitter)
    goals = virtual_goals(window, goal_distance)
    if model is ModelName.SF:
        sf_params = params if isinstance(params, SFParams) else SFParams()
        return sf_forecast(window, goals, sf_params, window.pred_len, jitter)
    orca_params = params if isinstance(params, OrcaParams) else OrcaParams()
    return orca_forecast(window, goals, orca_params, window.pred_len, jitter)


def predict_scene(
    window: SceneWindow,
    model: ModelName,
    params: ModelParams = None,
    modes: int = 1,
    seed: int = 0,
    sigma: float | None = None,
    goal_distance: float | None = None,
) -> PredictionSet:
    """Forecast ``modes`` futures; mode 0 is unperturbed, the others start from jittered velocities.

    Args:
        window (SceneWindow): Scene window.
        model (ModelName): Forecaster.
        params (ModelParams): Forecaster parameters.
        modes (int): Number of modes ``k >= 1``.
        seed (int): Master seed of the jitter.
        sigma (float | None): Jitter standard deviation, settings default when None.
        goal_distance (float | None): Virtual goal distance.

    Returns:
        PredictionSet: ``modes`` modes.
    """
    spread = settings.jitter_sigma if sigma is None else sigma
    base = forecast_window(window, model, params, goal_distance=goal_distance)
    ped_ids = sorted(base.modes[0].tracks)
    sets = [base]
    for mode in range(1, modes):
        jitter = mode_jitter(window, ped_ids, seed, mode, spread)
        sets.append(forecast_window(window, model, params, jitter, goal_distance))
    return base.model_copy(update={"modes": tuple(prediction.modes[0] for prediction in sets)})


def predict_dataset(
    dataset: Dataset,
    model: str | ModelName,
    params: ModelParams = None,
    modes: int = 1,
    seed: int = 0,
    obs_len: int | None = None,
    pred_len: int | None = None,
    sigma: float | None = None,
    goal_distance: float | None = None,
    workers: int = 1,
) -> list[PredictionSet]:
    """Forecast every scene of a dataset.

    Args:
        dataset (Dataset): Scenes to forecast.
        model (str | ModelName): Forecaster name.
        params (ModelParams): Forecaster parameters.
        modes (int): Modes per scene.
        seed (int): Master seed of the jitter.
        obs_len (int | None): Observed steps, settings default when None.
        pred_len (int | None): Predicted steps, settings default when None.
        sigma (float | None): Jitter standard deviation.
        goal_distance (float | None): Virtual goal distance.
        workers (int): Processes of the parallel map.

    Returns:
        list[PredictionSet]: Predictions in scene order.
    """
    name = parse_model(model)
    windows = [
        scene_window(dataset, scene, obs_len or settings.obs_len, pred_len or settings.pred_len)
        for scene in dataset.scenes
    ]
    worker = partial(
        predict_scene,
        model=name,
        params=params,
        modes=modes,
        seed=seed,
        sigma=sigma,
        goal_distance=goal_distance,
    )
    predictions = parallel_map(worker, windows, workers)
    logger.info(f"Forecast {len(predictions)} scenes with {name.value}, {modes} modes.")
    return predictions
