"""Commands of the benchmark harness.

Every command is a plain function over domain objects; ``cli`` parses the
command line, reads the inputs and writes what these functions return.

Functions:
    load_dataset: Read and parse a dataset file.
    load_predictions: Read and parse a predictions file against its dataset.
    generate_command: Synthetic dataset as NDJSON.
    categorize_command: Tag a dataset, optionally keeping some main types.
    predict_command: Forecasts as predictions NDJSON.
    evaluate_command: Benchmark report of a prediction file.
    report_command: Report files and scene plots.
    calibrate_command: Grid search of simulator parameters.
    split_dataset: Seeded train/test split by scene.
    grid_command: Interaction grids at the last observed frame of every scene.
"""

from collections.abc import Sequence
from pathlib import Path

import pandas as pd
from loguru import logger

from crowdbench.core.errors import DatasetValidationError, PoolingError, ReportError
from crowdbench.core.ndjson import parse_ndjson, parse_predictions, write_ndjson, write_predictions
from crowdbench.core.schema import Dataset, MainType, PredictionSet
from crowdbench.core.windows import SceneWindow, scene_window
from crowdbench.harness.calibrate import CalibrationResult, calibrate_gridsearch, expand_grid
from crowdbench.harness.plots import plot_scene
from crowdbench.harness.predict import ModelParams, predict_dataset
from crowdbench.services.categorize import categorize_dataset, category_statistics, filter_types
from crowdbench.services.metrics import (
    CollisionConfig,
    KDEConfig,
    aggregate_report,
    render_text,
    score_predictions,
)
from crowdbench.services.orca import OrcaParams
from crowdbench.services.pooling import (
    GridSpec,
    directional_grid,
    frame_poses,
    grids_to_frame,
    occupancy_grid,
)
from crowdbench.services.synthgen import SynthConfig, generate_dataset
from crowdbench.settings import settings
from crowdbench.utils.utils import derive_rng, read_from_file, write_csv, write_to_file


def load_dataset(filename: str, obs_len: int | None = None, pred_len: int | None = None) -> Dataset:
    """Read a dataset file.

    Args:
        filename (str): NDJSON file, ``-`` for stdin.
        obs_len (int | None): Observed steps.
        pred_len (int | None): Predicted steps.

    Returns:
        Dataset: The parsed dataset.
    """
    return parse_ndjson(read_from_file(filename).splitlines(), obs_len=obs_len, pred_len=pred_len)


def load_predictions(filename: str, dataset: Dataset, pred_len: int | None = None) -> list[PredictionSet]:
    """Read a predictions file.

    Args:
        filename (str): Predictions NDJSON file.
        dataset (Dataset): Dataset the predictions refer to.
        pred_len (int | None): Predicted steps.

    Returns:
        list[PredictionSet]: Predictions ordered by scene id.
    """
    return parse_predictions(read_from_file(filename).splitlines(), dataset, pred_len)


def generate_command(config: SynthConfig, params: OrcaParams | None = None, workers: int = 1) -> str:
    """Generate a synthetic dataset.

    Args:
        config (SynthConfig): Generation parameters.
        params (OrcaParams | None): Simulator parameters.
        workers (int): Processes.

    Returns:
        str: NDJSON with a leading manifest line.
    """
    generated = generate_dataset(config, params, workers=workers)
    return write_ndjson(generated.dataset, manifest=generated.manifest)


def categorize_command(
    dataset: Dataset,
    obs_len: int | None = None,
    pred_len: int | None = None,
    keep_types: Sequence[int] | None = None,
    workers: int = 1,
) -> tuple[Dataset, pd.DataFrame]:
    """Tag every scene and optionally keep only some main types.

    Args:
        dataset (Dataset): Dataset to tag.
        obs_len (int | None): Observed steps.
        pred_len (int | None): Predicted steps.
        keep_types (Sequence[int] | None): Main types to keep, all when None.
        workers (int): Processes.

    Returns:
        tuple[Dataset, pd.DataFrame]: Tagged dataset and its category counts.
    """
    tagged = categorize_dataset(
        dataset,
        obs_len or settings.obs_len,
        pred_len or settings.pred_len,
        workers=workers,
    )
    if keep_types:
        tagged = filter_types(tagged, [MainType(kind) for kind in keep_types])
    return tagged, category_statistics(tagged)


def predict_command(
    dataset: Dataset,
    model: str,
    params: ModelParams = None,
    modes: int = 1,
    seed: int = 0,
    obs_len: int | None = None,
    pred_len: int | None = None,
    workers: int = 1,
) -> str:
    """Forecast every scene.

    Args:
        dataset (Dataset): Scenes to forecast.
        model (str): ``cv``, ``kalman``, ``sf`` or ``orca``.
        params (ModelParams): Forecaster parameters.
        modes (int): Modes per scene.
        seed (int): Seed of the mode jitter.
        obs_len (int | None): Observed steps.
        pred_len (int | None): Predicted steps.
        workers (int): Processes.

    Returns:
        str: Predictions NDJSON.
    """
    predictions = predict_dataset(
        dataset,
        model,
        params,
        modes=modes,
        seed=seed,
        obs_len=obs_len,
        pred_len=pred_len,
        workers=workers,
    )
    return write_predictions(predictions)


def _aligned_windows(
    dataset: Dataset,
    predictions: list[PredictionSet],
    obs_len: int,
    pred_len: int,
) -> dict[int, SceneWindow]:
    if not predictions:
        raise ReportError("no predictions to evaluate")
    predicted = {prediction.scene_id for prediction in predictions}
    missing = sorted(scene.scene_id for scene in dataset.scenes if scene.scene_id not in predicted)
    if missing:
        raise ReportError(f"scenes without predictions: {missing}")
    return {scene.scene_id: scene_window(dataset, scene, obs_len, pred_len) for scene in dataset.scenes}


def evaluate_command(
    dataset: Dataset,
    predictions: list[PredictionSet],
    model: str,
    obs_len: int | None = None,
    pred_len: int | None = None,
    collision: CollisionConfig | None = None,
    kde: KDEConfig | None = None,
    topk: int | None = None,
) -> pd.DataFrame:
    """Score predictions and aggregate them per category.

    Args:
        dataset (Dataset): Ground truth, tagged or not.
        predictions (list[PredictionSet]): One prediction per scene.
        model (str): Name of the ``model`` column.
        obs_len (int | None): Observed steps.
        pred_len (int | None): Predicted steps.
        collision (CollisionConfig | None): Collision threshold.
        kde (KDEConfig | None): NLL bandwidth rule.
        topk (int | None): Modes considered by Top-k and NLL, settings default when None.
            Later modes are dropped before scoring.

    Returns:
        pd.DataFrame: The report.

    Raises:
        ReportError: On an empty prediction list or scenes without predictions.
    """
    windows = _aligned_windows(dataset, predictions, obs_len or settings.obs_len, pred_len or settings.pred_len)
    k = topk or settings.topk_default
    dropped = sum(max(prediction.k - k, 0) for prediction in predictions)
    if dropped:
        logger.debug(f"Scoring the first {k} modes per scene, {dropped} modes past them are ignored.")
    truncated = [prediction.model_copy(update={"modes": prediction.modes[:k]}) for prediction in predictions]
    tags = {scene.scene_id: scene.tags for scene in dataset.scenes}
    scores = score_predictions(truncated, windows, tags, collision, kde)
    return aggregate_report(scores, model)


def report_command(
    dataset: Dataset,
    predictions: list[PredictionSet],
    model: str,
    output: str,
    plots: str | None = None,
    obs_len: int | None = None,
    pred_len: int | None = None,
    collision: CollisionConfig | None = None,
    topk: int | None = None,
) -> pd.DataFrame:
    """Write the report as CSV and text, and optionally one SVG per scene.

    Args:
        dataset (Dataset): Ground truth.
        predictions (list[PredictionSet]): One prediction per scene.
        model (str): Model name.
        output (str): CSV path; the text table goes next to it with a ``.txt`` suffix.
        plots (str | None): Directory of the scene plots, none when None.
        obs_len (int | None): Observed steps.
        pred_len (int | None): Predicted steps.
        collision (CollisionConfig | None): Collision threshold.
        topk (int | None): Modes considered by Top-k and NLL.

    Returns:
        pd.DataFrame: The report.
    """
    obs = obs_len or settings.obs_len
    pred = pred_len or settings.pred_len
    report = evaluate_command(dataset, predictions, model, obs, pred, collision, topk=topk)
    write_csv(output, report)
    if output != "-":
        write_to_file(str(Path(output).with_suffix(".txt")), render_text(report))
    if plots is not None:
        windows = _aligned_windows(dataset, predictions, obs, pred)
        for prediction in predictions:
            plot_scene(
                windows[prediction.scene_id],
                prediction,
                Path(plots) / f"scene_{prediction.scene_id}.svg",
                collision,
            )
        logger.info(f"Wrote {len(predictions)} scene plots to {plots}.")
    return report


def calibrate_command(
    dataset: Dataset,
    model: str,
    axes: dict[str, list[float]],
    obs_len: int | None = None,
    pred_len: int | None = None,
    collision: CollisionConfig | None = None,
    workers: int = 1,
) -> CalibrationResult:
    """Calibrate ``sf`` or ``orca`` on the scenes of a dataset.

    Args:
        dataset (Dataset): Training scenes.
        model (str): ``sf`` or ``orca``.
        axes (dict[str, list[float]]): Values per parameter name.
        obs_len (int | None): Observed steps.
        pred_len (int | None): Predicted steps.
        collision (CollisionConfig | None): Collision threshold.
        workers (int): Processes.

    Returns:
        CalibrationResult: Best point and all scores.
    """
    obs = obs_len or settings.obs_len
    pred = pred_len or settings.pred_len
    windows = [scene_window(dataset, scene, obs, pred) for scene in dataset.scenes]
    return calibrate_gridsearch(model, expand_grid(model, axes), windows, collision, workers=workers)


def _subset(dataset: Dataset, scene_ids: set[int]) -> Dataset:
    scenes = tuple(scene for scene in dataset.scenes if scene.scene_id in scene_ids)
    frames = {frame for scene in scenes for frame in scene.frames}
    points = tuple(point for point in dataset.points if point.frame in frames)
    return Dataset(points=points, scenes=scenes, dt=dataset.dt)


def split_dataset(dataset: Dataset, test_fraction: float, seed: int = 0) -> tuple[Dataset, Dataset]:
    """Seeded split of the scenes into train and test parts.

    Each part keeps the points on its own scenes' frames.

    Args:
        dataset (Dataset): Dataset to split.
        test_fraction (float): Share of scenes in the test part, rounded to whole scenes.
        seed (int): Seed of the shuffle.

    Returns:
        tuple[Dataset, Dataset]: Train and test datasets.

    Raises:
        DatasetValidationError: If ``test_fraction`` is outside ``[0, 1]``.
    """
    if not 0.0 <= test_fraction <= 1.0:
        raise DatasetValidationError(f"test fraction must be within [0, 1], got {test_fraction}")
    scene_ids = [scene.scene_id for scene in dataset.scenes]
    shuffled = derive_rng(seed).permutation(len(scene_ids))
    n_test = round(test_fraction * len(scene_ids))
    test_ids = {scene_ids[index] for index in shuffled[:n_test]}
    train_ids = set(scene_ids) - test_ids
    logger.info(f"Split {len(scene_ids)} scenes into {len(train_ids)} train and {len(test_ids)} test scenes.")
    return _subset(dataset, train_ids), _subset(dataset, test_ids)


def grid_command(
    dataset: Dataset,
    spec: GridSpec | None = None,
    kind: str = "occupancy",
    obs_len: int | None = None,
    pred_len: int | None = None,
) -> pd.DataFrame:
    """Occupancy or directional grids of every scene at its last observed frame.

    Args:
        dataset (Dataset): Scenes.
        spec (GridSpec | None): Grid geometry.
        kind (str): ``occupancy`` or ``directional``.
        obs_len (int | None): Observed steps.
        pred_len (int | None): Predicted steps.

    Returns:
        pd.DataFrame: Long-format grid table.

    Raises:
        PoolingError: For an unknown grid kind.
    """
    if kind not in {"occupancy", "directional"}:
        raise PoolingError(f"unknown grid kind {kind!r}")
    grids = {}
    for scene in dataset.scenes:
        window = scene_window(dataset, scene, obs_len or settings.obs_len, pred_len or settings.pred_len)
        primary, neighbours = frame_poses(window, window.last_obs)
        positions = [pose.position for pose in neighbours.values()]
        if kind == "occupancy":
            grids[scene.scene_id] = occupancy_grid(primary, positions, spec)
        else:
            velocities = [pose.velocity for pose in neighbours.values()]
            grids[scene.scene_id] = directional_grid(primary, positions, velocities, spec)
    return grids_to_frame(grids)
