"""NDJSON persistence of datasets and predictions.

One record per line::

    {"track": {"f": 0, "p": 1, "x": 1.23, "y": -0.5}}
    {"scene": {"id": 0, "p": 1, "s": 0, "e": 20, "fps": 2.5, "tag": [3, [1]]}}
    {"pred": {"scene": 0, "mode": 0, "p": 1, "f": 9, "x": 1.2, "y": 0.4}}

Writing is deterministic: scenes sorted by id, tracks by ``(ped_id, frame)``,
coordinates rounded half-even to a fixed number of decimals.

Classes:
    ParseResult: Parsed dataset plus the number of skipped records.

Functions:
    load_ndjson: Parse lines into a ParseResult.
    parse_ndjson: Parse lines into a Dataset.
    write_ndjson: Serialize a Dataset.
    write_predictions: Serialize PredictionSets.
    parse_predictions: Parse and validate predictions against their dataset.
"""

from collections.abc import Iterable
from typing import Any, NamedTuple

import ujson
from loguru import logger
from pydantic import ValidationError

from crowdbench.core.errors import DatasetValidationError, NDJSONParseError
from crowdbench.core.schema import CategoryTags, Dataset, ModePrediction, PredictionSet, SceneRecord, TrackPoint
from crowdbench.settings import settings


class ParseResult(NamedTuple):
    """Result of parsing a dataset stream.

    Attributes:
        dataset (Dataset): The parsed dataset.
        skipped (int): Records of unknown kind that were ignored.
    """

    dataset: Dataset
    skipped: int


def _coord(value: float, precision: int) -> float:
    # + 0.0 folds -0.0 into 0.0
    return round(value, precision) + 0.0


def _decode(line: str, line_number: int) -> dict[str, Any]:
    try:
        record = ujson.loads(line)
    except ValueError as e:
        raise NDJSONParseError(line_number, f"invalid JSON ({e})") from e
    if not isinstance(record, dict) or len(record) != 1:
        raise NDJSONParseError(line_number, "expected an object with exactly one record kind")
    return record


def load_ndjson(
    lines: Iterable[str],
    obs_len: int | None = None,
    pred_len: int | None = None,
    dt: float | None = None,
) -> ParseResult:
    """Parse a dataset stream.

    Args:
        lines (Iterable[str]): NDJSON lines; blank lines are ignored.
        obs_len (int | None): Observed steps per scene, settings default when None.
        pred_len (int | None): Predicted steps per scene, settings default when None.
        dt (float | None): Sampled step used when the stream holds no scene.

    Returns:
        ParseResult: The dataset and the count of skipped records.

    Raises:
        NDJSONParseError: On a malformed line.
        DatasetValidationError: On duplicate points, incomplete primaries or inconsistent scene rates.
    """
    seq_len = (obs_len or settings.obs_len) + (pred_len or settings.pred_len)
    points: list[TrackPoint] = []
    scenes: list[SceneRecord] = []
    rates: set[float] = set()
    skipped = 0
    for line_number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        record = _decode(line, line_number)
        kind, body = next(iter(record.items()))
        try:
            if kind == "track":
                points.append(TrackPoint(frame=body["f"], ped_id=body["p"], x=body["x"], y=body["y"]))
            elif kind == "scene":
                span = body["e"] - body["s"]
                if span <= 0 or span % (seq_len - 1):
                    raise NDJSONParseError(line_number, f"scene span {span} is not a multiple of {seq_len - 1}")
                tag = body.get("tag")
                scenes.append(
                    SceneRecord(
                        scene_id=body["id"],
                        primary_ped=body["p"],
                        start_frame=body["s"],
                        end_frame=body["e"],
                        frame_skip=span // (seq_len - 1),
                        fps=body["fps"],
                        tags=CategoryTags.from_code(tag) if tag is not None else None,
                    ),
                )
                rates.add(float(body["fps"]))
            else:
                skipped += 1
        except (KeyError, TypeError, ValueError) as e:
            raise NDJSONParseError(line_number, f"bad {kind} record ({e})") from e
    if skipped:
        logger.warning(f"Skipped {skipped} records of unknown kind.")
    if len(rates) > 1:
        raise DatasetValidationError(f"scenes disagree on fps: {sorted(rates)}")
    sample_dt = 1.0 / rates.pop() if rates else (dt or settings.dt)
    dataset = Dataset(points=tuple(points), scenes=tuple(scenes), dt=sample_dt)
    logger.debug(f"Parsed {len(dataset.points)} points and {len(dataset.scenes)} scenes.")
    return ParseResult(dataset=dataset, skipped=skipped)


def parse_ndjson(
    lines: Iterable[str],
    obs_len: int | None = None,
    pred_len: int | None = None,
    dt: float | None = None,
) -> Dataset:
    """Parse a dataset stream, see ``load_ndjson``.

    Args:
        lines (Iterable[str]): NDJSON lines.
        obs_len (int | None): Observed steps per scene.
        pred_len (int | None): Predicted steps per scene.
        dt (float | None): Sampled step used when the stream holds no scene.

    Returns:
        Dataset: The parsed dataset.
    """
    return load_ndjson(lines, obs_len=obs_len, pred_len=pred_len, dt=dt).dataset


def write_ndjson(
    dataset: Dataset,
    precision: int | None = None,
    manifest: dict[str, Any] | None = None,
) -> str:
    """Serialize a dataset.

    Args:
        dataset (Dataset): Dataset to write.
        precision (int | None): Decimals per coordinate, settings default when None.
        manifest (dict[str, Any] | None): Optional first ``manifest`` record.

    Returns:
        str: NDJSON text, empty for an empty dataset without manifest.
    """
    decimals = settings.precision if precision is None else precision
    fps = 1.0 / dataset.dt
    lines = []
    if manifest is not None:
        lines.append(ujson.dumps({"manifest": manifest}))
    for scene in sorted(dataset.scenes, key=lambda record: record.scene_id):
        body: dict[str, Any] = {
            "id": scene.scene_id,
            "p": scene.primary_ped,
            "s": scene.start_frame,
            "e": scene.end_frame,
            "fps": fps,
        }
        if scene.tags is not None:
            body["tag"] = scene.tags.to_code()
        lines.append(ujson.dumps({"scene": body}))
    for point in dataset.points:
        body = {"f": point.frame, "p": point.ped_id, "x": _coord(point.x, decimals), "y": _coord(point.y, decimals)}
        lines.append(ujson.dumps({"track": body}))
    return "".join(f"{line}\n" for line in lines)


def write_predictions(predictions: Iterable[PredictionSet], precision: int | None = None) -> str:
    """Serialize predictions, ordered by scene, mode, pedestrian and frame.

    Args:
        predictions (Iterable[PredictionSet]): Predictions to write.
        precision (int | None): Decimals per coordinate, settings default when None.

    Returns:
        str: NDJSON text.
    """
    decimals = settings.precision if precision is None else precision
    lines = []
    for prediction in sorted(predictions, key=lambda item: item.scene_id):
        for mode_index, mode in enumerate(prediction.modes):
            for ped_id in sorted(mode.tracks):
                for frame, (x, y) in zip(prediction.frames, mode.tracks[ped_id], strict=True):
                    body = {
                        "scene": prediction.scene_id,
                        "mode": mode_index,
                        "p": ped_id,
                        "f": frame,
                        "x": _coord(x, decimals),
                        "y": _coord(y, decimals),
                    }
                    lines.append(ujson.dumps({"pred": body}))
    return "".join(f"{line}\n" for line in lines)


def parse_predictions(lines: Iterable[str], dataset: Dataset, pred_len: int | None = None) -> list[PredictionSet]:
    """Parse predictions and validate them against their dataset.

    Args:
        lines (Iterable[str]): NDJSON ``pred`` lines.
        dataset (Dataset): Dataset the predictions refer to.
        pred_len (int | None): Predicted steps, settings default when None.

    Returns:
        list[PredictionSet]: One set per predicted scene, ordered by scene id.

    Raises:
        NDJSONParseError: On a malformed line.
        DatasetValidationError: On unknown scenes, missing modes or tracks off the prediction frames.
    """
    horizon = pred_len or settings.pred_len
    grouped: dict[int, dict[int, dict[int, dict[int, tuple[float, float]]]]] = {}
    for line_number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        record = _decode(line, line_number)
        try:
            body = record["pred"]
            scene_modes = grouped.setdefault(int(body["scene"]), {})
            track = scene_modes.setdefault(int(body["mode"]), {}).setdefault(int(body["p"]), {})
            track[int(body["f"])] = (float(body["x"]), float(body["y"]))
        except (KeyError, TypeError, ValueError) as e:
            raise NDJSONParseError(line_number, f"bad pred record ({e})") from e
    scenes = {scene.scene_id: scene for scene in dataset.scenes}
    result = []
    for scene_id in sorted(grouped):
        if scene_id not in scenes:
            raise DatasetValidationError(f"prediction for unknown scene {scene_id}")
        scene = scenes[scene_id]
        frames = tuple(scene.frames)[-horizon:]
        modes = grouped[scene_id]
        if sorted(modes) != list(range(len(modes))):
            raise DatasetValidationError(f"scene {scene_id}: modes {sorted(modes)} are not 0..k-1")
        mode_predictions = []
        for mode_index in range(len(modes)):
            tracks = {}
            for ped_id, by_frame in modes[mode_index].items():
                if tuple(sorted(by_frame)) != frames:
                    raise DatasetValidationError(
                        f"scene {scene_id} mode {mode_index} ped {ped_id}: frames do not match the prediction window",
                    )
                tracks[ped_id] = tuple(by_frame[frame] for frame in frames)
            mode_predictions.append(ModePrediction(tracks=tracks))
        try:
            result.append(
                PredictionSet(
                    scene_id=scene_id,
                    primary_ped=scene.primary_ped,
                    frames=frames,
                    modes=tuple(mode_predictions),
                ),
            )
        except ValidationError as e:
            raise DatasetValidationError(str(e)) from e
    return result
