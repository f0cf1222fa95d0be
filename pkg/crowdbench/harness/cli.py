"""Command-line interface of the benchmark.

Subcommands: generate, categorize, stats, predict, evaluate, report, calibrate,
split and grid. Defaults come from ``crowdbench.settings``; flags override them.

Functions:
    build_parser: The argument parser.
    run: Parse arguments and execute a subcommand.
"""

import argparse
from collections.abc import Callable, Sequence
from typing import Any

import ujson
from loguru import logger
from pydantic import ValidationError

from crowdbench.core.errors import CalibrationError, CrowdBenchError, ForecastError
from crowdbench.core.ndjson import write_ndjson
from crowdbench.harness import commands
from crowdbench.harness.predict import ModelName, ModelParams, parse_model
from crowdbench.services.categorize import category_statistics
from crowdbench.services.forecasters import KalmanConfig
from crowdbench.services.metrics import CollisionConfig, render_text
from crowdbench.services.orca import OrcaParams
from crowdbench.services.pooling import GridFrame, GridSpec
from crowdbench.services.social_force import SFParams
from crowdbench.services.synthgen import SynthConfig
from crowdbench.settings import settings
from crowdbench.utils.utils import read_from_file, write_csv, write_to_file


def _read_json(filename: str, error: type[CrowdBenchError]) -> dict[str, Any]:
    try:
        values = ujson.loads(read_from_file(filename))
    except ValueError as e:
        raise error(f"{filename} is not valid JSON ({e})") from e
    if not isinstance(values, dict):
        raise error(f"{filename} must hold a JSON object")
    return values


def _load_params(model: str, filename: str | None) -> ModelParams:
    if filename is None:
        return None
    values = _read_json(filename, ForecastError)
    name = parse_model(model)
    try:
        if name is ModelName.SF:
            return SFParams(**values)
        if name is ModelName.ORCA:
            return OrcaParams(**values)
        return KalmanConfig(**values)
    except ValidationError as e:
        raise ForecastError(f"invalid parameters in {filename}: {e}") from e


def _collision(args: argparse.Namespace) -> CollisionConfig:
    return CollisionConfig(threshold=args.collision_threshold)


def _generate(args: argparse.Namespace) -> None:
    config = SynthConfig(
        seed=args.seed,
        scenes_target=args.scenes,
        max_scenarios=args.max_scenarios,
        noise_thresh=args.noise,
        k_perturb=args.k_perturb,
        ade_reject=args.ade_reject,
        dt=settings.dt,
        obs_len=args.obs,
        pred_len=args.pred,
    )
    write_to_file(args.output, commands.generate_command(config, workers=args.workers))


def _categorize(args: argparse.Namespace) -> None:
    dataset = commands.load_dataset(args.input, args.obs, args.pred)
    tagged, statistics = commands.categorize_command(dataset, args.obs, args.pred, args.filter_types, args.workers)
    write_to_file(args.output, write_ndjson(tagged))
    logger.info(f"Category counts:\n{statistics.to_string(index=False)}")


def _stats(args: argparse.Namespace) -> None:
    dataset = commands.load_dataset(args.input, args.obs, args.pred)
    if any(scene.tags is None for scene in dataset.scenes):
        dataset, _ = commands.categorize_command(dataset, args.obs, args.pred, workers=args.workers)
    write_to_file(args.output, category_statistics(dataset).to_string(index=False) + "\n")


def _predict(args: argparse.Namespace) -> None:
    dataset = commands.load_dataset(args.input, args.obs, args.pred)
    text = commands.predict_command(
        dataset,
        args.model,
        _load_params(args.model, args.params),
        modes=args.modes,
        seed=args.seed,
        obs_len=args.obs,
        pred_len=args.pred,
        workers=args.workers,
    )
    write_to_file(args.output, text)


def _evaluate(args: argparse.Namespace) -> None:
    dataset = commands.load_dataset(args.input, args.obs, args.pred)
    predictions = commands.load_predictions(args.predictions, dataset, args.pred)
    report = commands.evaluate_command(
        dataset,
        predictions,
        args.model,
        args.obs,
        args.pred,
        _collision(args),
        topk=args.topk,
    )
    write_to_file(args.output, render_text(report))


def _report(args: argparse.Namespace) -> None:
    dataset = commands.load_dataset(args.input, args.obs, args.pred)
    predictions = commands.load_predictions(args.predictions, dataset, args.pred)
    commands.report_command(
        dataset,
        predictions,
        args.model,
        args.output,
        args.plots,
        args.obs,
        args.pred,
        _collision(args),
        topk=args.topk,
    )


def _calibrate(args: argparse.Namespace) -> None:
    dataset = commands.load_dataset(args.input, args.obs, args.pred)
    axes = _read_json(args.grid, CalibrationError)
    result = commands.calibrate_command(
        dataset,
        args.model,
        axes,
        args.obs,
        args.pred,
        _collision(args),
        workers=args.workers,
    )
    write_to_file(args.output, ujson.dumps(result.best.params.model_dump(mode="json"), sort_keys=True) + "\n")


def _split(args: argparse.Namespace) -> None:
    dataset = commands.load_dataset(args.input, args.obs, args.pred)
    train, test = commands.split_dataset(dataset, args.test_fraction, args.seed)
    write_to_file(args.train, write_ndjson(train))
    write_to_file(args.test, write_ndjson(test))


def _grid(args: argparse.Namespace) -> None:
    dataset = commands.load_dataset(args.input, args.obs, args.pred)
    spec = GridSpec(cells_per_side=args.cells, resolution=args.resolution, frame=GridFrame(args.frame))
    write_csv(args.output, commands.grid_command(dataset, spec, args.kind, args.obs, args.pred))


def _add_window_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--obs", type=int, default=settings.obs_len, help="observed steps per scene")
    parser.add_argument("--pred", type=int, default=settings.pred_len, help="predicted steps per scene")


def _add_workers(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--workers", type=int, default=settings.workers_count, help="worker processes")


def _add_evaluation_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", required=True, help="ground-truth dataset NDJSON")
    parser.add_argument("--predictions", required=True, help="predictions NDJSON")
    parser.add_argument("--model", default="model", help="model name in the report")
    parser.add_argument("--collision-threshold", type=float, default=settings.collision_threshold)
    parser.add_argument(
        "--topk",
        type=int,
        default=settings.topk_default,
        help="modes used by Top-k and NLL, later modes are ignored",
    )
    _add_window_flags(parser)


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser.

    Returns:
        argparse.ArgumentParser: Parser with one subparser per command.
    """
    parser = argparse.ArgumentParser(prog="crowdbench", description="Trajectory forecasting benchmark.")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler: Callable[[argparse.Namespace], None], text: str) -> argparse.ArgumentParser:
        subparser = subparsers.add_parser(name, help=text, description=text)
        subparser.set_defaults(handler=handler)
        return subparser

    generate = add("generate", _generate, "generate synthetic interacting scenes")
    generate.add_argument("--output", default="-")
    generate.add_argument("--seed", type=int, default=settings.seed)
    generate.add_argument("--scenes", type=int, default=200, help="scenes to emit")
    generate.add_argument("--max-scenarios", type=int, default=10_000)
    generate.add_argument("--noise", type=float, default=0.01, help="sensitivity filter noise, m")
    generate.add_argument("--k-perturb", type=int, default=20)
    generate.add_argument("--ade-reject", type=float, default=0.3)
    _add_window_flags(generate)
    _add_workers(generate)

    categorize = add("categorize", _categorize, "tag scenes by interaction type")
    categorize.add_argument("--input", required=True)
    categorize.add_argument("--output", default="-")
    categorize.add_argument("--filter-types", type=int, nargs="+", choices=[1, 2, 3, 4], help="main types to keep")
    _add_window_flags(categorize)
    _add_workers(categorize)

    stats = add("stats", _stats, "print scene counts per category, tagging untagged datasets first")
    stats.add_argument("--input", required=True)
    stats.add_argument("--output", default="-")
    _add_window_flags(stats)
    _add_workers(stats)

    predict = add("predict", _predict, "forecast every scene")
    predict.add_argument("--input", required=True)
    predict.add_argument("--output", default="-")
    predict.add_argument("--model", required=True, help="cv, kalman, sf or orca")
    predict.add_argument("--params", help="JSON file of model parameters")
    predict.add_argument("--seed", type=int, default=settings.seed)
    predict.add_argument("--modes", type=int, default=settings.modes)
    _add_window_flags(predict)
    _add_workers(predict)

    evaluate = add("evaluate", _evaluate, "print the benchmark report")
    evaluate.add_argument("--output", default="-")
    _add_evaluation_flags(evaluate)

    report = add("report", _report, "write the report as CSV and text, with optional scene plots")
    report.add_argument("--output", required=True, help="CSV file; the text table is written next to it")
    report.add_argument("--plots", help="directory of per-scene SVG plots")
    _add_evaluation_flags(report)

    calibrate = add("calibrate", _calibrate, "grid-search sf or orca parameters")
    calibrate.add_argument("--input", required=True)
    calibrate.add_argument("--output", default="-", help="JSON file of the best parameters")
    calibrate.add_argument("--model", required=True, choices=["sf", "orca"])
    calibrate.add_argument("--grid", required=True, help="JSON object mapping parameter names to value lists")
    calibrate.add_argument("--collision-threshold", type=float, default=settings.collision_threshold)
    _add_window_flags(calibrate)
    _add_workers(calibrate)

    split = add("split", _split, "split scenes into train and test files")
    split.add_argument("--input", required=True)
    split.add_argument("--train", required=True)
    split.add_argument("--test", required=True)
    split.add_argument("--test-fraction", type=float, default=0.2)
    split.add_argument("--seed", type=int, default=settings.seed)
    _add_window_flags(split)

    grid = add("grid", _grid, "dump interaction grids at the last observed frame as CSV")
    grid.add_argument("--input", required=True)
    grid.add_argument("--output", default="-")
    grid.add_argument("--kind", choices=["occupancy", "directional"], default="occupancy")
    grid.add_argument("--cells", type=int, default=16)
    grid.add_argument("--resolution", type=float, default=0.6)
    grid.add_argument("--frame", choices=[frame.value for frame in GridFrame], default=GridFrame.WORLD.value)
    _add_window_flags(grid)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    """Run one command.

    Args:
        argv (Sequence[str] | None): Arguments without the program name; ``sys.argv`` when None.

    Returns:
        int: 0 on success, 1 on a benchmark or file error.
    """
    args = build_parser().parse_args(argv)
    logger.debug(f"Running {args.command}.")
    try:
        args.handler(args)
    except (CrowdBenchError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        return 1
    except ValidationError as e:
        logger.error(f"{args.command} failed, invalid configuration: {e}")
        return 1
    return 0
