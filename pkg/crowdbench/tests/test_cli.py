from pathlib import Path

import pytest
import ujson

from crowdbench.harness.cli import build_parser, run


@pytest.fixture
def dataset_file(dataset_lines: list[str], tmp_path: Path) -> Path:
    """The two-walker dataset on disk."""
    path = tmp_path / "scenes.ndjson"
    path.write_text("\n".join(dataset_lines) + "\n", encoding="utf-8")
    return path


def test_subcommand_is_required() -> None:
    """Running without a subcommand is a usage error."""
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_generate_writes_a_manifest(tmp_path: Path) -> None:
    """The first line of a generated dataset is its manifest."""
    output = tmp_path / "synth.ndjson"
    status = run(
        ["generate", "--output", str(output), "--scenes", "1", "--max-scenarios", "1", "--k-perturb", "2"],
    )
    assert status == 0
    first = ujson.loads(output.read_text(encoding="utf-8").splitlines()[0])
    assert set(first) == {"manifest"}
    assert first["manifest"]["scenes"] <= 1


def test_categorize_predict_evaluate(dataset_file: Path, tmp_path: Path) -> None:
    """The full pipeline runs on a small dataset."""
    tagged = tmp_path / "tagged.ndjson"
    predictions = tmp_path / "pred.ndjson"
    report = tmp_path / "report.txt"
    assert run(["categorize", "--input", str(dataset_file), "--output", str(tagged)]) == 0
    assert '"scene"' in tagged.read_text(encoding="utf-8")
    assert run(["predict", "--input", str(tagged), "--output", str(predictions), "--model", "cv", "--modes", "2"]) == 0
    assert predictions.read_text(encoding="utf-8").count('"pred"') > 0
    evaluate = ["evaluate", "--input", str(tagged), "--predictions", str(predictions), "--model", "cv"]
    assert run([*evaluate, "--output", str(report)]) == 0
    text = report.read_text(encoding="utf-8")
    assert "overall" in text
    assert "Top-k ADE" in text


def test_stats_tags_untagged_input(dataset_file: Path, tmp_path: Path) -> None:
    """Counts are printed even for a dataset without tags."""
    output = tmp_path / "stats.txt"
    assert run(["stats", "--input", str(dataset_file), "--output", str(output)]) == 0
    assert "Total" in output.read_text(encoding="utf-8")


def test_report_with_plots(dataset_file: Path, tmp_path: Path) -> None:
    """The report is written as CSV and text, with one plot per scene."""
    predictions = tmp_path / "pred.ndjson"
    csv = tmp_path / "out" / "report.csv"
    assert run(["predict", "--input", str(dataset_file), "--output", str(predictions), "--model", "kalman"]) == 0
    status = run(
        [
            "report",
            "--input",
            str(dataset_file),
            "--predictions",
            str(predictions),
            "--output",
            str(csv),
            "--plots",
            str(tmp_path / "plots"),
        ],
    )
    assert status == 0
    assert csv.read_text(encoding="utf-8").startswith("model,category,N,ADE")
    assert csv.with_suffix(".txt").exists()
    assert (tmp_path / "plots" / "scene_0.svg").exists()


def test_predict_with_parameter_file(dataset_file: Path, tmp_path: Path) -> None:
    """Simulator parameters are read from JSON."""
    params = tmp_path / "sf.json"
    params.write_text('{"A": 1.0, "B": 0.5}', encoding="utf-8")
    output = tmp_path / "pred.ndjson"
    arguments = ["predict", "--input", str(dataset_file), "--output", str(output), "--model", "sf"]
    arguments += ["--params", str(params)]
    assert run(arguments) == 0
    params.write_text('{"B": -1.0}', encoding="utf-8")
    assert run(arguments) == 1


def test_calibrate_writes_best_parameters(dataset_file: Path, tmp_path: Path) -> None:
    """The chosen grid point is written as JSON."""
    grid = tmp_path / "grid.json"
    grid.write_text('{"A": [1.0, 2.0]}', encoding="utf-8")
    output = tmp_path / "best.json"
    arguments = ["calibrate", "--input", str(dataset_file), "--model", "sf", "--grid", str(grid)]
    arguments += ["--output", str(output)]
    assert run(arguments) == 0
    assert ujson.loads(output.read_text(encoding="utf-8"))["A"] in {1.0, 2.0}


def test_split_and_grid(dataset_file: Path, tmp_path: Path) -> None:
    """Split files and grid CSV are written."""
    train, test = tmp_path / "train.ndjson", tmp_path / "test.ndjson"
    arguments = ["split", "--input", str(dataset_file), "--train", str(train), "--test", str(test)]
    assert run([*arguments, "--test-fraction", "1.0"]) == 0
    assert '"scene"' in test.read_text(encoding="utf-8")
    assert '"scene"' not in train.read_text(encoding="utf-8")
    grid = tmp_path / "grid.csv"
    assert run(["grid", "--input", str(dataset_file), "--output", str(grid), "--cells", "4"]) == 0
    lines = grid.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "scene,i,j,channel,value"
    assert len(lines) == 1 + 4 * 4


@pytest.mark.parametrize(
    "arguments",
    [
        ["stats", "--input", "missing.ndjson"],
        ["predict", "--input", "{dataset}", "--model", "lstm"],
        ["calibrate", "--input", "{dataset}", "--model", "sf", "--grid", "missing.json"],
    ],
)
def test_failures_exit_with_one(arguments: list[str], dataset_file: Path, tmp_path: Path) -> None:
    """Missing files and unknown models are reported with status 1."""
    missing = str(tmp_path / "nowhere")
    resolved = [argument.replace("{dataset}", str(dataset_file)).replace("missing", missing) for argument in arguments]
    assert run(resolved) == 1


def test_malformed_input_exits_with_one(tmp_path: Path) -> None:
    """Malformed NDJSON is reported with status 1."""
    broken = tmp_path / "broken.ndjson"
    broken.write_text('{"track": {"f": 0, "p": 1}}\nnot json\n', encoding="utf-8")
    assert run(["categorize", "--input", str(broken)]) == 1
