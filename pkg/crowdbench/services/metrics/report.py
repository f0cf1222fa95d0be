"""Per-scene scores and the per-category benchmark report.

Classes:
    SceneScore: Every metric of one scene.

Functions:
    score_predictions: Score every prediction against its ground-truth window.
    aggregate_report: Overall and per-category means as a DataFrame.
    render_text: Fixed-width text rendering of a report.

Dependencies:
    - numpy: Metric arithmetic.
    - pandas: Report tables.
"""

from typing import NamedTuple

import numpy as np
import pandas as pd
from loguru import logger

from crowdbench.core.errors import ReportError
from crowdbench.core.schema import CategoryTags, MainType, PredictionSet, SubTag
from crowdbench.core.windows import SceneWindow
from crowdbench.services.metrics.collisions import col_i, col_ii
from crowdbench.services.metrics.config import CollisionConfig, KDEConfig
from crowdbench.services.metrics.displacement import displacement_errors, topk_displacement
from crowdbench.services.metrics.multimodal import avg_nll

REPORT_COLUMNS = ["model", "category", "N", "ADE", "FDE", "Col-I%", "Col-II%", "Top-k ADE", "Top-k FDE", "NLL"]
MAIN_NAMES = {
    MainType.STATIC: "I",
    MainType.LINEAR: "II",
    MainType.INTERACTING: "III",
    MainType.NON_INTERACTING: "IV",
}
SUB_NAMES = {SubTag.LF: "LF", SubTag.CA: "CA", SubTag.GRP: "Grp", SubTag.OTHERS: "Others"}
CATEGORY_ORDER = ["overall", "I", "II", "III", "LF", "CA", "Grp", "Others", "IV"]


class SceneScore(NamedTuple):
    """Metrics of one scene.

    Attributes:
        scene_id (int): Scene identifier.
        tags (CategoryTags | None): Scene categories, None when untagged.
        ade (float): Mode 0 average displacement, m.
        fde (float): Mode 0 final displacement, m.
        topk_ade (float): Best ADE over the modes, m.
        topk_fde (float): Best FDE over the modes, m.
        nll (float): KDE average NLL, nats.
        col_i (bool | None): Prediction collision, None outside the denominator.
        col_ii (bool | None): Ground-truth collision, None outside the denominator.
    """

    scene_id: int
    tags: CategoryTags | None
    ade: float
    fde: float
    topk_ade: float
    topk_fde: float
    nll: float
    col_i: bool | None
    col_ii: bool | None

    def categories(self) -> list[str]:
        """Report rows the scene contributes to besides ``overall``."""
        if self.tags is None:
            return []
        return [MAIN_NAMES[self.tags.main_type], *(SUB_NAMES[subtag] for subtag in self.tags.subtags)]


def score_predictions(
    predictions: list[PredictionSet],
    windows: dict[int, SceneWindow],
    tags: dict[int, CategoryTags | None] | None = None,
    collision: CollisionConfig | None = None,
    kde: KDEConfig | None = None,
) -> list[SceneScore]:
    """Score every prediction.

    Args:
        predictions (list[PredictionSet]): Predictions, one per scene.
        windows (dict[int, SceneWindow]): Ground-truth windows keyed by scene id.
        tags (dict[int, CategoryTags | None] | None): Scene categories keyed by scene id.
        collision (CollisionConfig | None): Collision threshold and mode.
        kde (KDEConfig | None): NLL bandwidth rule.

    Returns:
        list[SceneScore]: Scores in prediction order.

    Raises:
        ReportError: If a prediction has no ground-truth window.
    """
    missing = sorted(prediction.scene_id for prediction in predictions if prediction.scene_id not in windows)
    if missing:
        raise ReportError(f"no ground truth for scenes {missing}")
    tags = tags or {}
    prediction_collisions = col_i(predictions, collision, windows)
    truth_collisions = col_ii(predictions, windows, collision)
    scores = []
    for prediction in predictions:
        window = windows[prediction.scene_id]
        truth = window.primary[window.obs_len :]
        ade, fde = displacement_errors(prediction.primary(0), truth)
        modes = prediction.primary_modes()
        topk_ade, topk_fde = topk_displacement(modes, truth)
        scores.append(
            SceneScore(
                scene_id=prediction.scene_id,
                tags=tags.get(prediction.scene_id),
                ade=ade,
                fde=fde,
                topk_ade=topk_ade,
                topk_fde=topk_fde,
                nll=avg_nll(modes, truth, kde),
                col_i=prediction_collisions.flags[prediction.scene_id],
                col_ii=truth_collisions.flags[prediction.scene_id],
            ),
        )
    logger.info(f"Scored {len(scores)} scenes.")
    return scores


def _percent(flags: list[bool | None]) -> float:
    eligible = [flag for flag in flags if flag is not None]
    return round(100.0 * sum(eligible) / len(eligible), 1) if eligible else 0.0


def _row(model: str, category: str, scores: list[SceneScore]) -> dict[str, object]:
    return {
        "model": model,
        "category": category,
        "N": len(scores),
        "ADE": float(np.mean([score.ade for score in scores])),
        "FDE": float(np.mean([score.fde for score in scores])),
        "Col-I%": _percent([score.col_i for score in scores]),
        "Col-II%": _percent([score.col_ii for score in scores]),
        "Top-k ADE": float(np.mean([score.topk_ade for score in scores])),
        "Top-k FDE": float(np.mean([score.topk_fde for score in scores])),
        "NLL": float(np.mean([score.nll for score in scores])),
    }


def aggregate_report(scores: list[SceneScore], model: str) -> pd.DataFrame:
    """Metric means overall and per main type and sub-tag.

    Categories without scenes are left out. Collision percentages have one decimal;
    displacement and likelihood means are not rounded.

    Args:
        scores (list[SceneScore]): Scene scores.
        model (str): Model name of the ``model`` column.

    Returns:
        pd.DataFrame: One row per category with the report columns.

    Raises:
        ReportError: If there is nothing to report.
    """
    if not scores:
        raise ReportError("no scored scenes to report")
    groups: dict[str, list[SceneScore]] = {"overall": list(scores)}
    for score in scores:
        for category in score.categories():
            groups.setdefault(category, []).append(score)
    rows = [_row(model, category, groups[category]) for category in CATEGORY_ORDER if category in groups]
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def render_text(report: pd.DataFrame) -> str:
    """Fixed-width table with two decimals.

    Args:
        report (pd.DataFrame): Output of ``aggregate_report``.

    Returns:
        str: The table followed by a newline.
    """
    return report.to_string(index=False, float_format=lambda value: f"{value:.2f}") + "\n"
