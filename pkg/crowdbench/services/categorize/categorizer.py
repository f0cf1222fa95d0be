"""Trajectory categorization hierarchy: static, linear, interacting, non-interacting.

Functions:
    categorize_scene: Tags of one window.
    categorize_dataset: Tag every scene of a dataset.
    filter_types: Keep scenes of selected main types.
    category_statistics: Per-category scene counts.
"""

from functools import partial

import pandas as pd
from loguru import logger

from crowdbench.core.schema import CategoryTags, Dataset, MainType, SubTag
from crowdbench.core.windows import SceneWindow, scene_window
from crowdbench.services.categorize.config import CategoryThresholds
from crowdbench.services.categorize.rules import tag_interactions, tag_linear, tag_static
from crowdbench.services.forecasters import KalmanConfig
from crowdbench.utils.utils import parallel_map


def categorize_scene(
    window: SceneWindow,
    thresholds: CategoryThresholds | None = None,
    kalman: KalmanConfig | None = None,
) -> CategoryTags:
    """Categorize a window: static, else linear, else interacting, else non-interacting.

    Args:
        window (SceneWindow): Scene window.
        thresholds (CategoryThresholds | None): Rule thresholds, defaults when None.
        kalman (KalmanConfig | None): Filter for the linearity test, defaults when None.

    Returns:
        CategoryTags: The scene's tags.
    """
    thresholds = thresholds or CategoryThresholds()
    if tag_static(window, thresholds):
        return CategoryTags(main_type=MainType.STATIC)
    if tag_linear(window, kalman or KalmanConfig(dt=window.dt), thresholds):
        return CategoryTags(main_type=MainType.LINEAR)
    subtags = tag_interactions(window, thresholds)
    if subtags:
        return CategoryTags(main_type=MainType.INTERACTING, subtags=tuple(subtags))
    return CategoryTags(main_type=MainType.NON_INTERACTING)


def categorize_dataset(
    dataset: Dataset,
    obs_len: int,
    pred_len: int,
    thresholds: CategoryThresholds | None = None,
    kalman: KalmanConfig | None = None,
    workers: int = 1,
) -> Dataset:
    """Tag every scene of a dataset.

    Args:
        dataset (Dataset): Dataset to categorize.
        obs_len (int): Observed steps.
        pred_len (int): Predicted steps.
        thresholds (CategoryThresholds | None): Rule thresholds.
        kalman (KalmanConfig | None): Filter for the linearity test.
        workers (int): Processes of the parallel map.

    Returns:
        Dataset: The same points with tagged scenes.
    """
    windows = [scene_window(dataset, scene, obs_len, pred_len) for scene in dataset.scenes]
    tags = parallel_map(partial(categorize_scene, thresholds=thresholds, kalman=kalman), windows, workers)
    scenes = tuple(scene.model_copy(update={"tags": tag}) for scene, tag in zip(dataset.scenes, tags, strict=True))
    logger.info(f"Categorized {len(scenes)} scenes.")
    return Dataset(points=dataset.points, scenes=scenes, dt=dataset.dt)


def filter_types(dataset: Dataset, types: list[MainType]) -> Dataset:
    """Keep scenes whose main type is listed; untagged scenes are dropped.

    Args:
        dataset (Dataset): Tagged dataset.
        types (list[MainType]): Main types to keep.

    Returns:
        Dataset: Dataset with the selected scenes and all points.
    """
    scenes = tuple(scene for scene in dataset.scenes if scene.tags is not None and scene.tags.main_type in types)
    logger.info(f"Kept {len(scenes)} of {len(dataset.scenes)} scenes of types {[int(kind) for kind in types]}.")
    return Dataset(points=dataset.points, scenes=scenes, dt=dataset.dt)


def category_statistics(dataset: Dataset) -> pd.DataFrame:
    """Counts of scenes per category.

    Args:
        dataset (Dataset): Tagged dataset; untagged scenes only count towards the total.

    Returns:
        pd.DataFrame: One row with columns Total, I, II, III, LF, CA, Grp, Others, IV.
    """
    counts = dict.fromkeys(["Total", "I", "II", "III", "LF", "CA", "Grp", "Others", "IV"], 0)
    main_names = {
        MainType.STATIC: "I",
        MainType.LINEAR: "II",
        MainType.INTERACTING: "III",
        MainType.NON_INTERACTING: "IV",
    }
    sub_names = {SubTag.LF: "LF", SubTag.CA: "CA", SubTag.GRP: "Grp", SubTag.OTHERS: "Others"}
    for scene in dataset.scenes:
        counts["Total"] += 1
        if scene.tags is None:
            continue
        counts[main_names[scene.tags.main_type]] += 1
        for subtag in scene.tags.subtags:
            counts[sub_names[subtag]] += 1
    return pd.DataFrame([counts])
