"""Module containing utility functions for file handling, parallel mapping and seeding.

Functions:
    read_from_file: Read the contents of a text file, ``-`` meaning stdin.
    write_to_file: Write text to a file, ``-`` meaning stdout.
    write_csv: Write a pandas DataFrame as CSV.
    parallel_map: Ordered map over a process pool.
    derive_rng: Independent numpy generator for a (seed, index, ...) key.

Dependencies:
    - concurrent.futures: Process pool of the parallel map.
    - pathlib: Filesystem paths.
    - sys: Standard streams.
    - numpy: Seed sequences and generators.
    - pandas: CSV output.
"""

import sys
from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import TypeVar

import numpy as np
import pandas as pd

T = TypeVar("T")
R = TypeVar("R")


def read_from_file(filename: str) -> str:
    """Read the contents of a text file.

    Args:
        filename (str): The path to the text file, or ``-`` for stdin.

    Returns:
        str: The contents of the file as a string.
    """
    if filename == "-":
        return sys.stdin.read()
    with open(filename, encoding="utf-8") as input_file:
        return input_file.read()


def write_to_file(filename: str, text: str) -> None:
    """Write text to a file, creating parent directories.

    Args:
        filename (str): The path to the file, or ``-`` for stdout.
        text (str): The text to write.
    """
    if filename == "-":
        sys.stdout.write(text)
        return
    path = Path(filename)
    path.parent.mkdir(parents=True, exist_ok=True)
    # newline="" keeps "\n" endings byte-identical across platforms
    with open(path, "w", encoding="utf-8", newline="") as output_file:
        output_file.write(text)


def write_csv(filename: str, frame: pd.DataFrame) -> None:
    """Write a DataFrame as CSV without its index.

    Args:
        filename (str): The path to the CSV file, or ``-`` for stdout.
        frame (pd.DataFrame): The data to write.
    """
    write_to_file(filename, frame.to_csv(index=False, lineterminator="\n"))


def parallel_map(func: Callable[[T], R], items: Iterable[T], workers: int = 1) -> list[R]:
    """Map ``func`` over ``items`` keeping input order.

    Args:
        func (Callable[[T], R]): Picklable function.
        items (Iterable[T]): Inputs.
        workers (int): Processes; 1 maps in the calling process.

    Returns:
        list[R]: Results in input order.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items, chunksize=max(1, len(items) // (4 * workers))))


def derive_rng(seed: int, *key: int) -> np.random.Generator:
    """Generator whose stream depends only on ``seed`` and ``key``.

    Args:
        seed (int): Master seed.
        *key (int): Sub-stream identifiers, e.g. scenario index or (scene id, mode).

    Returns:
        np.random.Generator: Independent generator.
    """
    return np.random.default_rng(np.random.SeedSequence([seed, *key]))
