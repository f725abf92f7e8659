"""Seeded scenario splitting: control, mixed, and realtime evaluation protocols."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import SpectraDataset, concat_datasets

SCENARIO_KINDS = ("control", "mixed", "realtime")

# (train, val, test) proportions; realtime holds out every new-batch row as test.
DEFAULT_FRACTIONS = {
    "control": (0.8, 0.1, 0.1),
    "mixed": (0.8, 0.1, 0.1),
    "realtime": (0.8, 0.2, None),
}


@dataclass(frozen=True)
class ScenarioSpec:
    """How to carve (old, new) data pools into train/val/test partitions.

    * control  - old rows only, split by ``fractions``
    * mixed    - old and new rows pooled, split by ``fractions``
    * realtime - old rows split train/val; every new row becomes the test set
    """

    kind: str
    fractions: tuple = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in SCENARIO_KINDS:
            raise ValueError(f"unknown scenario kind {self.kind!r}; expected one of {SCENARIO_KINDS}")
        fractions = self.fractions
        if fractions is None:
            fractions = DEFAULT_FRACTIONS[self.kind]
        fractions = tuple(fractions)
        if self.kind == "realtime":
            if len(fractions) == 2:
                fractions = (*fractions, None)
            if len(fractions) != 3 or fractions[2] is not None:
                raise ValueError("realtime fractions are (train, val, None); the test set is the new batch")
            if not math.isclose(fractions[0] + fractions[1], 1.0, abs_tol=1e-9):
                raise ValueError("realtime train+val fractions must sum to 1")
        else:
            if len(fractions) != 3 or any(f is None for f in fractions):
                raise ValueError(f"{self.kind} fractions are (train, val, test)")
            if not math.isclose(sum(fractions), 1.0, abs_tol=1e-9):
                raise ValueError(f"{self.kind} fractions must sum to 1, got {fractions}")
        if any(f is not None and f < 0 for f in fractions):
            raise ValueError("fractions must be non-negative")
        object.__setattr__(self, "fractions", fractions)

    @classmethod
    def control(cls, seed: int = 0) -> "ScenarioSpec":
        return cls(kind="control", seed=seed)

    @classmethod
    def mixed(cls, seed: int = 0) -> "ScenarioSpec":
        return cls(kind="mixed", seed=seed)

    @classmethod
    def realtime(cls, seed: int = 0) -> "ScenarioSpec":
        return cls(kind="realtime", seed=seed)


def partition_sizes(n: int, fractions: tuple) -> tuple[int, int, int]:
    """Floor the val and test counts; the train partition takes the remainder.

    Flooring the held-out partitions maximizes training data, which matters
    at these sample sizes.
    """
    _, f_val, f_test = fractions
    n_val = int(math.floor(f_val * n))
    n_test = 0 if f_test is None else int(math.floor(f_test * n))
    n_train = n - n_val - n_test
    if n_train <= 0:
        raise ValueError(f"degenerate split: {n} rows leave no training data")
    return n_train, n_val, n_test


def make_scenario(
    old: SpectraDataset, new: SpectraDataset | None, spec: ScenarioSpec
) -> tuple[SpectraDataset, SpectraDataset, SpectraDataset]:
    """Split data pools into (train, val, test) datasets.

    The permutation is a pure function of ``spec.seed``. Partitions are
    disjoint and exhaustive over the pool they draw from.
    """
    if old is None or old.n_samples == 0:
        raise ValueError("the old-data pool is empty")

    if spec.kind == "realtime":
        if new is None or new.n_samples == 0:
            raise ValueError("realtime scenario requires a nonempty new batch for testing")
        pool = old
    elif spec.kind == "mixed":
        pool = concat_datasets(old, new) if new is not None and new.n_samples else old
    else:
        pool = old

    n = pool.n_samples
    n_train, n_val, n_test = partition_sizes(n, spec.fractions)
    perm = np.random.default_rng(spec.seed).permutation(n)
    train = pool.take_rows(perm[:n_train])
    val = pool.take_rows(perm[n_train : n_train + n_val])
    if spec.kind == "realtime":
        test = new
    else:
        test = pool.take_rows(perm[n_train + n_val :])
    return train, val, test
