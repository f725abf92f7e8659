"""Core data model: wavenumber axis, spectra datasets, standardization, trimming."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._util import readonly_array as _readonly

# Standard deviations below this floor are treated as degenerate; the affected
# columns standardize to zero instead of raising.
STD_FLOOR = 1e-12

BATCH_LABELS = ("old", "new")


@dataclass(frozen=True)
class WavenumberAxis:
    """Strictly increasing wavenumber grid (cm^-1) with a nominal instrument resolution.

    Grid spacing and resolution are independent: an instrument may sample a
    grid finer than what it can actually resolve.
    """

    values: np.ndarray
    resolution: float

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("axis values must be a nonempty 1-D array")
        if np.any(np.diff(v) <= 0):
            raise ValueError("axis values must be strictly increasing")
        if not self.resolution > 0:
            raise ValueError("axis resolution must be positive")
        object.__setattr__(self, "values", _readonly(v))

    def __len__(self) -> int:
        return self.values.size

    def indices_in(self, lo: float, hi: float) -> np.ndarray:
        """Indices of grid points with lo <= wavenumber <= hi."""
        return np.nonzero((self.values >= lo) & (self.values <= hi))[0]


@dataclass(frozen=True)
class SpectraDataset:
    """An N x M intensity matrix on a wavenumber axis, with responses and metadata.

    Rows are observations, columns are intensities at the axis wavenumbers.
    Instances are immutable after construction and safe to share across
    threads.
    """

    axis: WavenumberAxis
    intensities: np.ndarray
    response: np.ndarray
    batch: np.ndarray
    sample_id: np.ndarray
    replicate_id: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.intensities, dtype=float)
        y = np.asarray(self.response, dtype=float)
        batch = np.asarray(self.batch, dtype=object)
        sid = np.asarray(self.sample_id, dtype=object)
        rid = np.asarray(self.replicate_id, dtype=object)
        if X.ndim != 2:
            raise ValueError("intensities must be a 2-D matrix")
        n = X.shape[0]
        if X.shape[1] != len(self.axis):
            raise ValueError(
                f"intensity columns ({X.shape[1]}) must match the axis length ({len(self.axis)})"
            )
        for name, arr in (("response", y), ("batch", batch), ("sample_id", sid), ("replicate_id", rid)):
            if arr.ndim != 1 or arr.shape[0] != n:
                raise ValueError(f"{name} must be a length-N vector (N={n})")
        if not np.all(np.isfinite(X)):
            raise ValueError("intensities contain non-finite entries")
        if not np.all(np.isfinite(y)):
            raise ValueError("response contains non-finite entries")
        unknown = set(batch.tolist()) - set(BATCH_LABELS)
        if unknown:
            raise ValueError(f"unknown batch labels {sorted(unknown)}; expected {BATCH_LABELS}")
        object.__setattr__(self, "intensities", _readonly(X))
        object.__setattr__(self, "response", _readonly(y))
        object.__setattr__(self, "batch", _readonly(batch))
        object.__setattr__(self, "sample_id", _readonly(sid))
        object.__setattr__(self, "replicate_id", _readonly(rid))

    @property
    def n_samples(self) -> int:
        return self.intensities.shape[0]

    @property
    def n_features(self) -> int:
        return self.intensities.shape[1]

    def take_rows(self, idx) -> "SpectraDataset":
        idx = np.asarray(idx, dtype=int)
        return SpectraDataset(
            axis=self.axis,
            intensities=self.intensities[idx],
            response=self.response[idx],
            batch=self.batch[idx],
            sample_id=self.sample_id[idx],
            replicate_id=self.replicate_id[idx],
        )


def concat_datasets(first: SpectraDataset, second: SpectraDataset) -> SpectraDataset:
    """Stack two datasets sharing an identical axis."""
    if len(first.axis) != len(second.axis) or not np.array_equal(
        first.axis.values, second.axis.values
    ):
        raise ValueError("datasets must share an identical wavenumber axis")
    return SpectraDataset(
        axis=first.axis,
        intensities=np.vstack([first.intensities, second.intensities]),
        response=np.concatenate([first.response, second.response]),
        batch=np.concatenate([first.batch, second.batch]),
        sample_id=np.concatenate([first.sample_id, second.sample_id]),
        replicate_id=np.concatenate([first.replicate_id, second.replicate_id]),
    )


def trim_axis(ds: SpectraDataset, lo: float, hi: float) -> SpectraDataset:
    """Keep exactly the features with lo <= wavenumber <= hi.

    Responses and metadata are unchanged. Raises on an inverted interval or
    when nothing would remain.
    """
    if not lo < hi:
        raise ValueError(f"trim interval must satisfy lo < hi, got [{lo}, {hi}]")
    keep = ds.axis.indices_in(lo, hi)
    if keep.size == 0:
        raise ValueError(f"no wavenumbers remain inside [{lo}, {hi}]")
    axis = WavenumberAxis(values=ds.axis.values[keep], resolution=ds.axis.resolution)
    return SpectraDataset(
        axis=axis,
        intensities=ds.intensities[:, keep],
        response=ds.response,
        batch=ds.batch,
        sample_id=ds.sample_id,
        replicate_id=ds.replicate_id,
    )


@dataclass(frozen=True)
class StandardizationParams:
    """Per-feature means and (floored) standard deviations fitted on training data."""

    means: np.ndarray
    stds: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.means, dtype=float)
        s = np.asarray(self.stds, dtype=float)
        if m.shape != s.shape or m.ndim != 1:
            raise ValueError("means and stds must be 1-D vectors of equal length")
        if np.any(s <= 0):
            raise ValueError("stds must be strictly positive (apply the floor before constructing)")
        object.__setattr__(self, "means", _readonly(m))
        object.__setattr__(self, "stds", _readonly(s))

    @property
    def constant_mask(self) -> np.ndarray:
        """Features whose training variance collapsed onto the floor."""
        return self.stds <= STD_FLOOR


def _matrix_of(data) -> np.ndarray:
    if isinstance(data, SpectraDataset):
        return data.intensities
    X = np.asarray(data, dtype=float)
    if X.ndim != 2:
        raise ValueError("expected a 2-D matrix or a SpectraDataset")
    return X


def standardize_fit(train) -> StandardizationParams:
    """Fit per-feature means and stds from a training matrix or dataset.

    Standard deviations use the population convention (ddof=0) so a fitted
    column transforms to exactly unit variance; degenerate columns are floored.
    """
    X = _matrix_of(train)
    if X.shape[0] == 0:
        raise ValueError("cannot standardize an empty training set")
    means = X.mean(axis=0)
    stds = X.std(axis=0)
    stds = np.where(stds > STD_FLOOR, stds, STD_FLOOR)
    return StandardizationParams(means=means, stds=stds)


def standardize_apply(params: StandardizationParams, X) -> np.ndarray:
    """Apply (X - means) / stds columnwise."""
    X = _matrix_of(X)
    if X.shape[1] != params.means.size:
        raise ValueError(
            f"matrix has {X.shape[1]} columns but params were fitted on {params.means.size}"
        )
    return (X - params.means) / params.stds


def standardize_invert(params: StandardizationParams, Xs) -> np.ndarray:
    """Undo standardization: Xs * stds + means."""
    Xs = _matrix_of(Xs)
    return Xs * params.stds + params.means
