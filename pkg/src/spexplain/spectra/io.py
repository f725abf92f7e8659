"""Delimited-text ingestion and export for spectra datasets.

File layout: one row per observation; the header carries the M wavenumber
values first, then named metadata columns (response, batch, and the two id
columns). Each malformed-input case raises its own error type so callers can
report precisely what went wrong.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset import SpectraDataset, WavenumberAxis


class DatasetLoadError(ValueError):
    """Base class for malformed input files."""


class NonMonotonicAxisError(DatasetLoadError):
    pass


class RowWidthError(DatasetLoadError):
    pass


class NonNumericCellError(DatasetLoadError):
    pass


class MissingResponseError(DatasetLoadError):
    pass


@dataclass(frozen=True)
class ColumnSchema:
    """Names of the metadata columns following the intensity block."""

    response: str = "cn"
    batch: str = "batch"
    sample_id: str = "sample_id"
    replicate_id: str = "replicate_id"


def _parse_number(token: str, where: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise NonNumericCellError(f"non-numeric value {token!r} in {where}") from None
    if not np.isfinite(value):
        raise NonNumericCellError(f"non-finite value {token!r} in {where}")
    return value


def load_dataset(path, schema: ColumnSchema | None = None, resolution: float | None = None) -> SpectraDataset:
    """Parse a delimited spectra file into a validated dataset.

    The wavenumber axis is read from the header (every leading numeric
    token). ``resolution`` defaults to the median grid spacing.
    """
    schema = schema or ColumnSchema()
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DatasetLoadError(f"{path}: empty file")

    header = [t.strip() for t in rows[0]]
    wavenumbers: list[float] = []
    for token in header:
        try:
            wavenumbers.append(float(token))
        except ValueError:
            break
    m = len(wavenumbers)
    if m == 0:
        raise DatasetLoadError(f"{path}: header carries no wavenumber columns")
    meta_names = header[m:]
    if schema.response not in meta_names:
        raise MissingResponseError(f"{path}: missing response column {schema.response!r}")
    for required in (schema.batch, schema.sample_id, schema.replicate_id):
        if required not in meta_names:
            raise DatasetLoadError(f"{path}: missing metadata column {required!r}")
    meta_pos = {name: m + i for i, name in enumerate(meta_names)}

    w = np.asarray(wavenumbers)
    if np.any(np.diff(w) <= 0):
        raise NonMonotonicAxisError(f"{path}: header wavenumbers are not strictly increasing")
    if resolution is None:
        resolution = float(np.median(np.diff(w))) if m > 1 else 1.0
    axis = WavenumberAxis(values=w, resolution=resolution)

    width = len(header)
    intensities, response, batch, sample_id, replicate_id = [], [], [], [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != width:
            raise RowWidthError(
                f"{path}:{lineno}: row has {len(row)} cells, header has {width}"
            )
        intensities.append(
            [_parse_number(row[j], f"{path}:{lineno} column {j + 1}") for j in range(m)]
        )
        response_cell = row[meta_pos[schema.response]].strip()
        if not response_cell:
            raise MissingResponseError(f"{path}:{lineno}: empty response cell")
        response.append(_parse_number(response_cell, f"{path}:{lineno} response"))
        batch.append(row[meta_pos[schema.batch]].strip())
        sample_id.append(row[meta_pos[schema.sample_id]].strip())
        replicate_id.append(row[meta_pos[schema.replicate_id]].strip())

    if not intensities:
        raise DatasetLoadError(f"{path}: no observation rows")
    return SpectraDataset(
        axis=axis,
        intensities=np.asarray(intensities),
        response=np.asarray(response),
        batch=np.asarray(batch, dtype=object),
        sample_id=np.asarray(sample_id, dtype=object),
        replicate_id=np.asarray(replicate_id, dtype=object),
    )


def save_dataset(ds: SpectraDataset, path, schema: ColumnSchema | None = None) -> None:
    """Write a dataset in the same layout that load_dataset reads."""
    schema = schema or ColumnSchema()
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [repr(float(w)) for w in ds.axis.values]
            + [schema.response, schema.batch, schema.sample_id, schema.replicate_id]
        )
        for i in range(ds.n_samples):
            writer.writerow(
                [repr(float(v)) for v in ds.intensities[i]]
                + [
                    repr(float(ds.response[i])),
                    str(ds.batch[i]),
                    str(ds.sample_id[i]),
                    str(ds.replicate_id[i]),
                ]
            )
