"""Performance and correctness metrics for wavenumber selection.

Correctness compares a ranking's top wavenumbers against an expert-chosen
set after binning both onto a shared grid, so that small instrument shifts
do not break a match.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

# Bin width defaults to twice the nominal instrument resolution so a peak
# shifted by up to one resolution step still lands in the same bin.
RESOLUTION_TO_BIN_FACTOR = 2.0


def mse(y, yhat) -> float:
    """Mean squared error between two equal-length vectors."""
    y = np.asarray(y, dtype=float)
    yhat = np.asarray(yhat, dtype=float)
    if y.shape != yhat.shape or y.ndim != 1:
        raise ValueError(f"mse needs two equal-length vectors, got {y.shape} vs {yhat.shape}")
    if y.size == 0:
        raise ValueError("mse of empty vectors is undefined")
    return float(np.mean((y - yhat) ** 2))


@dataclass(frozen=True)
class BinScheme:
    """Uniform binning of the wavenumber axis: bin id = floor((w - origin) / width)."""

    width: float
    origin: float = 0.0

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError(f"bin width must be positive, got {self.width}")

    @classmethod
    def for_axis(cls, axis, width: float | None = None) -> "BinScheme":
        """Scheme anchored at the axis start; default width is 2x the axis resolution."""
        if width is None:
            width = RESOLUTION_TO_BIN_FACTOR * axis.resolution
        return cls(width=width, origin=float(axis.values[0]))


def bin_set(wavenumbers, scheme: BinScheme) -> set[int]:
    """Map wavenumbers to their bin ids; duplicates collapse."""
    w = np.asarray(wavenumbers, dtype=float)
    if w.size == 0:
        return set()
    ids = np.floor((w - scheme.origin) / scheme.width).astype(int)
    return set(int(i) for i in ids)


def jaccard(a: set, b: set) -> float:
    """Intersection over union; 0 when both sets are empty (with a warning)."""
    if not a and not b:
        warnings.warn("jaccard of two empty sets; returning 0 (likely a misconfiguration)")
        return 0.0
    union = a | b
    return len(a & b) / len(union)


@dataclass(frozen=True)
class ExpertFeatureSet:
    """Wavenumber locations a domain expert expects to carry signal."""

    wavenumbers: np.ndarray
    source: str = "unspecified"

    def __post_init__(self):
        w = np.asarray(self.wavenumbers, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("expert feature set must be a nonempty 1-D list of wavenumbers")
        object.__setattr__(self, "wavenumbers", w)

    @classmethod
    def from_file(cls, path) -> "ExpertFeatureSet":
        """One wavenumber per line; lines starting with '#' are comments."""
        values = []
        for line in Path(path).read_text().splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            values.append(float(line))
        return cls(wavenumbers=np.asarray(values, dtype=float), source=str(path))

    def to_file(self, path) -> None:
        lines = [f"# expert features ({self.source}), one wavenumber per line"]
        lines += [repr(float(w)) for w in self.wavenumbers]
        Path(path).write_text("\n".join(lines) + "\n")

    def validate_for_axis(self, axis) -> None:
        lo, hi = float(axis.values[0]), float(axis.values[-1])
        w = self.wavenumbers
        if np.any(w < lo) or np.any(w > hi):
            raise ValueError(
                f"expert wavenumbers fall outside the axis range [{lo}, {hi}]"
            )


@dataclass(frozen=True)
class CorrectnessResult:
    """Binned Jaccard similarity of a selected subset against expert locations."""

    jaccard: float
    k: int
    method: str = ""

    @property
    def percent(self) -> float:
        return 100.0 * self.jaccard


def correctness(ranking, expert: ExpertFeatureSet, k: int, scheme: BinScheme, axis) -> CorrectnessResult:
    """Jaccard between the bins of the top-k ranked wavenumbers and the expert bins."""
    if k > len(ranking.order):
        raise ValueError(f"k={k} exceeds the number of ranked features {len(ranking.order)}")
    expert.validate_for_axis(axis)
    top_wavenumbers = np.asarray(axis.values)[ranking.order[:k]]
    selected_bins = bin_set(top_wavenumbers, scheme)
    expert_bins = bin_set(expert.wavenumbers, scheme)
    return CorrectnessResult(jaccard=jaccard(selected_bins, expert_bins), k=k, method=ranking.method)


def default_feature_counts() -> list[int]:
    """Subset sizes used for correctness curves: 120 to 500 in steps of 20."""
    return list(range(120, 501, 20))


def correctness_curve(ranking, expert: ExpertFeatureSet, ks, scheme: BinScheme, axis) -> list[CorrectnessResult]:
    """Correctness at each subset size in ks (which must be ascending)."""
    ks = list(ks)
    if not ks:
        raise ValueError("ks must be nonempty")
    if any(b <= a for a, b in zip(ks, ks[1:])):
        raise ValueError("ks must be strictly ascending")
    return [correctness(ranking, expert, k, scheme, axis) for k in ks]


def tradeoff(results: dict[str, tuple[float, float, float]]) -> list[dict]:
    """Per-method (correctness, test MSE mean, test MSE sd) rows, sorted by method name.

    ``results`` maps a method name to the triple ``(correctness, test_mse_mean,
    test_mse_sd)``.
    """
    if not results:
        raise ValueError("tradeoff needs at least one method")
    rows = []
    for method in sorted(results):
        corr, mu, sd = results[method]
        rows.append(
            {
                "method": method,
                "correctness": float(corr),
                "test_mse_mean": float(mu),
                "test_mse_sd": float(sd),
            }
        )
    return rows


def write_correctness_curve(results: list[CorrectnessResult], path) -> None:
    """Plot-data table for a correctness curve: method,k,jaccard,percent."""
    lines = ["method,k,jaccard,percent"]
    for r in results:
        lines.append(f"{r.method},{r.k},{r.jaccard!r},{r.percent!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_tradeoff(rows: list[dict], path) -> None:
    """Plot-data table for the correctness-versus-performance trade-off."""
    lines = ["method,correctness,test_mse_mean,test_mse_sd"]
    for r in rows:
        lines.append(
            f"{r['method']},{r['correctness']!r},{r['test_mse_mean']!r},{r['test_mse_sd']!r}"
        )
    Path(path).write_text("\n".join(lines) + "\n")
