"""Seeded synthetic Raman-like spectra with a known ground-truth feature list.

Each spectrum is a sum of Gaussian peaks whose per-sample amplitudes vary
around configured base values. The response is a (possibly mildly nonlinear)
function of the active-peak amplitudes, so the wavenumbers that truly drive
the response are known exactly and can stand in for an expert feature list.

The "new" batch emulates a later collection session: a constant baseline
offset plus inflated noise, mirroring laser-power drift between sessions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import SpectraDataset, WavenumberAxis

REPLICATES_PER_SAMPLE = 5


@dataclass(frozen=True)
class GaussianPeak:
    center: float
    width: float
    amplitude: float

    def __post_init__(self):
        if self.width <= 0 or self.amplitude < 0:
            raise ValueError("peak width must be positive and amplitude non-negative")


@dataclass(frozen=True)
class BatchShift:
    """Systematic degradation applied to the new batch."""

    baseline: float = 0.0
    noise_scale: float = 1.0

    def __post_init__(self):
        if self.noise_scale <= 0:
            raise ValueError("noise_scale must be positive")


@dataclass(frozen=True)
class InteractionTerm:
    """Adds coef * amp[i] * amp[j] to the response (i == j gives a quadratic)."""

    i: int
    j: int
    coef: float


def default_peaks() -> tuple[GaussianPeak, ...]:
    return (
        GaussianPeak(420.0, 22.0, 1.2),
        GaussianPeak(725.0, 18.0, 0.8),
        GaussianPeak(1015.0, 14.0, 1.2),
        GaussianPeak(1305.0, 25.0, 1.0),
        GaussianPeak(1610.0, 14.0, 1.2),
        GaussianPeak(1940.0, 30.0, 0.6),
        GaussianPeak(2230.0, 20.0, 0.9),
        GaussianPeak(2560.0, 14.0, 1.2),
        GaussianPeak(2925.0, 14.0, 1.2),
        GaussianPeak(3080.0, 26.0, 0.7),
    )


@dataclass(frozen=True)
class SynthConfig:
    """Generator settings; defaults mirror the production grid at desk scale.

    1562 grid points over [181.45, 3200.82] cm^-1, ten peaks of which four
    drive the response, moderate noise, and a shifted noisier new batch.
    """

    m_features: int = 1562
    axis_range: tuple[float, float] = (181.45, 3200.82)
    resolution: float = 7.1
    peaks: tuple[GaussianPeak, ...] = field(default_factory=default_peaks)
    active_peaks: tuple[int, ...] = (2, 4, 7, 8)
    response_weights: tuple[float, ...] = (3.5, -3.5, 3.5, 3.5)
    nonlinearity: tuple[InteractionTerm, ...] = ()
    amp_rel_sd: float = 0.3
    noise_sd: float = 0.01
    response_noise_sd: float = 0.25
    batch_shift: BatchShift = field(default_factory=lambda: BatchShift(baseline=0.05, noise_scale=2.5))
    n_old: int = 145
    n_new: int = 100

    def __post_init__(self):
        lo, hi = self.axis_range
        if not lo < hi:
            raise ValueError("axis_range must be (lo, hi) with lo < hi")
        if self.m_features < 2:
            raise ValueError("need at least two grid points")
        n_peaks = len(self.peaks)
        if any(not 0 <= k < n_peaks for k in self.active_peaks):
            raise ValueError("active_peaks must index into peaks")
        if len(set(self.active_peaks)) != len(self.active_peaks):
            raise ValueError("active_peaks must be unique")
        if len(self.response_weights) != len(self.active_peaks):
            raise ValueError("response_weights must pair with active_peaks")
        for p in self.peaks:
            if not lo <= p.center <= hi:
                raise ValueError(f"peak center {p.center} lies outside the axis range")
        active = set(self.active_peaks)
        for t in self.nonlinearity:
            if t.i not in active or t.j not in active:
                raise ValueError("nonlinearity terms must reference active peaks")
        if self.amp_rel_sd < 0 or self.noise_sd < 0 or self.response_noise_sd < 0:
            raise ValueError("noise magnitudes must be non-negative")
        if self.n_old < 1 or self.n_new < 0:
            raise ValueError("n_old must be >= 1 and n_new >= 0")

    def axis(self) -> WavenumberAxis:
        lo, hi = self.axis_range
        return WavenumberAxis(values=np.linspace(lo, hi, self.m_features), resolution=self.resolution)

    def active_centers(self) -> np.ndarray:
        return np.asarray([self.peaks[k].center for k in self.active_peaks], dtype=float)

    def to_dict(self) -> dict:
        return {
            "m_features": self.m_features,
            "axis_range": list(self.axis_range),
            "resolution": self.resolution,
            "peaks": [[p.center, p.width, p.amplitude] for p in self.peaks],
            "active_peaks": list(self.active_peaks),
            "response_weights": list(self.response_weights),
            "nonlinearity": [[t.i, t.j, t.coef] for t in self.nonlinearity],
            "amp_rel_sd": self.amp_rel_sd,
            "noise_sd": self.noise_sd,
            "response_noise_sd": self.response_noise_sd,
            "batch_shift": {
                "baseline": self.batch_shift.baseline,
                "noise_scale": self.batch_shift.noise_scale,
            },
            "n_old": self.n_old,
            "n_new": self.n_new,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "SynthConfig":
        doc = dict(doc)
        kwargs = {}
        if "peaks" in doc:
            kwargs["peaks"] = tuple(GaussianPeak(*row) for row in doc.pop("peaks"))
        if "nonlinearity" in doc:
            kwargs["nonlinearity"] = tuple(
                InteractionTerm(int(i), int(j), float(c)) for i, j, c in doc.pop("nonlinearity")
            )
        if "batch_shift" in doc:
            kwargs["batch_shift"] = BatchShift(**doc.pop("batch_shift"))
        if "axis_range" in doc:
            kwargs["axis_range"] = tuple(doc.pop("axis_range"))
        if "active_peaks" in doc:
            kwargs["active_peaks"] = tuple(int(k) for k in doc.pop("active_peaks"))
        if "response_weights" in doc:
            kwargs["response_weights"] = tuple(float(w) for w in doc.pop("response_weights"))
        known = {"m_features", "resolution", "amp_rel_sd", "noise_sd", "response_noise_sd", "n_old", "n_new"}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown synthetic-config fields: {sorted(unknown)}")
        kwargs.update(doc)
        return cls(**kwargs)


@dataclass(frozen=True)
class SynthResult:
    old: SpectraDataset
    new: SpectraDataset
    expert_wavenumbers: np.ndarray


def _peak_profiles(cfg: SynthConfig, axis: WavenumberAxis) -> np.ndarray:
    grid = axis.values
    rows = [
        np.exp(-((grid - p.center) ** 2) / (2.0 * p.width**2)) for p in cfg.peaks
    ]
    return np.asarray(rows)


def _draw_amplitudes(cfg: SynthConfig, rng: np.random.Generator, n: int) -> np.ndarray:
    base = np.asarray([p.amplitude for p in cfg.peaks])
    amps = base * (1.0 + cfg.amp_rel_sd * rng.standard_normal((n, base.size)))
    return np.clip(amps, 0.0, None)


def _response_from(cfg: SynthConfig, amps: np.ndarray) -> np.ndarray:
    weights = np.asarray(cfg.response_weights, dtype=float)
    y = amps[:, list(cfg.active_peaks)] @ weights
    for t in cfg.nonlinearity:
        y = y + t.coef * amps[:, t.i] * amps[:, t.j]
    return y


def _ids(prefix: str, n: int) -> tuple[np.ndarray, np.ndarray]:
    sample = np.asarray([f"{prefix}{i // REPLICATES_PER_SAMPLE:03d}" for i in range(n)], dtype=object)
    replicate = np.asarray([str(i % REPLICATES_PER_SAMPLE) for i in range(n)], dtype=object)
    return sample, replicate


def ground_truth_features(cfg: SynthConfig) -> np.ndarray:
    """Axis wavenumbers within one width of each active-peak center."""
    axis = cfg.axis()
    keep = np.zeros(len(axis), dtype=bool)
    for k in cfg.active_peaks:
        p = cfg.peaks[k]
        keep |= np.abs(axis.values - p.center) <= p.width
    return axis.values[keep].copy()


def generate_synthetic(cfg: SynthConfig, seed: int) -> SynthResult:
    """Generate (old, new) datasets plus the ground-truth feature list.

    Fully deterministic given (cfg, seed): the random stream is consumed in a
    fixed order (old amplitudes, old noise, old response noise, then the same
    for the new batch).
    """
    rng = np.random.default_rng(seed)
    axis = cfg.axis()
    profiles = _peak_profiles(cfg, axis)

    def build(n: int, prefix: str, baseline: float, noise_scale: float) -> SpectraDataset:
        amps = _draw_amplitudes(cfg, rng, n)
        X = amps @ profiles + baseline
        if cfg.noise_sd > 0:
            X = X + rng.normal(0.0, cfg.noise_sd * noise_scale, size=X.shape)
        y = _response_from(cfg, amps)
        if cfg.response_noise_sd > 0:
            y = y + rng.normal(0.0, cfg.response_noise_sd * noise_scale, size=n)
        sample, replicate = _ids(prefix, n)
        return SpectraDataset(
            axis=axis,
            intensities=X,
            response=y,
            batch=np.asarray([prefix] * n, dtype=object),
            sample_id=sample,
            replicate_id=replicate,
        )

    old = build(cfg.n_old, "old", baseline=0.0, noise_scale=1.0)
    new = build(cfg.n_new, "new", baseline=cfg.batch_shift.baseline, noise_scale=cfg.batch_shift.noise_scale)
    return SynthResult(old=old, new=new, expert_wavenumbers=ground_truth_features(cfg))
