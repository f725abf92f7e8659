"""Explainable prediction for high-dimensional, small-sample spectral regression.

Submodules: ``spectra`` (data model, ingestion, synthetic generator),
``models`` (predictors and tuning), ``selectors`` (model-based feature
ranking), ``explainers`` (model-agnostic attribution), ``metrics``
(performance and correctness), ``harness`` (scenario evaluation and
reporting).
"""

from . import explainers, harness, metrics, models, selectors, spectra

__version__ = "0.1.0"

__all__ = ["explainers", "harness", "metrics", "models", "selectors", "spectra", "__version__"]
