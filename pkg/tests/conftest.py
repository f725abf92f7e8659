import numpy as np
import pytest

from spexplain.spectra import GaussianPeak, SynthConfig, generate_synthetic


def small_synth_config(**overrides) -> SynthConfig:
    """Desk-scale generator config with well-separated peaks."""
    base = dict(
        m_features=60,
        axis_range=(200.0, 800.0),
        resolution=7.1,
        peaks=(
            GaussianPeak(290.0, 18.0, 1.2),
            GaussianPeak(500.0, 20.0, 1.5),
            GaussianPeak(710.0, 18.0, 1.0),
        ),
        active_peaks=(1,),
        response_weights=(3.0,),
        nonlinearity=(),
        amp_rel_sd=0.25,
        noise_sd=0.01,
        response_noise_sd=0.05,
        n_old=40,
        n_new=20,
    )
    base.update(overrides)
    return SynthConfig(**base)


@pytest.fixture
def small_synth():
    return generate_synthetic(small_synth_config(), seed=11)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
