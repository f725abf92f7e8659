import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spexplain.models import ols_fit
from spexplain.spectra import (
    GaussianPeak,
    MissingResponseError,
    NonMonotonicAxisError,
    NonNumericCellError,
    RowWidthError,
    ScenarioSpec,
    SpectraDataset,
    SynthConfig,
    WavenumberAxis,
    generate_synthetic,
    load_dataset,
    make_scenario,
    partition_sizes,
    save_dataset,
    standardize_apply,
    standardize_fit,
    standardize_invert,
    trim_axis,
)
from conftest import small_synth_config


def write_csv(path, header, rows):
    lines = [",".join(header)] + [",".join(str(c) for c in r) for r in rows]
    path.write_text("\n".join(lines) + "\n")


META = ["cn", "batch", "sample_id", "replicate_id"]


class TestLoadDataset:
    def test_well_formed_shape(self, tmp_path):
        path = tmp_path / "ds.csv"
        header = ["100", "110", "120", "130", "140"] + META
        rows = [[i, i + 1, i + 2, i + 3, i + 4, 40 + i, "old", f"s{i}", "0"] for i in range(10)]
        write_csv(path, header, rows)
        ds = load_dataset(path)
        assert ds.n_samples == 10 and ds.n_features == 5
        assert ds.axis.values.tolist() == [100, 110, 120, 130, 140]
        assert ds.response[3] == 43.0

    def test_non_monotonic_axis(self, tmp_path):
        path = tmp_path / "ds.csv"
        write_csv(path, ["3", "2", "1"] + META, [[1, 2, 3, 40, "old", "a", "0"]])
        with pytest.raises(NonMonotonicAxisError):
            load_dataset(path)

    def test_nan_intensity_cell(self, tmp_path):
        path = tmp_path / "ds.csv"
        write_csv(path, ["1", "2"] + META, [[1, "NaN", 40, "old", "a", "0"]])
        with pytest.raises(NonNumericCellError):
            load_dataset(path)

    def test_non_numeric_cell(self, tmp_path):
        path = tmp_path / "ds.csv"
        write_csv(path, ["1", "2"] + META, [[1, "oops", 40, "old", "a", "0"]])
        with pytest.raises(NonNumericCellError):
            load_dataset(path)

    def test_row_width_mismatch(self, tmp_path):
        path = tmp_path / "ds.csv"
        write_csv(path, ["1", "2"] + META, [[1, 2, 40, "old", "a", "0", "extra"]])
        with pytest.raises(RowWidthError):
            load_dataset(path)

    def test_missing_response_column(self, tmp_path):
        path = tmp_path / "ds.csv"
        write_csv(path, ["1", "2", "batch", "sample_id", "replicate_id"], [[1, 2, "old", "a", "0"]])
        with pytest.raises(MissingResponseError):
            load_dataset(path)

    def test_empty_response_cell(self, tmp_path):
        path = tmp_path / "ds.csv"
        write_csv(path, ["1", "2"] + META, [[1, 2, "", "old", "a", "0"]])
        with pytest.raises(MissingResponseError):
            load_dataset(path)

    def test_save_load_round_trip(self, tmp_path, small_synth):
        path = tmp_path / "old.csv"
        save_dataset(small_synth.old, path)
        loaded = load_dataset(path, resolution=small_synth.old.axis.resolution)
        assert np.array_equal(loaded.intensities, small_synth.old.intensities)
        assert np.array_equal(loaded.response, small_synth.old.response)
        assert np.array_equal(loaded.axis.values, small_synth.old.axis.values)
        assert list(loaded.batch) == list(small_synth.old.batch)


class TestTrimAxis:
    def make(self, values):
        axis = WavenumberAxis(values=np.asarray(values, dtype=float), resolution=7.1)
        n = 4
        rng = np.random.default_rng(1)
        return SpectraDataset(
            axis=axis,
            intensities=rng.random((n, len(values))),
            response=rng.random(n),
            batch=np.asarray(["old"] * n, dtype=object),
            sample_id=np.asarray([str(i) for i in range(n)], dtype=object),
            replicate_id=np.asarray(["0"] * n, dtype=object),
        )

    def test_retained_count_matches_direct_count(self):
        grid = np.linspace(52.52, 3712.89, 2048)
        ds = self.make(grid)
        lo, hi = 181.45, 3200.82
        trimmed = trim_axis(ds, lo, hi)
        expected = sum(1 for w in grid if lo <= w <= hi)
        assert trimmed.n_features == expected
        assert np.array_equal(trimmed.response, ds.response)

    def test_full_cover_is_identity(self):
        ds = self.make([100.0, 200.0, 300.0])
        trimmed = trim_axis(ds, 50.0, 400.0)
        assert np.array_equal(trimmed.intensities, ds.intensities)
        assert np.array_equal(trimmed.axis.values, ds.axis.values)

    def test_equal_bounds_rejected(self):
        ds = self.make([100.0, 200.0])
        with pytest.raises(ValueError):
            trim_axis(ds, 150.0, 150.0)

    def test_empty_result_rejected(self):
        ds = self.make([100.0, 200.0])
        with pytest.raises(ValueError):
            trim_axis(ds, 300.0, 400.0)

    def test_idempotent(self):
        ds = self.make(np.linspace(100, 900, 30))
        once = trim_axis(ds, 250.0, 700.0)
        twice = trim_axis(once, 250.0, 700.0)
        assert np.array_equal(once.intensities, twice.intensities)
        assert np.array_equal(once.axis.values, twice.axis.values)


class TestStandardize:
    def test_two_point_column(self):
        params = standardize_fit(np.array([[1.0], [3.0]]))
        assert params.means[0] == 2.0 and params.stds[0] == 1.0
        out = standardize_apply(params, np.array([[1.0], [3.0]]))
        assert out.ravel().tolist() == [-1.0, 1.0]

    def test_constant_column_maps_to_zero(self):
        params = standardize_fit(np.array([[5.0], [5.0], [5.0]]))
        out = standardize_apply(params, np.array([[5.0], [5.0], [5.0]]))
        assert np.all(out == 0.0)
        assert params.constant_mask[0]

    def test_fitted_moments(self, rng):
        X = rng.random((40, 6)) * 7 + 3
        Xs = standardize_apply(standardize_fit(X), X)
        assert np.abs(Xs.mean(axis=0)).max() < 1e-10
        assert np.abs(Xs.var(axis=0) - 1.0).max() < 1e-10

    def test_disjoint_test_means_differ_from_zero(self, small_synth):
        train = small_synth.old.intensities[:30]
        test = small_synth.old.intensities[30:]
        params = standardize_fit(train)
        test_means = standardize_apply(params, test).mean(axis=0)
        assert np.abs(test_means).max() > 1e-6

    @given(st.integers(min_value=0, max_value=10_000))
    def test_round_trip(self, seed):
        X = np.random.default_rng(seed).random((8, 5)) * 100 - 50
        params = standardize_fit(X)
        back = standardize_invert(params, standardize_apply(params, X))
        mask = ~params.constant_mask
        assert np.abs(back[:, mask] - X[:, mask]).max() < 1e-12


class TestScenarios:
    def test_control_sizes_145(self):
        assert partition_sizes(145, (0.8, 0.1, 0.1)) == (117, 14, 14)

    def test_mixed_sizes_245(self):
        assert partition_sizes(245, (0.8, 0.1, 0.1)) == (197, 24, 24)

    def test_realtime_sizes(self):
        assert partition_sizes(145, (0.8, 0.2, None)) == (116, 29, 0)

    def test_realtime_split(self):
        cfg = small_synth_config(n_old=145, n_new=100, m_features=20, peaks=(GaussianPeak(500.0, 30.0, 1.0),), active_peaks=(0,), response_weights=(2.0,))
        result = generate_synthetic(cfg, seed=0)
        train, val, test = make_scenario(result.old, result.new, ScenarioSpec.realtime(seed=3))
        assert (train.n_samples, val.n_samples, test.n_samples) == (116, 29, 100)
        assert set(test.batch) == {"new"}
        assert set(train.batch) == {"old"}

    def test_partition_disjoint_and_exhaustive(self, small_synth):
        train, val, test = make_scenario(small_synth.old, small_synth.new, ScenarioSpec.mixed(seed=5))
        total = train.n_samples + val.n_samples + test.n_samples
        assert total == small_synth.old.n_samples + small_synth.new.n_samples
        seen = np.vstack([train.intensities, val.intensities, test.intensities])
        pool = np.vstack([small_synth.old.intensities, small_synth.new.intensities])
        assert np.array_equal(np.sort(seen.sum(axis=1)), np.sort(pool.sum(axis=1)))

    def test_same_seed_reproducible(self, small_synth):
        a = make_scenario(small_synth.old, small_synth.new, ScenarioSpec.control(seed=9))
        b = make_scenario(small_synth.old, small_synth.new, ScenarioSpec.control(seed=9))
        for x, y in zip(a, b):
            assert np.array_equal(x.intensities, y.intensities)

    def test_different_seed_differs(self, small_synth):
        a, _, _ = make_scenario(small_synth.old, small_synth.new, ScenarioSpec.control(seed=1))
        b, _, _ = make_scenario(small_synth.old, small_synth.new, ScenarioSpec.control(seed=2))
        assert not np.array_equal(a.intensities, b.intensities)

    def test_realtime_needs_new_data(self, small_synth):
        with pytest.raises(ValueError):
            make_scenario(small_synth.old, None, ScenarioSpec.realtime(seed=0))

    def test_fractions_must_sum_to_one(self):
        with pytest.raises(ValueError):
            ScenarioSpec(kind="control", fractions=(0.5, 0.1, 0.1))


class TestGenerateSynthetic:
    def test_deterministic(self):
        cfg = small_synth_config()
        a = generate_synthetic(cfg, seed=123)
        b = generate_synthetic(cfg, seed=123)
        assert np.array_equal(a.old.intensities, b.old.intensities)
        assert np.array_equal(a.new.response, b.new.response)
        assert np.array_equal(a.expert_wavenumbers, b.expert_wavenumbers)

    def test_noiseless_response_linearly_recoverable(self):
        cfg = small_synth_config(
            active_peaks=(1,),
            response_weights=(2.0,),
            noise_sd=0.0,
            response_noise_sd=0.0,
            n_old=40,
        )
        result = generate_synthetic(cfg, seed=2)
        axis = result.old.axis
        peak = cfg.peaks[1]
        region = np.nonzero(np.abs(axis.values - peak.center) <= 2.0 * peak.width)[0]
        model = ols_fit(result.old.intensities[:, region], result.old.response)
        train_mse = float(np.mean((model.predict(result.old.intensities[:, region]) - result.old.response) ** 2))
        assert train_mse < 1e-8

    def test_baseline_shift_moves_mean_intensity(self):
        from spexplain.spectra import BatchShift

        cfg = small_synth_config(
            batch_shift=BatchShift(baseline=0.5, noise_scale=1.0), n_old=200, n_new=200
        )
        result = generate_synthetic(cfg, seed=4)
        gap = result.new.intensities.mean() - result.old.intensities.mean()
        assert gap == pytest.approx(0.5, abs=0.05)

    def test_ground_truth_within_one_width(self):
        cfg = small_synth_config()
        result = generate_synthetic(cfg, seed=0)
        centers = cfg.active_centers()
        widths = [cfg.peaks[k].width for k in cfg.active_peaks]
        for w in result.expert_wavenumbers:
            assert any(abs(w - c) <= wd for c, wd in zip(centers, widths))
        axis = cfg.axis()
        inside = [
            v
            for v in axis.values
            if any(abs(v - c) <= wd for c, wd in zip(centers, widths))
        ]
        assert len(inside) == result.expert_wavenumbers.size

    def test_config_dict_round_trip(self):
        cfg = small_synth_config()
        assert SynthConfig.from_dict(cfg.to_dict()) == cfg

    def test_invalid_active_peak_rejected(self):
        with pytest.raises(ValueError):
            small_synth_config(active_peaks=(9,), response_weights=(1.0,))


class TestWavenumberAxis:
    def test_requires_increasing(self):
        with pytest.raises(ValueError):
            WavenumberAxis(values=np.array([3.0, 2.0, 1.0]), resolution=7.1)

    def test_dataset_rejects_nonfinite(self):
        axis = WavenumberAxis(values=np.array([1.0, 2.0]), resolution=1.0)
        with pytest.raises(ValueError):
            SpectraDataset(
                axis=axis,
                intensities=np.array([[1.0, np.inf]]),
                response=np.array([1.0]),
                batch=np.asarray(["old"], dtype=object),
                sample_id=np.asarray(["a"], dtype=object),
                replicate_id=np.asarray(["0"], dtype=object),
            )

    def test_dataset_rejects_unknown_batch_label(self):
        axis = WavenumberAxis(values=np.array([1.0, 2.0]), resolution=1.0)
        with pytest.raises(ValueError):
            SpectraDataset(
                axis=axis,
                intensities=np.ones((1, 2)),
                response=np.ones(1),
                batch=np.asarray(["middle"], dtype=object),
                sample_id=np.asarray(["a"], dtype=object),
                replicate_id=np.asarray(["0"], dtype=object),
            )
