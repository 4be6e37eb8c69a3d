import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from relf import (
    CvConfig,
    Dataset,
    LeastSquaresMethod,
    NoiseConfig,
    RelfMethod,
    SolverConfig,
    cross_validate,
    increase_ratio,
    kfold_split,
    mae,
    ols_fit,
    parse_ensemble,
    parse_method,
    rmse,
    run_benchmark,
    synth_line,
)
from relf.data import NOISE_GAUSSIAN, NOISE_OUTLIER
from relf.exceptions import (
    DataError,
    DimensionMismatchError,
    EmptyInputError,
    RelfError,
    TooManyFoldsError,
    ZeroCleanBaselineError,
)

from oracles import mc_mean_abs_gaussian, ols_oracle


class TestMetrics:
    def test_mae_examples(self):
        assert mae([1.0, 2.0], [1.0, 2.0]) == 0.0
        assert mae([0.0, 0.0], [1.0, -1.0]) == 1.0
        assert_allclose(mae([1.0, 2.0, 3.0], [2.0, 2.0, 2.0]), 2.0 / 3.0)

    def test_rmse_examples(self):
        assert rmse([1.0], [1.0]) == 0.0
        assert_allclose(rmse([0.0, 0.0], [3.0, 4.0]), np.sqrt(12.5))
        assert rmse([5.0], [3.0]) == 2.0

    def test_errors(self):
        with pytest.raises(DimensionMismatchError):
            mae([1.0], [1.0, 2.0])
        with pytest.raises(DimensionMismatchError):
            rmse([1.0], [1.0, 2.0])
        with pytest.raises(EmptyInputError):
            mae([], [])
        with pytest.raises(EmptyInputError):
            rmse([], [])

    def test_mae_never_exceeds_rmse(self):
        rng = np.random.default_rng(99)
        for _ in range(1000):
            n = int(rng.integers(1, 30))
            y = rng.standard_normal(n) * rng.uniform(0.1, 10)
            yhat = y + rng.standard_normal(n) * rng.uniform(0.0, 5)
            assert mae(y, yhat) <= rmse(y, yhat) + 1e-12


class TestKfold:
    def test_singletons(self):
        folds = kfold_split(10, CvConfig(folds=10))
        assert all(len(te) == 1 for _, te in folds)

    def test_sizes(self):
        folds = kfold_split(10, CvConfig(folds=3))
        assert sorted(len(te) for _, te in folds) == [3, 3, 4]

    def test_partition_exact(self):
        for n, k in ((10, 3), (81, 10), (25, 5)):
            folds = kfold_split(n, CvConfig(folds=k, seed=1))
            seen = np.sort(np.concatenate([te for _, te in folds]))
            assert np.array_equal(seen, np.arange(n))
            for tr, te in folds:
                assert np.intersect1d(tr, te).size == 0
                assert tr.size + te.size == n

    def test_deterministic(self):
        a = kfold_split(20, CvConfig(folds=4, seed=3))
        b = kfold_split(20, CvConfig(folds=4, seed=3))
        for (tr1, te1), (tr2, te2) in zip(a, b):
            assert np.array_equal(tr1, tr2) and np.array_equal(te1, te2)

    def test_no_shuffle_is_contiguous(self):
        folds = kfold_split(6, CvConfig(folds=3, shuffle=False))
        assert_allclose(folds[0][1], [0, 1])

    def test_too_many_folds(self):
        with pytest.raises(TooManyFoldsError):
            kfold_split(3, CvConfig(folds=4))

    def test_min_folds(self):
        with pytest.raises(RelfError):
            CvConfig(folds=1)


class TestOls:
    def test_exact_line(self):
        ds = Dataset(X=[[1.0], [2.0]], y=[2.0, 4.0])
        assert_allclose(ols_fit(ds), [2.0], rtol=1e-9)

    def test_large_ridge_shrinks(self):
        ds = Dataset(X=[[1.0], [2.0]], y=[2.0, 4.0])
        assert abs(ols_fit(ds, ridge_alpha=1e12)[0]) < 1e-9

    def test_outlier_pull_matches_oracle(self):
        ds = Dataset(X=[[1.0], [2.0], [3.0]], y=[1.0, 2.0, 10.0])
        w = ols_fit(ds, ridge_alpha=1e-12)
        assert_allclose(w, ols_oracle(ds.X, ds.y), rtol=1e-9)
        assert_allclose(w[0], 35.0 / 14.0, rtol=1e-9)  # sum(xy)/sum(x^2)


class TestIncreaseRatio:
    def test_examples(self):
        assert increase_ratio(1.0, 1.0) == 1.0
        assert_allclose(increase_ratio(1.0016 * 2.78, 2.78), 1.0016, rtol=1e-12)

    def test_zero_clean(self):
        with pytest.raises(ZeroCleanBaselineError):
            increase_ratio(1.0, 0.0)


class TestParseMethod:
    def test_variants(self):
        assert parse_method("ols").label == "ols"
        assert parse_method("ridge:0.5").ridge_alpha == 0.5
        m = parse_method("relf:welsch:1.5,l1l2")
        assert m.ensemble.m == 2
        default = parse_method("relf")
        assert [s.kind for s in default.ensemble.losses] == ["welsch", "l1l2", "huber"]
        irls = parse_method("irls:huber:0.5")
        assert irls.ensemble.m == 1
        assert irls.ensemble.losses[0].scale == 0.5

    def test_errors(self):
        with pytest.raises(DataError):
            parse_method("boosting")
        with pytest.raises(DataError):
            parse_method("ridge:abc")
        with pytest.raises(DataError):
            parse_method("irls:")
        with pytest.raises(DataError):
            parse_method("irls:welsch,l1l2")
        with pytest.raises(DataError):
            parse_method("ols:1")


class TestCrossValidate:
    def test_noise_free_line_is_exact(self):
        ds = synth_line()
        for method in (LeastSquaresMethod(),
                       RelfMethod(ensemble=parse_ensemble("welsch,l1l2"))):
            res = cross_validate(ds, method, CvConfig(folds=5),
                                 scale_features=False, intercept=False)
            assert np.all(res.fold_mae <= 1e-6)

    def test_constant_labels_with_intercept(self):
        rng = np.random.default_rng(2)
        ds = Dataset(X=rng.standard_normal((30, 2)), y=np.full(30, 7.0))
        res = cross_validate(ds, LeastSquaresMethod(), CvConfig(folds=5),
                             intercept=True)
        assert res.mean_mae <= 1e-6

    def test_gaussian_toy_matches_noise_level(self):
        # held-out MAE approaches E|z| for the injected N(0,1) noise
        ds = synth_line(NoiseConfig(mode=NOISE_GAUSSIAN, gaussian_std=1.0, seed=4))
        method = RelfMethod(ensemble=parse_ensemble("welsch:1.5,l1l2"))
        res = cross_validate(ds, method, CvConfig(folds=10, seed=4),
                             scale_features=False, intercept=False)
        assert abs(res.mean_mae - mc_mean_abs_gaussian(1.0)) <= 0.15

    def test_deterministic(self):
        ds = synth_line(NoiseConfig(mode=NOISE_GAUSSIAN, seed=1))
        method = RelfMethod(ensemble=parse_ensemble("welsch,l1l2"))
        cont = NoiseConfig(mode=NOISE_OUTLIER, outlier_fraction=0.3, seed=5)
        a = cross_validate(ds, method, CvConfig(folds=5), contamination=cont)
        b = cross_validate(ds, method, CvConfig(folds=5), contamination=cont)
        assert np.array_equal(a.fold_mae, b.fold_mae)

    def test_zero_contamination_equals_clean(self):
        ds = synth_line(NoiseConfig(mode=NOISE_GAUSSIAN, seed=3))
        cont = NoiseConfig(mode=NOISE_OUTLIER, outlier_fraction=0.0, seed=5)
        clean = cross_validate(ds, LeastSquaresMethod(), CvConfig(folds=5))
        dirty = cross_validate(ds, LeastSquaresMethod(), CvConfig(folds=5),
                               contamination=cont)
        assert np.array_equal(clean.fold_mae, dirty.fold_mae)

    def test_contamination_hurts_ols(self):
        ds = synth_line(NoiseConfig(mode=NOISE_GAUSSIAN, seed=7))
        cont = NoiseConfig(mode=NOISE_OUTLIER, outlier_fraction=0.3,
                           outlier_magnitude=5.0, seed=7)
        clean = cross_validate(ds, LeastSquaresMethod(), CvConfig(folds=5),
                               scale_features=False, intercept=False)
        dirty = cross_validate(ds, LeastSquaresMethod(), CvConfig(folds=5),
                               scale_features=False, intercept=False,
                               contamination=cont)
        assert dirty.mean_mae > 2.0 * clean.mean_mae


def _toy_manifest(tmp_path, extra_datasets=()):
    return {
        "cv": {"folds": 5, "seed": 0},
        "solver": {"max_iters": 30},
        "contamination_levels": [0.0, 0.3],
        "scale_features": False,
        "intercept": False,
        "datasets": [
            {"name": "toy", "format": "synthetic", "noise_mode": "gaussian",
             "gaussian_std": 1.0, "seed": 0},
            *extra_datasets,
        ],
        "methods": ["relf:welsch,l1l2,huber", "ols"],
    }


class TestRunBenchmark:
    def test_grid_shape(self, tmp_path):
        report = run_benchmark(_toy_manifest(tmp_path), base_dir=tmp_path)
        assert len(report.cells) == 4  # 1 dataset x 2 methods x 2 levels
        assert len(report.ratios) == 2
        assert report.ok
        relf_conv = [c for c in report.convergence if c["method"].startswith("relf")]
        assert len(relf_conv) == 1
        assert relf_conv[0]["error"] is None
        assert relf_conv[0]["decrease_ratio"] >= 0.0

    def test_empty_manifest(self):
        report = run_benchmark({})
        assert report.cells == [] and report.ok

    def test_minimal_single_cell(self):
        report = run_benchmark({
            "cv": {"folds": 5},
            "contamination_levels": [0.0],
            "datasets": [{"name": "toy", "format": "synthetic",
                          "noise_mode": "gaussian", "seed": 0}],
            "methods": ["ols"],
        })
        assert len(report.cells) == 1 and report.ratios == []
        assert report.cells[0]["mae"] > 0.0

    def test_bad_dataset_contained(self, tmp_path):
        manifest = _toy_manifest(tmp_path, extra_datasets=(
            {"name": "missing", "format": "csv", "path": "nope.csv",
             "label_column": "y"},))
        report = run_benchmark(manifest, base_dir=tmp_path)
        assert not report.ok
        bad = [c for c in report.cells if c["dataset"] == "missing"]
        good = [c for c in report.cells if c["dataset"] == "toy"]
        assert len(bad) == 4 and all(c["error"] for c in bad)
        assert len(good) == 4 and all(c["error"] is None for c in good)

    def test_csv_dataset_and_determinism(self, tmp_path):
        data = tmp_path / "line.csv"
        rows = ["x,y"] + [f"{i},{2 * i + (i % 3)}" for i in range(30)]
        data.write_text("\n".join(rows) + "\n")
        manifest = _toy_manifest(tmp_path, extra_datasets=(
            {"name": "line", "format": "csv", "path": "line.csv",
             "label_column": "y"},))
        a = run_benchmark(manifest, base_dir=tmp_path)
        b = run_benchmark(manifest, base_dir=tmp_path)
        assert a.csv_text() == b.csv_text()
        assert a.ok

    def test_report_files(self, tmp_path):
        report = run_benchmark(_toy_manifest(tmp_path), base_dir=tmp_path)
        json_path, csv_path = report.write(tmp_path / "out")
        payload = json.loads(json_path.read_text())
        assert payload["schema"] == "relf.report/1"
        assert len(payload["cells"]) == 4
        header = csv_path.read_text().splitlines()[0]
        assert header.split(",")[:3] == ["dataset", "method", "contamination"]

    def test_manifest_validation(self):
        with pytest.raises(DataError):
            run_benchmark({"datasets": "oops"})
        with pytest.raises(DataError):
            run_benchmark({"datasets": [{"format": "csv"}], "methods": []})
        with pytest.raises(DataError):
            run_benchmark({"contamination_levels": [2.0]})
        with pytest.raises(DataError):
            run_benchmark({"datasets": [], "methods": ["gradient-descent"]})

    def test_ratio_direction_on_toy(self, tmp_path):
        report = run_benchmark(_toy_manifest(tmp_path), base_dir=tmp_path)
        by_method = {r["method"]: r["increase_ratio"] for r in report.ratios}
        assert by_method["relf:welsch,l1l2,huber"] < by_method["ols"]
