"""
Test feature importance, fold construction, the energy table reader and the
cross-validated regression experiment.
"""
import numpy as np
import pandas as pd
import pytest

from config import settings
from crud.point_manager import read_energy_table
from experiments.energy import (
    ENERGY_FEATURES,
    connected_energy_graph,
    cv_folds,
    feature_importance,
    fold_signal,
    merge_feature_rows,
    nearest_neighbor_loo_mse,
    run_energy_cv,
)
from lagrange.exceptions import DatasetError, InvalidInputError
from schemas import ExperimentConfig, Metric


@pytest.fixture
def cv_config():
    return ExperimentConfig(experiment="energy-cv", folds=3, repetitions=2, outer_radii=[3.0, 1e6], seed=11)


@pytest.mark.unit
class TestFeatureImportance:
    def test_tied_neighbors_averaged(self):
        mse = nearest_neighbor_loo_mse(np.array([0.0, 1.0, 2.0]), np.array([0.0, 10.0, 0.0]))
        assert mse == pytest.approx(100.0)

    def test_identical_copies_share_weight(self, rng):
        x = rng.uniform(0, 1, size=40)
        result = feature_importance(np.column_stack([x, x]), 2 * x)
        np.testing.assert_allclose(result.weights, [0.5, 0.5])

    def test_feature_equal_to_target_dominates(self, rng):
        x = np.repeat(np.arange(20.0), 2)
        noise = rng.normal(size=40)
        result = feature_importance(np.column_stack([x, noise]), x)
        assert result.mse[0] == pytest.approx(1e-12)
        assert result.weights[0] > 0.999

    def test_informative_beats_noise(self, rng):
        x = rng.uniform(0, 1, size=60)
        noise = rng.uniform(0, 1, size=60)
        y = 3 * x + rng.normal(0, 0.01, size=60)
        result = feature_importance(np.column_stack([x, noise]), y)
        assert result.weights[0] > result.weights[1]
        assert sum(result.weights) == pytest.approx(1.0)

    def test_constant_feature_flagged(self, rng):
        x = rng.uniform(0, 1, size=30)
        X = pd.DataFrame({"a": x, "b": np.full(30, 4.0), "c": rng.uniform(0, 1, size=30)})
        result = feature_importance(X, x)
        assert result.features == ["a", "b", "c"]
        assert result.zero_variance == ["b"]
        assert result.mse[1] is None
        assert result.weights[1] == pytest.approx(min(result.weights[0], result.weights[2]))

    def test_all_constant_rejected(self):
        with pytest.raises(InvalidInputError):
            feature_importance(np.ones((10, 2)), np.arange(10.0))


@pytest.mark.unit
class TestFolds:
    def test_every_row_tested_once(self, rng):
        folds = cv_folds(23, 5, rng)
        np.testing.assert_array_equal(np.sort(np.concatenate(folds)), np.arange(23))
        assert sorted(len(f) for f in folds) == [4, 4, 5, 5, 5]

    def test_same_seed_same_folds(self):
        a = cv_folds(50, 10, np.random.default_rng([3, 0]))
        b = cv_folds(50, 10, np.random.default_rng([3, 0]))
        assert all(np.array_equal(x, y) for x, y in zip(a, b))

    def test_too_many_folds(self, rng):
        with pytest.raises(InvalidInputError):
            cv_folds(3, 5, rng)

    def test_merge_duplicates(self):
        X = np.array([[1.0, 2.0], [0.0, 1.0], [1.0, 2.0]])
        vertices, row_vertex = merge_feature_rows(X)
        assert vertices.shape == (2, 2)
        np.testing.assert_array_equal(vertices[row_vertex], X)
        assert row_vertex[0] == row_vertex[2]

    def test_merge_disabled(self):
        X = np.array([[1.0, 2.0], [1.0, 2.0]])
        vertices, row_vertex = merge_feature_rows(X, merge=False)
        assert vertices.shape == (2, 2)
        np.testing.assert_array_equal(row_vertex, [0, 1])

    def test_vertices_with_test_rows_are_unknown(self):
        """Test a shared vertex with one test row drops its training rows from the signal."""
        row_vertex = np.array([0, 0, 1, 1, 2, 2, 3])
        y = np.array([1.0, 2.0, 3.0, 5.0, 7.0, 9.0, 4.0])
        train, test = np.array([0, 2, 3, 4, 6]), np.array([1, 5])
        p, signal = fold_signal(y, row_vertex, 4, train, test)
        np.testing.assert_array_equal(p.known, [1, 3])
        np.testing.assert_allclose(signal.values, [4.0, 4.0])
        assert not p.known_mask[row_vertex[test]].any()

    def test_fold_without_known_vertex(self):
        with pytest.raises(InvalidInputError):
            fold_signal(np.ones(4), np.array([0, 0, 1, 1]), 2, np.array([0, 2]), np.array([1, 3]))


@pytest.mark.unit
class TestConnectedEnergyGraph:
    def test_smallest_connecting_epsilon(self):
        points = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [100.0, 0.0]])
        g, eps = connected_energy_graph(points, Metric.weighted_l1([0.5, 0.5]), [0.0, 0.1, 0.2])
        assert eps == 0.1
        assert g.n == 4

    def test_falls_back_to_spanning_tree_radius(self):
        points = np.array([[0.0, 0.0], [1.0, 0.0], [100.0, 0.0], [101.0, 0.0]])
        g, eps = connected_energy_graph(points, Metric.weighted_l1([0.5, 0.5]), [0.0, 0.5, 1.0])
        assert eps == pytest.approx(98.0)
        assert g.edge_count == 3


@pytest.mark.unit
class TestReadEnergyTable:
    def test_canonical_names(self, energy_csv):
        table = read_energy_table(energy_csv, required=ENERGY_FEATURES + ["heating_load"])
        assert list(table.columns) == ENERGY_FEATURES + ["heating_load"]
        assert len(table) == 120

    def test_column_override(self, energy_csv, tmp_path):
        df = pd.read_csv(energy_csv).rename(columns={"X1": "compactness"})
        path = tmp_path / "renamed.csv"
        df.to_csv(path, index=False)
        table = read_energy_table(path, {"relative_compactness": "compactness"}, ["relative_compactness"])
        np.testing.assert_allclose(table["relative_compactness"], df["compactness"])

    def test_missing_column(self, energy_csv, tmp_path):
        path = tmp_path / "missing.csv"
        pd.read_csv(energy_csv).drop(columns=["Y2"]).to_csv(path, index=False)
        with pytest.raises(DatasetError):
            read_energy_table(path)

    def test_non_numeric_column(self, energy_csv, tmp_path):
        df = pd.read_csv(energy_csv)
        df["Y1"] = "n/a"
        path = tmp_path / "text.csv"
        df.to_csv(path, index=False)
        with pytest.raises(DatasetError):
            read_energy_table(path)


@pytest.mark.integration
class TestEnergyCV:
    def test_report_shape(self, energy_csv, cv_config):
        report = run_energy_cv(cv_config, str(energy_csv))
        assert [(row.target, row.outer_radius) for row in report.rows] == [
            ("heating_load", 3.0), ("heating_load", 1e6), ("cooling_load", 3.0), ("cooling_load", 1e6),
        ]
        assert len(report.folds) == 2 * 2 * 3 * 2
        for row in report.rows:
            assert row.lagrange_mean > 0 and row.local_mean > 0
            assert row.lagrange_std >= 0 and row.local_std >= 0
        for weights in report.feature_weights.values():
            assert len(weights) == len(ENERGY_FEATURES)
            assert sum(weights) == pytest.approx(1.0)

    def test_huge_radius_matches_lagrange(self, energy_csv, cv_config):
        report = run_energy_cv(cv_config, str(energy_csv))
        for record in report.folds:
            if record.outer_radius == 1e6:
                assert record.local_mse == pytest.approx(record.lagrange_mse, rel=1e-6, abs=1e-9)
        for row in report.rows:
            if row.outer_radius == 1e6:
                assert row.local_mean == pytest.approx(row.lagrange_mean, rel=1e-6)

    def test_same_folds_for_every_radius(self, energy_csv, cv_config):
        report = run_energy_cv(cv_config, str(energy_csv))
        by_fold = {}
        for record in report.folds:
            key = (record.target, record.repetition, record.fold)
            by_fold.setdefault(key, set()).add(record.lagrange_mse)
        assert all(len(values) == 1 for values in by_fold.values())

    def test_deterministic_and_thread_independent(self, energy_csv, cv_config):
        serial = run_energy_cv(cv_config, str(energy_csv))
        threaded = run_energy_cv(cv_config.model_copy(update={"workers": 3}), str(energy_csv))
        again = run_energy_cv(cv_config, str(energy_csv))
        assert serial.rows == again.rows and serial.folds == again.folds
        assert serial.rows == threaded.rows

    def test_repeated_feature_vectors_are_predicted(self, energy_csv, cv_config, tmp_path):
        """Test every test row of a table with each feature vector twice lands on an unknown vertex."""
        df = pd.read_csv(energy_csv)
        doubled = pd.concat([df, df.assign(Y1=df["Y1"] + 0.5, Y2=df["Y2"] - 0.5)], ignore_index=True)
        X = doubled[["X1", "X2", "X3", "X4", "X5", "X6", "X7"]].to_numpy(dtype=float)
        vertices, row_vertex = merge_feature_rows(X)
        folds = cv_folds(len(doubled), 3, np.random.default_rng([11, 0]))
        for test in folds:
            train = np.setdiff1d(np.arange(len(doubled)), test)
            p, _ = fold_signal(doubled["Y1"].to_numpy(), row_vertex, vertices.shape[0], train, test)
            assert not p.known_mask[row_vertex[test]].any()

        path = tmp_path / "doubled.csv"
        doubled.to_csv(path, index=False)
        report = run_energy_cv(cv_config, str(path))
        for row in report.rows:
            assert np.isfinite(row.lagrange_mean) and row.lagrange_mean > 0


@pytest.mark.slow
@pytest.mark.skipif(not settings.energy_dataset_path, reason="ENERGY_DATASET_PATH not set")
class TestEnergyDataset:
    def test_reduced_smoke(self):
        cfg = ExperimentConfig(experiment="energy-cv", folds=5, repetitions=5, outer_radii=[3.0, 6.0])
        report = run_energy_cv(cfg, settings.energy_dataset_path)
        assert len(report.rows) == 4
        for row in report.rows:
            assert np.isfinite(row.lagrange_mean) and np.isfinite(row.local_mean)

    def test_full_cross_validation(self):
        report = run_energy_cv(ExperimentConfig(experiment="energy-cv"), settings.energy_dataset_path)
        assert len(report.rows) == 12

        for record in report.folds:
            if record.outer_radius >= 6:
                assert abs(record.local_mse - record.lagrange_mse) < 1e-6

        rows = {(row.target, row.outer_radius): row for row in report.rows}
        for radius in ExperimentConfig().outer_radii:
            assert 0.17 <= rows[("heating_load", radius)].lagrange_mean <= 0.28
            assert 1.1 <= rows[("cooling_load", radius)].lagrange_mean <= 2.1
        assert rows[("heating_load", 3.0)].local_mean > 5 * rows[("heating_load", 5.0)].local_mean
