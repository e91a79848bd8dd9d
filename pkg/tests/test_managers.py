"""
Test reading and writing graphs, partitions, signals, bases and reports.
"""
import json

import numpy as np
import pandas as pd
import pytest

from crud.basis_manager import load_basis, save_basis
from crud.graph_manager import EDGES_FILE, load_graph, save_graph
from crud.partition_manager import read_partition, read_signal, write_partition
from crud.point_manager import read_point, read_points, write_points
from crud.report_manager import emit_report, load_report, load_report_rows, write_predictions, write_update_delta
from experiments.sphere import run_sphere_convergence
from lagrange.basis import compute_basis
from lagrange.exceptions import DatasetError, InvalidInputError
from lagrange.neighborhoods import neighborhoods
from models import Partition
from schemas import (
    ExperimentConfig,
    NewVertex,
    SphereConvergenceReport,
    SphereConvergenceRow,
    TimingReport,
    TimingRow,
    UpdateDelta,
)


@pytest.mark.unit
def test_graph_round_trip(grid_graph, tmp_path):
    """Test a saved graph loads back with the same edges, ids and hash."""
    save_graph(grid_graph, tmp_path / "graph")
    loaded = load_graph(tmp_path / "graph")

    assert loaded.n == grid_graph.n
    assert loaded.graph_hash() == grid_graph.graph_hash()
    assert loaded.theta == grid_graph.theta
    np.testing.assert_array_equal(loaded.points, grid_graph.points)
    np.testing.assert_array_equal(loaded.ids, grid_graph.ids)


@pytest.mark.unit
def test_graph_hash_mismatch(grid_graph, tmp_path):
    out = save_graph(grid_graph, tmp_path / "graph")
    edges = pd.read_csv(out / EDGES_FILE)
    edges.loc[0, "length"] += 0.5
    edges.to_csv(out / EDGES_FILE, index=False)
    with pytest.raises(DatasetError):
        load_graph(out)


@pytest.mark.unit
def test_graph_missing_files(tmp_path):
    with pytest.raises(DatasetError):
        load_graph(tmp_path / "nowhere")


@pytest.mark.unit
def test_basis_round_trip(grid_graph, grid_partition, grid_laplacian, tmp_path):
    b = compute_basis(grid_laplacian, grid_partition, neighborhoods(grid_graph, grid_partition, 2.0),
                      graph_hash=grid_graph.graph_hash())
    save_basis(b, tmp_path / "basis")
    loaded = load_basis(tmp_path / "basis")

    assert loaded.mode == "local"
    assert loaded.graph_hash == grid_graph.graph_hash()
    assert (loaded.matrix != b.matrix).nnz == 0
    np.testing.assert_array_equal(loaded.centers, b.centers)
    np.testing.assert_array_equal(loaded.radii, b.radii)
    for v in b.centers:
        np.testing.assert_array_equal(loaded.support(int(v)), b.support(int(v)))
    assert not loaded.dirichlet


@pytest.mark.unit
def test_dirichlet_flag_round_trip(grid_graph, grid_partition, grid_laplacian, tmp_path):
    b = compute_basis(grid_laplacian, grid_partition, neighborhoods(grid_graph, grid_partition, 1.5, dirichlet=True))
    save_basis(b, tmp_path / "basis")
    assert json.loads((tmp_path / "basis" / "basis.json").read_text())["dirichlet"] is True
    assert load_basis(tmp_path / "basis").dirichlet


@pytest.mark.unit
def test_lagrange_basis_has_no_supports(grid_partition, grid_laplacian, tmp_path):
    save_basis(compute_basis(grid_laplacian, grid_partition, "global"), tmp_path)
    meta = json.loads((tmp_path / "basis.json").read_text())
    assert meta["mode"] == "lagrange"
    assert meta["radii"] is None and meta["supports"] is None
    assert load_basis(tmp_path).radii is None


@pytest.mark.unit
def test_partition_round_trip(grid_partition, tmp_path):
    path = tmp_path / "partition.csv"
    write_partition(grid_partition, path)
    loaded = read_partition(path, n=36)
    np.testing.assert_array_equal(loaded.known, grid_partition.known)
    np.testing.assert_array_equal(loaded.unknown, grid_partition.unknown)


@pytest.mark.unit
def test_partition_errors(tmp_path):
    path = tmp_path / "partition.csv"
    pd.DataFrame({"vertex": [0, 1], "status": ["known", "maybe"]}).to_csv(path, index=False)
    with pytest.raises(DatasetError):
        read_partition(path)

    pd.DataFrame({"vertex": [0, 1], "status": ["known", "unknown"]}).to_csv(path, index=False)
    with pytest.raises(InvalidInputError):
        read_partition(path, n=3)


@pytest.mark.unit
def test_read_signal_keeps_truth(tmp_path):
    p = Partition.from_unknown(4, [1])
    path = tmp_path / "signal.csv"
    pd.DataFrame({"vertex": [0, 1, 2, 3], "value": [1.0, 2.0, 3.0, 4.0]}).to_csv(path, index=False)
    d = read_signal(path, p)
    np.testing.assert_array_equal(d.known, [0, 2, 3])
    np.testing.assert_array_equal(d.values, [1.0, 3.0, 4.0])
    np.testing.assert_array_equal(d.truth_vertices, [1])


@pytest.mark.unit
def test_read_signal_missing_known(tmp_path):
    path = tmp_path / "signal.csv"
    pd.DataFrame({"vertex": [0], "value": [1.0]}).to_csv(path, index=False)
    with pytest.raises(DatasetError):
        read_signal(path, Partition.from_unknown(3, [1]))


@pytest.mark.unit
def test_points_round_trip(grid_cloud, tmp_path):
    path = tmp_path / "points.csv"
    write_points(grid_cloud, path)
    loaded = read_points(path)
    np.testing.assert_array_equal(loaded.points, grid_cloud.points)
    np.testing.assert_array_equal(loaded.ids, grid_cloud.ids)


@pytest.mark.unit
def test_points_non_numeric(tmp_path):
    path = tmp_path / "points.csv"
    pd.DataFrame({"id": [0, 1], "x0": ["a", "b"]}).to_csv(path, index=False)
    with pytest.raises(DatasetError):
        read_points(path)


@pytest.mark.unit
def test_read_single_point(tmp_path):
    path = tmp_path / "point.csv"
    pd.DataFrame({"id": [500], "x0": [0.25], "x1": [-1.5]}).to_csv(path, index=False)
    point, point_id = read_point(path)
    np.testing.assert_array_equal(point, [0.25, -1.5])
    assert point_id == 500

    pd.DataFrame({"x0": [0.25], "x1": [-1.5]}).to_csv(path, index=False)
    assert read_point(path)[1] is None


@pytest.mark.unit
def test_read_point_needs_one_row(tmp_path):
    path = tmp_path / "point.csv"
    pd.DataFrame({"x0": [0.25, 1.0], "x1": [-1.5, 2.0]}).to_csv(path, index=False)
    with pytest.raises(DatasetError):
        read_point(path)


@pytest.mark.unit
class TestReports:
    def sample_report(self):
        return SphereConvergenceReport(seed=3, rows=[
            SphereConvergenceRow(inner_multiplier=2.0, outer_multiplier=4.0, inner_radius=0.1, outer_radius=0.2,
                                 lagrange_mse=0.125, local_mse=0.25, max_inside_discrepancy=1e-3,
                                 max_outside_discrepancy=2e-3, max_discrepancy=2e-3,
                                 lagrange_sparsity=1.0, local_sparsity=0.3),
            SphereConvergenceRow(inner_multiplier=3.0, outer_multiplier=4.0, status="failed", error="disconnected"),
        ])

    def test_csv_rows_round_trip(self, tmp_path):
        report = self.sample_report()
        path = emit_report(report, "csv", tmp_path / "out" / "sphere.csv")
        assert load_report_rows(path, SphereConvergenceRow) == report.rows

    def test_json_round_trip(self, tmp_path):
        report = self.sample_report()
        path = emit_report(report, "json", tmp_path / "sphere.json")
        assert load_report(path, SphereConvergenceReport) == report

    def test_empty_report_writes_header(self, tmp_path):
        path = emit_report(TimingReport(seed=0), "csv", tmp_path / "timing.csv")
        assert path.read_text() == ",".join(TimingRow.model_fields) + "\n"

    def test_unsupported_format(self, tmp_path):
        with pytest.raises(InvalidInputError):
            emit_report(TimingReport(seed=0), "xml", tmp_path / "timing.xml")

    def test_same_seed_same_bytes(self, tmp_path):
        cfg = ExperimentConfig(n_points=80, inner_multipliers=[3.0], outer_multipliers=[4.0, 6.0], sample_centers=5)
        first = emit_report(run_sphere_convergence(cfg), "csv", tmp_path / "a.csv")
        second = emit_report(run_sphere_convergence(cfg), "csv", tmp_path / "b.csv")
        assert first.read_bytes() == second.read_bytes()


@pytest.mark.unit
def test_write_predictions(tmp_path):
    path = write_predictions(tmp_path / "predictions.csv", np.array([0.0, 1.5, 2.0]), np.array([1, 2]),
                             ids=np.array([10, 11, 12]), truth=np.array([1.0, 2.0]))
    df = pd.read_csv(path)
    assert list(df.columns) == ["vertex_id", "predicted", "truth", "sq_error"]
    assert df["vertex_id"].tolist() == [11, 12]
    np.testing.assert_allclose(df["sq_error"], [0.25, 0.0])


@pytest.mark.unit
def test_write_update_delta(tmp_path):
    delta = UpdateDelta(
        new_vertex=NewVertex(id=36, index=36, coordinates=[0.5, 0.5], status="known"),
        new_edges=[(3, 0.7), (4, 0.9)],
        affected_centers=[3, 36],
    )
    path = write_update_delta(delta, tmp_path / "delta.json")
    assert UpdateDelta.model_validate_json(path.read_text()) == delta
    assert json.loads(path.read_text())["affected_count"] == 2
