"""
Test graph balls, Dirichlet closure and the advisory assumption checks.
"""
import numpy as np
import pytest

from lagrange.assumptions import neighbor_bounds, validate_assumptions
from lagrange.graph import graph_from_edges
from lagrange.neighborhoods import dirichlet_closure, graph_ball, neighborhoods
from models import Partition


@pytest.mark.unit
class TestGraphBall:
    def test_small_radius_gives_center_only(self, path_graph):
        nb = graph_ball(path_graph, 2, 0.5)
        np.testing.assert_array_equal(nb.members, [2])
        np.testing.assert_array_equal(nb.boundary, [2])

    def test_path_end(self, path_graph):
        """Test radius 2 from the left end reaches the first three vertices."""
        nb = graph_ball(path_graph, 0, 2.0)
        np.testing.assert_array_equal(nb.members, [0, 1, 2])
        np.testing.assert_array_equal(nb.boundary, [2])

    def test_uses_graph_distance(self):
        """Test a long direct edge loses to a shorter two-hop path."""
        g = graph_from_edges(3, [(0, 1, 0.4), (1, 2, 0.4), (0, 2, 5.0)])
        assert graph_ball(g, 0, 1.0).contains(2)

    def test_whole_graph(self, path_graph):
        nb = graph_ball(path_graph, 1, 10.0)
        np.testing.assert_array_equal(nb.members, np.arange(5))
        assert nb.boundary.size == 0
        assert nb.interior.size == 5

    def test_partition_split(self, path_graph, alternating_partition):
        nb = graph_ball(path_graph, 2, 1.0, alternating_partition)
        np.testing.assert_array_equal(nb.known, [2])
        np.testing.assert_array_equal(nb.unknown, [1, 3])

    def test_one_ball_per_known_center(self, grid_graph, grid_partition):
        balls = neighborhoods(grid_graph, grid_partition, 2.5)
        assert [nb.center for nb in balls] == grid_partition.known.tolist()
        for nb in balls:
            assert nb.contains(nb.center)
            assert np.array_equal(nb.members, graph_ball(grid_graph, nb.center, 2.5).members)

    def test_monotone_in_radius(self, rng, make_random_graph):
        for _ in range(10):
            g = make_random_graph(rng, int(rng.integers(5, 40)))
            v = int(rng.integers(g.n))
            balls = [set(graph_ball(g, v, float(r)).members.tolist()) for r in np.sort(rng.uniform(0.1, 5.0, size=4))]
            assert all(smaller <= larger for smaller, larger in zip(balls, balls[1:]))


@pytest.mark.unit
class TestDirichletClosure:
    def test_boundary_becomes_known(self, grid_graph, grid_partition):
        for nb in neighborhoods(grid_graph, grid_partition, 1.5):
            closed = dirichlet_closure(grid_graph, grid_partition, nb)
            assert np.all(grid_partition.known_mask[closed.boundary])
            assert np.all(np.isin(nb.members, closed.members))

    def test_flag_on_neighborhoods(self, grid_graph, grid_partition):
        balls = neighborhoods(grid_graph, grid_partition, 1.5, dirichlet=True)
        report = validate_assumptions(grid_graph, grid_partition, balls)
        assert report.dirichlet_ok


@pytest.mark.unit
class TestAssumptions:
    def test_bipartite_passes_unknown_edge_check(self, path_graph, alternating_partition):
        report = validate_assumptions(path_graph, alternating_partition, [])
        assert report.unknown_edges_ok
        assert report.edge_bound_ok

    def test_adjacent_unknowns_listed(self, path_graph):
        p = Partition.from_unknown(5, [1, 2])
        report = validate_assumptions(path_graph, p, [])
        assert not report.unknown_edges_ok
        assert report.unknown_edges == [(1, 2)]
        assert not report.all_hold

    def test_short_edge_flagged(self):
        g = graph_from_edges(3, [(0, 1, 0.2), (1, 2, 1.0)])
        report = validate_assumptions(g, Partition.from_unknown(3, [1]), [])
        assert not report.edge_bound_ok
        assert report.short_edges == [(0, 1, 0.2)]

    def test_unknown_boundary_reported(self, path_graph, alternating_partition):
        nb = graph_ball(path_graph, 2, 1.0, alternating_partition)
        report = validate_assumptions(path_graph, alternating_partition, [nb])
        assert not report.dirichlet_ok
        assert sorted(report.dirichlet_violations) == [(2, 1), (2, 3)]

    def test_neighbor_bounds(self, path_graph, alternating_partition, star_graph):
        assert neighbor_bounds(path_graph, alternating_partition) == (2, 2, 2)
        assert neighbor_bounds(star_graph, Partition.from_unknown(4, [0])) == (3, 3, 1)
