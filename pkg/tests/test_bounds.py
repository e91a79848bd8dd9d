"""
Test the inf-norm inverse bound, the block identity for the local/global
difference and the bounds on its two factors.
"""
import numpy as np
import pytest

from lagrange.basis import compute_basis, local_lagrange_column
from lagrange.bounds import (
    block_partition,
    check_inf_norm_bound,
    decay_slope,
    lemma_bounds,
    predicted_local_difference,
    random_spd,
)
from lagrange.exceptions import InvalidInputError, NotPositiveDefiniteError
from lagrange.assumptions import validate_assumptions
from lagrange.laplacian import normalized_laplacian
from lagrange.neighborhoods import dirichlet_closure, graph_ball
from models import Partition


def independent_unknowns(g, rng) -> Partition:
    """Random independent set of unknowns, so no edge joins two unknown vertices."""
    unknown = np.zeros(g.n, dtype=bool)
    for v in rng.permutation(g.n):
        if rng.random() < 0.6 and not unknown[g.neighbors(int(v))].any():
            unknown[v] = True
    if not unknown.any():
        unknown[0] = True
    return Partition.from_mask(~unknown)


def constructed_instances(rng, make_random_graph, count=10):
    """(graph, partition, Dirichlet neighborhood) triples with an unknown vertex inside the ball."""
    instances = []
    while len(instances) < count:
        g = make_random_graph(rng, int(rng.integers(20, 60)), extra_edges=int(rng.integers(10, 40)))
        p = independent_unknowns(g, rng)
        v = int(rng.choice(p.known))
        nb = dirichlet_closure(g, p, graph_ball(g, v, float(rng.uniform(0.8, 2.0)), p))
        if nb.unknown.size and nb.size < g.n:
            instances.append((g, p, nb))
    return instances


@pytest.mark.unit
class TestInfNormBound:
    def test_identity(self):
        result = check_inf_norm_bound(np.eye(4))
        assert result.lhs == pytest.approx(1.0)
        assert result.rhs == pytest.approx(1.5)
        assert result.holds

    def test_two_by_two(self):
        result = check_inf_norm_bound(np.array([[2.0, 1.0], [1.0, 2.0]]))
        assert result.lambda_min == pytest.approx(1.0)
        assert result.lhs == pytest.approx(1.0)
        assert result.rhs == pytest.approx((np.sqrt(2) + 1) / 2)
        assert result.holds

    def test_random_spd_matrices(self, rng):
        for _ in range(1000):
            n = int(rng.integers(2, 51))
            result = check_inf_norm_bound(random_spd(n, rng))
            assert result.holds, f"n={n}: {result.lhs} > {result.rhs}"

    def test_indefinite_rejected(self):
        with pytest.raises(NotPositiveDefiniteError):
            check_inf_norm_bound(np.array([[1.0, 2.0], [2.0, 1.0]]))

    def test_nonsymmetric_rejected(self):
        with pytest.raises(InvalidInputError):
            check_inf_norm_bound(np.array([[1.0, 0.5], [0.0, 1.0]]))


@pytest.mark.unit
class TestBlockIdentity:
    def test_block_sets_cover_vertices(self, rng, make_random_graph):
        g, p, nb = constructed_instances(rng, make_random_graph, count=1)[0]
        blocks = block_partition(normalized_laplacian(g), p, nb.members)
        assert sorted(np.concatenate(blocks.sets).tolist()) == list(range(g.n))
        np.testing.assert_array_equal(blocks.block(1, 1), np.eye(blocks.sets[0].size))

    def test_constructed_graphs(self, rng, make_random_graph):
        for g, p, nb in constructed_instances(rng, make_random_graph):
            report = validate_assumptions(g, p, [nb])
            assert report.unknown_edges_ok and report.dirichlet_ok

            L = normalized_laplacian(g)
            full = compute_basis(L, p, "global")
            chi = full.column(nb.center)
            chi_bar = local_lagrange_column(L, p, nb).toarray().ravel()

            inside_unknown = block_partition(L, p, nb.members).sets[0]
            predicted = predicted_local_difference(L, p, nb, chi)
            np.testing.assert_allclose(predicted, chi[inside_unknown] - chi_bar[inside_unknown], atol=1e-8)

    def test_lemma_bounds(self, rng, make_random_graph):
        for g, p, nb in constructed_instances(rng, make_random_graph):
            bounds = lemma_bounds(normalized_laplacian(g), p, nb, g)
            assert bounds.inverse_holds, bounds
            assert bounds.coupling_holds, bounds


@pytest.mark.unit
class TestDecaySlope:
    def test_exponential(self):
        radii = np.array([2.0, 4.0, 6.0, 8.0])
        assert decay_slope(radii, 3.0 * np.exp(-2.0 * radii)) == pytest.approx(-2.0)

    def test_needs_two_points(self):
        with pytest.raises(InvalidInputError):
            decay_slope([1.0], [0.1])
