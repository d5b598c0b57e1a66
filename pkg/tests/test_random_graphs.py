"""
Tests de los generadores con semilla
"""
import numpy as np
import pytest
from src.core.exceptions import GraphArgumentError, KernelInfeasibleError
from src.core.graph import Graph, density
from src.core.random_graphs import (
    barabasi_albert,
    erdos_renyi,
    interpolated_dataset,
    sample_graphs,
    sample_kernel_graph,
    sbm_trend_dataset,
    watts_strogatz,
)
from src.core.sbm_kernel import grid_blocks, interpolated_kernel, make_kernel
from src.utils.sampling import derive_seed, pair_uniforms


class TestKernelSampling:
    """Medidas de probabilidad de kernel"""

    def test_constant_one_gives_complete_graph(self):
        g = sample_kernel_graph(make_kernel(1.0, [1.0], [1.0]), 20, seed=1)
        assert g == Graph.complete(20)

    def test_constant_zero_gives_empty_graph(self):
        g = sample_kernel_graph(make_kernel(1.0, [1.0], [0.0]), 20, seed=1)
        assert g.m == 0

    def test_half_density_concentrates(self):
        n = 1000
        g = sample_kernel_graph(make_kernel(1.0, [1.0], [0.5]), n, seed=3)
        pairs = n * (n - 1) / 2
        assert abs(density(g) - 0.5) <= 3 * np.sqrt(0.25 / pairs)

    def test_same_seed_same_graph(self, two_block_kernel):
        g = sample_kernel_graph(two_block_kernel, 60, seed=99)
        h = sample_kernel_graph(two_block_kernel, 60, seed=99)
        assert g == h
        assert g != sample_kernel_graph(two_block_kernel, 60, seed=100)

    def test_callable_kernel(self):
        g = sample_kernel_graph(lambda x, y: np.ones_like(x), 10, seed=0)
        assert g == Graph.complete(10)

    def test_infeasible_callable_kernel(self):
        with pytest.raises(KernelInfeasibleError):
            sample_kernel_graph(lambda x, y: np.full_like(x, 1.5), 10, seed=0)

    def test_needs_two_vertices(self, two_block_kernel):
        with pytest.raises(GraphArgumentError):
            sample_kernel_graph(two_block_kernel, 1, seed=0)

    def test_block_densities(self):
        kernel = make_kernel(1.0, [0.5, 0.5], [0.6, 0.2], 0.1)
        n = 200
        graphs = sample_graphs(kernel, n, 10, seed=5)
        labels = grid_blocks(kernel, n)
        for block, rho_p in enumerate([0.6, 0.2]):
            members = np.flatnonzero(labels == block)
            assert members.size >= 50
            pairs = members.size * (members.size - 1) / 2 * len(graphs)
            edges = sum(np.triu(g.adjacency[np.ix_(members, members)], 1).sum() for g in graphs)
            standard_error = np.sqrt(rho_p * (1 - rho_p) / pairs)
            assert abs(edges / pairs - rho_p) <= 4 * standard_error

    def test_sample_graphs_uses_derived_seeds(self, two_block_kernel):
        graphs = sample_graphs(two_block_kernel, 30, 3, seed=11)
        expected = sample_kernel_graph(two_block_kernel, 30, derive_seed(11, "sample", 2))
        assert graphs[2] == expected

    def test_sample_graphs_needs_positive_count(self, two_block_kernel):
        with pytest.raises(GraphArgumentError):
            sample_graphs(two_block_kernel, 30, 0, seed=1)


class TestPairStreams:
    """Flujos Philox por fila"""

    def test_row_streams_do_not_depend_on_n(self):
        small = pair_uniforms(42, 10)
        large = pair_uniforms(42, 20)
        # La fila i con n=10 es prefijo de la fila i con n=20
        for i in range(9):
            np.testing.assert_array_equal(small[i, i + 1:], large[i, i + 1:i + 1 + (10 - i - 1)])

    def test_lower_triangle_never_produces_edges(self):
        uniforms = pair_uniforms(1, 6)
        assert np.all(uniforms[np.tril_indices(6)] == 1.0)


class TestErdosRenyi:

    def test_extremes(self):
        assert erdos_renyi(15, 0.0, seed=1).m == 0
        assert erdos_renyi(15, 1.0, seed=1) == Graph.complete(15)

    def test_invalid_probability(self):
        with pytest.raises(GraphArgumentError):
            erdos_renyi(10, 1.5, seed=1)


class TestBarabasiAlbert:
    """Apego preferencial desde un grafo completo"""

    def test_edge_count(self):
        g = barabasi_albert(600, 5, 5, seed=7)
        assert g.m == 10 + 5 * 595 == 2985

    def test_no_growth_gives_complete_graph(self):
        assert barabasi_albert(5, 5, 3, seed=1) == Graph.complete(5)

    def test_seed_graph_is_complete(self):
        adjacency = barabasi_albert(50, 6, 2, seed=3).adjacency
        assert adjacency[:6, :6].sum() == 6 * 5

    def test_new_vertices_have_degree_at_least_m(self):
        g = barabasi_albert(200, 4, 3, seed=2)
        assert g.degrees()[4:].min() >= 3

    def test_deterministic(self):
        assert barabasi_albert(100, 5, 2, seed=9) == barabasi_albert(100, 5, 2, seed=9)

    @pytest.mark.parametrize("n, m0, m", [(10, 3, 4), (10, 3, 0), (4, 5, 2)])
    def test_invalid_parameters(self, n, m0, m):
        with pytest.raises(GraphArgumentError):
            barabasi_albert(n, m0, m, seed=1)


class TestWattsStrogatz:
    """Anillo con recableado"""

    def test_edge_count(self):
        g = watts_strogatz(600, 22, 0.7, seed=3)
        assert g.m == 600 * 22 // 2 == 6600

    def test_no_rewiring_gives_ring_lattice(self):
        g = watts_strogatz(30, 4, 0.0, seed=1)
        assert np.all(g.degrees() == 4)
        assert g.has_edge(0, 1) and g.has_edge(0, 2) and g.has_edge(0, 29) and g.has_edge(0, 28)

    def test_full_rewiring_keeps_mean_degree(self):
        g = watts_strogatz(400, 10, 1.0, seed=4)
        assert g.degrees().mean() == pytest.approx(10.0)

    @pytest.mark.parametrize("K, beta", [(3, 0.1), (30, 0.1), (4, 1.5)])
    def test_invalid_parameters(self, K, beta):
        with pytest.raises(GraphArgumentError):
            watts_strogatz(30, K, beta, seed=1)


class TestTrendDataset:
    """Conjunto (t, G) con tendencia lineal en ρ·p(t)"""

    def test_shape_and_covariates(self):
        dataset = sbm_trend_dataset(60, 8, [0.1, 0.2, 0.35], [0.1, 0.15, 0.2], [1 / 3] * 3, 0.08, seed=1)
        assert len(dataset) == 8
        assert all(0.0 <= t < 1.0 for t, _ in dataset)
        assert all(g.n == 60 for _, g in dataset)

    def test_deterministic(self):
        a = sbm_trend_dataset(40, 4, [0.1, 0.2], [0.1, 0.1], [0.5, 0.5], 0.05, seed=3)
        b = sbm_trend_dataset(40, 4, [0.1, 0.2], [0.1, 0.1], [0.5, 0.5], 0.05, seed=3)
        assert [t for t, _ in a] == [t for t, _ in b]
        assert [g for _, g in a] == [g for _, g in b]

    def test_length_mismatch(self):
        with pytest.raises(GraphArgumentError):
            sbm_trend_dataset(40, 4, [0.1, 0.2], [0.1], [0.5, 0.5], 0.05, seed=3)


class TestInterpolatedDataset:
    """Conjunto (t, G) donde la segunda comunidad crece con t"""

    def test_graphs_follow_kernel_at_covariate(self):
        dataset = interpolated_dataset(40, 5, 0.05, seed=11)
        assert len(dataset) == 5
        for k, (t, g) in enumerate(dataset):
            expected = sample_kernel_graph(interpolated_kernel(t, 1.0, 0.05), 40, derive_seed(11, "sample", k))
            assert g == expected

    def test_shares_covariates_with_trend_dataset(self):
        interpolated = interpolated_dataset(30, 4, 0.05, seed=2)
        trend = sbm_trend_dataset(30, 4, [0.1, 0.2], [0.1, 0.1], [0.5, 0.5], 0.05, seed=2)
        assert [t for t, _ in interpolated] == [t for t, _ in trend]

    def test_needs_two_graphs(self):
        with pytest.raises(GraphArgumentError):
            interpolated_dataset(30, 1, 0.05, seed=2)
