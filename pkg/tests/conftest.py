"""
Fixtures compartidas: grafos pequeños con espectro conocido y muestras SBM
"""
import numpy as np
import pytest
from src.core.graph import Graph
from src.core.random_graphs import sample_graphs
from src.core.sbm_kernel import make_kernel


@pytest.fixture
def k3() -> Graph:
    return Graph.complete(3)


@pytest.fixture
def empty3() -> Graph:
    return Graph.empty(3)


@pytest.fixture
def path3() -> Graph:
    return Graph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


def random_graph(rng: np.random.Generator, n: int, p: float = 0.5) -> Graph:
    """Grafo G(n, p) con el generador de numpy del test"""
    upper = np.triu(rng.random((n, n)) < p, 1)
    return Graph(upper | upper.T)


@pytest.fixture
def two_block_kernel():
    """Dos comunidades bien separadas, ρ = 1"""
    return make_kernel(1.0, [0.5, 0.5], [0.6, 0.4], 0.05)


@pytest.fixture
def two_block_sample(two_block_kernel):
    return sample_graphs(two_block_kernel, 80, 6, seed=7)
