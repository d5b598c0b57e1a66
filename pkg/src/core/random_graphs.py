"""
Generadores de grafos aleatorios con semilla

- Medidas de probabilidad de kernel: arista (i, j) ~ Bernoulli(ρ f(i/n, j/n))
- Barabási-Albert (grafo inicial completo en m0 vértices)
- Watts-Strogatz (anillo con K vecinos y recableado β)
- Erdős-Rényi y los conjuntos de regresión (tendencia lineal en p(t) y
  comunidad que aparece de forma continua)
"""
from typing import Callable, List, Sequence, Tuple, Union
import networkx as nx
import numpy as np
import numpy.typing as npt
from src.core.exceptions import GraphArgumentError, KernelInfeasibleError
from src.core.graph import Graph
from src.core.sbm_kernel import edge_probabilities, interpolated_kernel, make_kernel
from src.models.kernel_schema import SbmKernel
from src.utils.parallel import parallel_map
from src.utils.sampling import derive_seed, pair_uniforms, philox_generator
from custom_logging import get_logger

logger = get_logger(__name__)

# Kernel general: recibe mallas (x, y) y devuelve ρ·f(x, y)
KernelFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]

PROBABILITY_TOL = 1e-12


def _probabilities(kernel: Union[SbmKernel, KernelFunction], n: int) -> npt.NDArray[np.float64]:
    if isinstance(kernel, SbmKernel):
        return edge_probabilities(kernel, n)
    grid = np.arange(1, n + 1) / n
    x, y = np.meshgrid(grid, grid, indexing="ij")
    values = np.broadcast_to(np.asarray(kernel(x, y), dtype=np.float64), (n, n))
    return np.array(values)


def sample_kernel_graph(kernel: Union[SbmKernel, KernelFunction], n: int, seed: int) -> Graph:
    """
    Muestra un grafo de la medida de kernel μ_{ρf}

    Args:
        kernel: SbmKernel o función vectorizada (x, y) -> ρ·f(x, y)
        n: Número de vértices (>= 2)
        seed: Semilla de 64 bits; el par (i, j) usa el flujo de la fila i

    Returns:
        Graph

    Raises:
        KernelInfeasibleError: si algún ρ·f(i/n, j/n) está fuera de [0, 1]
    """
    if n < 2:
        raise GraphArgumentError(f"n debe ser >= 2: {n}")

    probabilities = _probabilities(kernel, n)
    upper = np.triu(np.ones((n, n), dtype=bool), 1)
    pair_values = probabilities[upper]
    if not np.all(np.isfinite(pair_values)) or pair_values.min() < -PROBABILITY_TOL or pair_values.max() > 1.0 + PROBABILITY_TOL:
        raise KernelInfeasibleError(
            f"ρ·f fuera de [0, 1] en la grilla: rango [{pair_values.min():.6g}, {pair_values.max():.6g}]"
        )

    adjacency = (pair_uniforms(seed, n) < probabilities) & upper
    return Graph(adjacency | adjacency.T)


def sample_graphs(
    kernel: Union[SbmKernel, KernelFunction],
    n: int,
    count: int,
    seed: int,
    purpose: str = "sample"
) -> List[Graph]:
    """
    N grafos iid de μ_{ρf}; el grafo k usa la sub-semilla (seed, purpose, k)
    """
    if count < 1:
        raise GraphArgumentError(f"El número de grafos debe ser positivo: {count}")
    return parallel_map(
        lambda k: sample_kernel_graph(kernel, n, derive_seed(seed, purpose, k)),
        range(count)
    )


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p) como medida de kernel constante"""
    if not (0.0 <= p <= 1.0):
        raise GraphArgumentError(f"p debe estar en [0, 1]: {p}")
    return sample_kernel_graph(make_kernel(1.0, [1.0], [p]), n, seed)


def _to_graph(nx_graph: nx.Graph, n: int) -> Graph:
    return Graph(nx.to_numpy_array(nx_graph, nodelist=range(n)) > 0)


def barabasi_albert(n: int, m0: int, m: int, seed: int) -> Graph:
    """
    Grafo de apego preferencial

    Parte del grafo completo en m0 vértices; cada vértice nuevo se une a m
    destinos distintos elegidos con probabilidad proporcional al grado
    (networkx vuelve a sortear los destinos repetidos).

    Args:
        n: Vértices finales (n = m0 devuelve el grafo completo)
        m0: Tamaño del grafo inicial
        m: Aristas por vértice nuevo, 1 <= m <= m0

    Returns:
        Graph con C(m0, 2) + m (n - m0) aristas
    """
    if not (1 <= m <= m0 <= n):
        raise GraphArgumentError(f"Se requiere 1 <= m <= m0 <= n: m={m}, m0={m0}, n={n}")
    if n == m0:
        return Graph.complete(n)

    nx_graph = nx.barabasi_albert_graph(
        n, m, seed=philox_generator(seed), initial_graph=nx.complete_graph(m0)
    )
    return _to_graph(nx_graph, n)


def watts_strogatz(n: int, K: int, beta: float, seed: int) -> Graph:
    """
    Grafo de mundo pequeño

    Anillo donde cada vértice se une a sus K vecinos más cercanos; cada arista
    (u, u + j), j = 1..K/2, se recablea con probabilidad β a un destino
    uniforme que no sea u ni un vecino actual. Conserva nK/2 aristas.
    """
    if K < 0 or K % 2 != 0 or K >= n:
        raise GraphArgumentError(f"K debe ser par y 0 <= K < n: K={K}, n={n}")
    if not (0.0 <= beta <= 1.0):
        raise GraphArgumentError(f"beta debe estar en [0, 1]: {beta}")

    nx_graph = nx.watts_strogatz_graph(n, K, beta, seed=philox_generator(seed))
    return _to_graph(nx_graph, n)


def _covariate_dataset(
    n: int,
    count: int,
    seed: int,
    kernel_at: Callable[[float], SbmKernel]
) -> List[Tuple[float, Graph]]:
    """T_k ~ unif(0, 1) del flujo 'covariate'; G_k ~ μ del kernel en T_k con la sub-semilla 'sample'"""
    if count < 2:
        raise GraphArgumentError(f"La regresión necesita al menos 2 grafos: {count}")
    t_values = philox_generator(derive_seed(seed, "covariate")).random(count)
    logger.debug(f"Covariables de {count} grafos en [{t_values.min():.4f}, {t_values.max():.4f}]")

    def draw(k: int) -> Tuple[float, Graph]:
        t = float(t_values[k])
        return t, sample_kernel_graph(kernel_at(t), n, derive_seed(seed, "sample", k))

    return parallel_map(draw, range(count))


def sbm_trend_dataset(
    n: int,
    count: int,
    rho_p0: Sequence[float],
    rho_p_slope: Sequence[float],
    s: Sequence[float],
    rho_q: float,
    seed: int
) -> List[Tuple[float, Graph]]:
    """
    Conjunto (t_k, G_k) para regresión con T ~ unif(0, 1)

    ρ·p(t) = ρ·p0 + t·pendiente, geometría s y ρ·q fijas (kernels con ρ = 1).

    Returns:
        Lista de pares (t, grafo) en orden de muestreo
    """
    rho_p0 = np.asarray(rho_p0, dtype=np.float64)
    rho_p_slope = np.asarray(rho_p_slope, dtype=np.float64)
    if rho_p0.shape != rho_p_slope.shape or rho_p0.shape != (len(s),):
        raise GraphArgumentError("p0, la pendiente y s deben tener la misma longitud")
    return _covariate_dataset(
        n, count, seed, lambda t: make_kernel(1.0, s, rho_p0 + t * rho_p_slope, rho_q)
    )


def interpolated_dataset(n: int, count: int, rho_q: float, seed: int) -> List[Tuple[float, Graph]]:
    """
    Conjunto (t_k, G_k) donde una segunda comunidad aparece al crecer t

    Cada grafo sale de interpolated_kernel(T_k, ρ = 1, ρ·q).
    """
    return _covariate_dataset(n, count, seed, lambda t: interpolated_kernel(t, 1.0, rho_q))
