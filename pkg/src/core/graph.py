"""
Grafos simples no dirigidos y pseudométricas espectrales

- Graph: matriz de adyacencia booleana + número de aristas en caché
- Espectro de adyacencia (completo y truncado a los c mayores)
- d_A y d_{A_c}: norma l2 entre espectros ordenados
- Espectro medio de una muestra y objetivo de Fréchet muestral
"""
from typing import Iterable, Iterator, Optional, Sequence, Tuple
import numpy as np
import numpy.typing as npt
from src.core.exceptions import GraphArgumentError
from src.utils.parallel import parallel_map

# Vector real ordenado de mayor a menor (longitud n o c)
Spectrum = npt.NDArray[np.float64]


class Graph:
    """Grafo simple no dirigido sobre los vértices 0..n-1"""

    __slots__ = ("_adjacency", "_m", "_spectrum")

    def __init__(self, adjacency: npt.ArrayLike):
        matrix = np.array(adjacency, dtype=bool, copy=True)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 1:
            raise GraphArgumentError(f"La adyacencia debe ser cuadrada y no vacía, forma: {matrix.shape}")
        if matrix.diagonal().any():
            raise GraphArgumentError("La adyacencia tiene lazos (diagonal no nula)")
        if not np.array_equal(matrix, matrix.T):
            raise GraphArgumentError("La adyacencia no es simétrica")

        matrix.setflags(write=False)
        self._adjacency = matrix
        self._m = int(np.count_nonzero(np.triu(matrix, 1)))
        self._spectrum: Optional[Spectrum] = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> "Graph":
        """
        Construye un grafo desde una lista de pares (u, v)

        Raises:
            GraphArgumentError: vértice fuera de rango, lazo o arista duplicada
        """
        if n < 1:
            raise GraphArgumentError(f"n debe ser positivo: {n}")
        matrix = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphArgumentError(f"Arista ({u}, {v}) fuera de rango para n={n}")
            if u == v:
                raise GraphArgumentError(f"Lazo en el vértice {u}")
            if matrix[u, v]:
                raise GraphArgumentError(f"Arista duplicada ({min(u, v)}, {max(u, v)})")
            matrix[u, v] = matrix[v, u] = True
        return cls(matrix)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(np.zeros((n, n), dtype=bool))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(~np.eye(n, dtype=bool))

    @property
    def n(self) -> int:
        return self._adjacency.shape[0]

    @property
    def m(self) -> int:
        return self._m

    @property
    def adjacency(self) -> npt.NDArray[np.bool_]:
        """Vista de solo lectura de la adyacencia"""
        return self._adjacency

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._adjacency[u, v])

    def edges(self) -> Iterator[Tuple[int, int]]:
        """Aristas (u, v) con u < v en orden lexicográfico"""
        rows, cols = np.nonzero(np.triu(self._adjacency, 1))
        for u, v in zip(rows.tolist(), cols.tolist()):
            yield u, v

    def degrees(self) -> npt.NDArray[np.int64]:
        return self._adjacency.sum(axis=1).astype(np.int64)

    def permuted(self, perm: Sequence[int]) -> "Graph":
        """
        Reetiqueta vértices: el vértice i pasa a ser perm[i]

        Raises:
            GraphArgumentError: si perm no es una permutación de 0..n-1
        """
        perm = np.asarray(perm, dtype=np.int64)
        if perm.shape != (self.n,) or not np.array_equal(np.sort(perm), np.arange(self.n)):
            raise GraphArgumentError("perm no es una permutación de los vértices")
        inverse = np.empty_like(perm)
        inverse[perm] = np.arange(self.n)
        return Graph(self._adjacency[np.ix_(inverse, inverse)])

    def spectrum(self) -> Spectrum:
        """Espectro completo en caché (ver adjacency_spectrum)"""
        if self._spectrum is None:
            values = np.linalg.eigvalsh(self._adjacency.astype(np.float64))[::-1].copy()
            values.setflags(write=False)
            self._spectrum = values
        return self._spectrum

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return np.array_equal(self._adjacency, other._adjacency)

    def __hash__(self) -> int:
        return hash((self.n, np.packbits(self._adjacency).tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def _check_count(c: int, n: int) -> None:
    if not (1 <= c <= n):
        raise GraphArgumentError(f"c debe estar en [1, {n}]: {c}")


def _check_same_size(g: Graph, h: Graph) -> None:
    if g.n != h.n:
        raise GraphArgumentError(f"Los grafos tienen tamaños distintos: {g.n} != {h.n}")


def adjacency_spectrum(g: Graph) -> Spectrum:
    """
    Los n autovalores de la adyacencia, de mayor a menor

    Descomposición simétrica densa (LAPACK vía numpy). Copia modificable.
    """
    return np.array(g.spectrum(), dtype=np.float64)


def truncated_spectrum(g: Graph, c: int) -> Spectrum:
    """Los c mayores autovalores de la adyacencia"""
    _check_count(c, g.n)
    return np.array(g.spectrum()[:c], dtype=np.float64)


def spectral_distance(g: Graph, h: Graph) -> float:
    """d_A(g, h) = ||σ(A_g) - σ(A_h)||_2"""
    _check_same_size(g, h)
    return float(np.linalg.norm(g.spectrum() - h.spectrum()))


def truncated_spectral_distance(g: Graph, h: Graph, c: int) -> float:
    """d_{A_c}(g, h) = ||σ_c(A_g) - σ_c(A_h)||_2"""
    _check_same_size(g, h)
    _check_count(c, g.n)
    return float(np.linalg.norm(g.spectrum()[:c] - h.spectrum()[:c]))


def density(g: Graph) -> float:
    """m / (n(n-1)/2)"""
    if g.n < 2:
        raise GraphArgumentError(f"La densidad requiere n >= 2: n={g.n}")
    return g.m / (g.n * (g.n - 1) / 2)


def check_sample(sample: Sequence[Graph]) -> int:
    """
    Verifica que la muestra no esté vacía y tenga un único n

    Returns:
        El n común
    """
    if len(sample) == 0:
        raise GraphArgumentError("La muestra de grafos está vacía")
    sizes = {g.n for g in sample}
    if len(sizes) != 1:
        raise GraphArgumentError(f"La muestra mezcla tamaños de grafo: {sorted(sizes)}")
    return sizes.pop()


def sample_spectra(sample: Sequence[Graph], c: Optional[int] = None) -> npt.NDArray[np.float64]:
    """
    Matriz N x c con el espectro truncado de cada grafo (calculado en paralelo)
    """
    n = check_sample(sample)
    c = n if c is None else c
    _check_count(c, n)
    rows = parallel_map(lambda g: g.spectrum()[:c], sample)
    return np.vstack(rows).astype(np.float64)


def mean_spectrum(sample: Sequence[Graph], c: int) -> Spectrum:
    """
    Promedio entrada a entrada de los espectros truncados (λ̄)

    Con c = n se obtiene el espectro medio completo que usa la estimación de c.
    """
    return sample_spectra(sample, c).mean(axis=0)


def frechet_objective(g: Graph, sample: Sequence[Graph], c: int) -> float:
    """(1/N) Σ_k d²_{A_c}(g, g_k): objetivo de la media de Fréchet muestral"""
    n = check_sample(sample)
    if g.n != n:
        raise GraphArgumentError(f"El candidato tiene n={g.n}, la muestra n={n}")
    spectra = sample_spectra(sample, c)
    return float(np.mean(np.sum((spectra - truncated_spectrum(g, c)) ** 2, axis=1)))


def frechet_variance(sample: Sequence[Graph], c: int) -> float:
    """
    Varianza total muestral de Fréchet en el espectro medio

    (1/N) Σ_k ||σ_c(A_k) - λ̄||², cota inferior del objetivo de cualquier grafo.
    """
    spectra = sample_spectra(sample, c)
    return float(np.mean(np.sum((spectra - spectra.mean(axis=0)) ** 2, axis=1)))


def bulk_histogram(
    values: npt.ArrayLike,
    bins: int = 50,
    value_range: Optional[Tuple[float, float]] = None
) -> Tuple[npt.NDArray[np.int64], npt.NDArray[np.float64]]:
    """
    Conteos por intervalo de los autovalores del bulk

    Args:
        values: Autovalores (normalmente σ sin los c primeros)
        bins: Número de intervalos
        value_range: Rango (min, max); por defecto el de los datos

    Returns:
        (conteos, bordes) como np.histogram
    """
    if bins < 1:
        raise GraphArgumentError(f"bins debe ser positivo: {bins}")
    counts, edges = np.histogram(np.asarray(values, dtype=np.float64), bins=bins, range=value_range)
    return counts.astype(np.int64), edges


def descending(values: npt.ArrayLike) -> Spectrum:
    """Reordena un vector de mayor a menor (orden estable)"""
    values = np.asarray(values, dtype=np.float64)
    return values[np.argsort(-values, kind="stable")]
