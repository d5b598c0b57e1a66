"""
Regresión de Fréchet lineal con respuestas grafo

El estimador en t es una media de Fréchet ponderada con pesos
s_k(t) = 1 + (t_k - T̄) V̂⁻¹ (t - T̄), que promedian 1. Su objetivo espectral es
el espectro medio ponderado y su densidad la densidad media ponderada.
"""
from typing import List, Optional, Sequence, Tuple
import numpy as np
import numpy.typing as npt
from src.core.exceptions import GraphArgumentError, NumericFailure
from src.core.graph import Graph, Spectrum, check_sample, density, descending, sample_spectra
from src.core.pipeline import FrechetMeanPipeline
from src.models.kernel_schema import FitReport
from src.models.request_models import FitOptions
from src.models.response_models import BulkEstimate, RegressionPoint
from src.utils.parallel import parallel_map
from custom_logging import get_logger

logger = get_logger(__name__)

# Margen en que una densidad ponderada fuera de (0, 1) todavía se recorta
DENSITY_CLIP_TOL = 1e-3
DENSITY_FLOOR = 1e-6


class RegressionDataset:
    """Pares (t_k, G_k) con N >= 2, mismo n y varianza de t positiva"""

    def __init__(self, pairs: Sequence[Tuple[float, Graph]]):
        pairs = list(pairs)
        if len(pairs) < 2:
            raise GraphArgumentError(f"La regresión necesita al menos 2 pares: {len(pairs)}")
        self._t = np.array([float(t) for t, _ in pairs], dtype=np.float64)
        self._graphs = [g for _, g in pairs]
        if not np.all(np.isfinite(self._t)):
            raise GraphArgumentError("Los valores t deben ser finitos")
        self._n = check_sample(self._graphs)
        if self.variance_t <= 0.0:
            raise GraphArgumentError("La varianza muestral de t es cero")

    @classmethod
    def from_lists(cls, t_values: Sequence[float], graphs: Sequence[Graph]) -> "RegressionDataset":
        if len(t_values) != len(graphs):
            raise GraphArgumentError(f"Hay {len(t_values)} valores t y {len(graphs)} grafos")
        return cls(list(zip(t_values, graphs)))

    @property
    def t_values(self) -> npt.NDArray[np.float64]:
        return self._t.copy()

    @property
    def graphs(self) -> List[Graph]:
        return list(self._graphs)

    @property
    def n(self) -> int:
        return self._n

    @property
    def mean_t(self) -> float:
        return float(self._t.mean())

    @property
    def variance_t(self) -> float:
        """V̂ con normalización 1/N"""
        return float(self._t.var())

    def __len__(self) -> int:
        return len(self._graphs)


def regression_weights(t_values: npt.ArrayLike, t: float) -> npt.NDArray[np.float64]:
    """
    s_k(t) = 1 + (t_k - T̄) V̂⁻¹ (t - T̄)

    Args:
        t_values: Covariables observadas
        t: Punto de consulta

    Returns:
        Pesos (pueden ser negativos al extrapolar); su media es 1
    """
    t_values = np.asarray(t_values, dtype=np.float64)
    if t_values.size < 2:
        raise GraphArgumentError("Se necesitan al menos 2 valores t")
    mean = t_values.mean()
    variance = t_values.var()
    if variance <= 0.0:
        raise GraphArgumentError("La varianza muestral de t es cero")
    return 1.0 + (t_values - mean) * (float(t) - mean) / variance


def weighted_mean_spectrum(data: RegressionDataset, t: float, c: int) -> Spectrum:
    """(1/N) Σ_k s_k(t) σ_c(A_k), reordenado de mayor a menor"""
    weights = regression_weights(data.t_values, t)
    spectra = sample_spectra(data.graphs, c)
    return descending(weights @ spectra / len(data))


def weighted_density(data: RegressionDataset, t: float) -> float:
    """
    (1/N) Σ_k s_k(t) ρ(G_k)

    Raises:
        NumericFailure: si cae fuera de (0, 1) por más de DENSITY_CLIP_TOL
    """
    weights = regression_weights(data.t_values, t)
    densities = np.array([density(g) for g in data.graphs])
    value = float(weights @ densities / len(data))
    if DENSITY_FLOOR <= value <= 1.0 - DENSITY_FLOOR:
        return value
    if -DENSITY_CLIP_TOL < value < 1.0 + DENSITY_CLIP_TOL:
        clipped = float(np.clip(value, DENSITY_FLOOR, 1.0 - DENSITY_FLOOR))
        logger.warning(f"Densidad ponderada {value:.6g} en t={t} recortada a {clipped:.6g}")
        return clipped
    raise NumericFailure(f"Densidad ponderada {value:.6g} fuera de (0, 1) en t={t}")


class FrechetRegression:
    """Estimador de regresión de Fréchet sobre un conjunto fijo"""

    def __init__(self, data: RegressionDataset, opts: Optional[FitOptions] = None):
        self.data = data
        self.pipeline = FrechetMeanPipeline(opts)
        self._c: Optional[Tuple[int, Optional[BulkEstimate]]] = None

    @property
    def opts(self) -> FitOptions:
        return self.pipeline.opts

    def community_count(self) -> Tuple[int, Optional[BulkEstimate]]:
        """c fijo o estimado una vez sobre el espectro medio sin ponderar"""
        if self._c is None:
            self._c = self.pipeline.resolve_c(self.data.graphs)
        return self._c

    def point(self, t: float) -> Tuple[Graph, RegressionPoint]:
        """Grafo de regresión y detalle del ajuste en t"""
        c, bulk = self.community_count()
        s = self.pipeline.resolve_geometry(c)
        target = weighted_mean_spectrum(self.data, t, c)
        rho = weighted_density(self.data, t)
        logger.info(f"Regresión en t={t}: ρ={rho:.6g}, objetivo={np.round(target, 4).tolist()}")

        graph, result = self.pipeline.process_target(target, rho, self.data.n, s, bulk=bulk)
        weights = regression_weights(self.data.t_values, t)
        return graph, RegressionPoint(t=float(t), weights=weights.tolist(), result=result)

    def grid(self, t_values: Sequence[float]) -> List[Tuple[Graph, RegressionPoint]]:
        """Consultas independientes en cada t (en paralelo, orden conservado)"""
        self.community_count()
        return parallel_map(self.point, list(t_values))


def regress_at(
    data: RegressionDataset,
    t: float,
    opts: Optional[FitOptions] = None
) -> Tuple[Graph, FitReport]:
    """
    Estimación del grafo de regresión en t

    Args:
        data: Pares (t_k, G_k)
        t: Punto de consulta
        opts: Hiperparámetros (se recomienda c_override si se conoce c)

    Returns:
        (grafo estimado, reporte del ajuste)
    """
    graph, point = FrechetRegression(data, opts).point(t)
    return graph, point.result.fit
