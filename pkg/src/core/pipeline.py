"""
Pipeline Principal de la media de Fréchet muestral aproximada
Orquesta los pasos: densidad, c, objetivo, ajuste del kernel, muestreo y grafo media
"""
import time
from typing import List, Optional, Sequence, Tuple
import numpy as np
from src.core.bulk_estimator import estimate_c_with_diagnostics
from src.core.exceptions import GraphArgumentError
from src.core.frechet_mean import default_geometry, fit_kernel, set_mean_index
from src.core.graph import Graph, Spectrum, check_sample, descending, mean_spectrum, truncated_spectrum
from src.core.random_graphs import sample_graphs
from src.core.validation import SampleValidation
from src.models.kernel_schema import FitReport
from src.models.request_models import FitOptions
from src.models.response_models import BulkEstimate, MeanResult
from custom_logging import get_logger

logger = get_logger(__name__)


class FrechetMeanPipeline:
    """Pipeline de la media de Fréchet bajo d_{A_c}"""

    def __init__(self, opts: Optional[FitOptions] = None):
        self.opts = opts or FitOptions()
        self.validation = SampleValidation()

    def resolve_c(self, sample: Sequence[Graph]) -> Tuple[int, Optional[BulkEstimate]]:
        """
        c fijo (c_override) o estimado sobre el espectro medio completo

        Returns:
            (c, diagnóstico de la estimación o None)
        """
        n = check_sample(sample)
        if self.opts.c_override is not None:
            if self.opts.c_override > n:
                raise GraphArgumentError(f"c={self.opts.c_override} supera n={n}")
            return self.opts.c_override, None
        bulk = estimate_c_with_diagnostics(mean_spectrum(sample, n), self.opts.k_bulk)
        return bulk.c, bulk

    def resolve_geometry(self, c: int) -> List[float]:
        if self.opts.s_override is None:
            return default_geometry(c)
        if len(self.opts.s_override) != c:
            raise GraphArgumentError(
                f"s_override tiene longitud {len(self.opts.s_override)} pero c={c}"
            )
        return list(self.opts.s_override)

    def process(self, sample: Sequence[Graph]) -> Tuple[Graph, MeanResult]:
        """
        Ejecuta la media de Fréchet muestral aproximada de punta a punta

        Args:
            sample: Grafos con el mismo n y densidad en (0, 1)

        Returns:
            (grafo media, MeanResult con el ajuste, la alineación y el diagnóstico de c)
        """
        start_time = time.time()
        logger.info(f"Iniciando pipeline para una muestra de {len(sample)} grafos")

        try:
            # STEP 1: Densidad media
            logger.info("STEP 1: Validando la muestra y calculando ρ̄")
            densities = self.validation.validate_sample(sample)
            rho_bar = float(densities.mean())
            n = sample[0].n
            logger.info(f"STEP 1: n={n}, ρ̄={rho_bar:.6g}")

            # STEP 2: c y geometría
            logger.info("STEP 2: Determinando c")
            c, bulk = self.resolve_c(sample)
            s = self.resolve_geometry(c)
            logger.info(f"STEP 2: c={c} ({'estimado' if bulk else 'fijo'}), s={s}")

            # STEP 3: Espectro objetivo
            logger.info("STEP 3: Calculando el espectro medio truncado")
            target = descending(mean_spectrum(sample, c))
            logger.info(f"STEP 3: objetivo={np.round(target, 4).tolist()}")

            return self.process_target(target, rho_bar, n, s, bulk=bulk, start_time=start_time)

        except Exception as e:
            processing_time = time.time() - start_time
            logger.error(f"Error en pipeline después de {processing_time:.2f}s: {str(e)}", exc_info=True)
            raise

    def process_target(
        self,
        target: Spectrum,
        rho_bar: float,
        n: int,
        s: Sequence[float],
        bulk: Optional[BulkEstimate] = None,
        start_time: Optional[float] = None
    ) -> Tuple[Graph, MeanResult]:
        """
        Pasos de ajuste y muestreo para un objetivo ya calculado (media o regresión)

        Args:
            target: Espectro objetivo (longitud c)
            rho_bar: Densidad usada como ρ del kernel
            n: Número de vértices
            s: Geometría
            bulk: Diagnóstico de c, si se estimó
            start_time: Inicio para medir el tiempo total

        Returns:
            (grafo media, MeanResult)
        """
        start_time = start_time or time.time()
        target = descending(target)
        c = target.size

        # STEP 4: Ajuste del kernel
        logger.info("STEP 4: Ajustando el kernel canónico")
        fit = fit_kernel(target, s, rho_bar, n, self.opts)
        logger.info(f"STEP 4: objetivo={fit.objective:.6g}, convergió={fit.converged}")

        # STEP 5: Muestreo del kernel ajustado
        logger.info(f"STEP 5: Muestreando Ñ={self.opts.n_tilde} grafos del kernel ajustado")
        candidates = sample_graphs(fit.kernel, n, self.opts.n_tilde, self.opts.seed, purpose="set-mean")

        # STEP 6: Grafo media del conjunto
        logger.info("STEP 6: Eligiendo el grafo media")
        index = set_mean_index(candidates, c)
        mean_graph = candidates[index]
        logger.info(f"STEP 6: grafo {index} con m={mean_graph.m}")

        # STEP 7: Alineación de autovalores
        alignment = self.validation.alignment_report(
            target, fit.fitted_eigenvalues(), truncated_spectrum(mean_graph, c)
        )
        worst = self.validation.max_relative_error(alignment)
        logger.info(f"STEP 7: error relativo máximo del ajuste {worst:.4g}")

        processing_time = time.time() - start_time
        result = MeanResult(
            c=c,
            rho_bar=rho_bar,
            geometry=list(s),
            fit=fit,
            alignment=alignment,
            bulk=bulk,
            set_mean_index=index,
            processing_time_seconds=round(processing_time, 2)
        )
        logger.info(f"Pipeline completado en {processing_time:.2f}s - c={c}")
        return mean_graph, result


def approximate_frechet_mean(
    sample: Sequence[Graph],
    opts: Optional[FitOptions] = None
) -> Tuple[Graph, FitReport, int]:
    """
    Media de Fréchet muestral aproximada

    Returns:
        (grafo media, reporte del ajuste, c)
    """
    mean_graph, result = FrechetMeanPipeline(opts).process(sample)
    return mean_graph, result.fit, result.c
