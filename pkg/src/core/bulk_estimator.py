"""
Estimación de c: cuántos autovalores quedan fuera del bulk semicircular

Se asume que, a partir del índice i, el espectro medio sigue la ley del
semicírculo de radio r = λ̄(i). Si los K autovalores siguientes están a menos
de una desviación estándar de la media de sus estadísticos de orden, el borde
del bulk está en i y c = i - 1.
"""
from functools import lru_cache
from typing import List, Tuple
import numpy as np
import numpy.typing as npt
from scipy import integrate, optimize, special, stats
from src.core.exceptions import GraphArgumentError, NumericFailure
from src.models.response_models import BulkEstimate, BulkIteration
from custom_logging import get_logger

logger = get_logger(__name__)

QUAD_EPSABS = 1e-8
# Masa despreciable en cada cola al acotar el soporte del estadístico de orden
TAIL_MASS = 1e-15


def semicircle_pdf(lam: npt.ArrayLike, r: float) -> np.ndarray:
    """s(λ; r) = 2/(π r²) sqrt(r² - λ²) en [-r, r], cero fuera"""
    if r <= 0:
        raise GraphArgumentError(f"El radio debe ser positivo: {r}")
    lam = np.asarray(lam, dtype=np.float64)
    inside = np.clip(r * r - lam * lam, 0.0, None)
    return 2.0 / (np.pi * r * r) * np.sqrt(inside)


def semicircle_cdf(lam: npt.ArrayLike, r: float) -> np.ndarray:
    """
    F(λ; r) = 1/2 + λ sqrt(r² - λ²)/(π r²) + arcsin(λ/r)/π en [-r, r]

    Vale 0 para λ <= -r y 1 para λ >= r.
    """
    if r <= 0:
        raise GraphArgumentError(f"El radio debe ser positivo: {r}")
    x = np.clip(np.asarray(lam, dtype=np.float64) / r, -1.0, 1.0)
    values = 0.5 + (x * np.sqrt(1.0 - x * x) + np.arcsin(x)) / np.pi
    return np.clip(values, 0.0, 1.0)


def _unit_quantile(u: float) -> float:
    """Inversa de F(·; 1) por bisección"""
    if u <= 0.0:
        return -1.0
    if u >= 1.0:
        return 1.0
    return float(optimize.brentq(lambda x: float(semicircle_cdf(x, 1.0)) - u, -1.0, 1.0, xtol=1e-15))


@lru_cache(maxsize=4096)
def _unit_order_stat_moments(m: int, j: int) -> Tuple[float, float]:
    """Media y desviación del j-ésimo mayor de m muestras de la ley con r = 1"""
    # m!/((m-j)!(j-1)!) = 1/B(m-j+1, j), evaluado en escala logarítmica
    log_coefficient = -special.betaln(m - j + 1, j)

    def density(x: float) -> float:
        with np.errstate(divide="ignore"):
            log_lower = np.log(semicircle_cdf(x, 1.0))
            log_upper = np.log(semicircle_cdf(-x, 1.0))
            log_pdf = np.log(semicircle_pdf(x, 1.0))
        log_value = log_coefficient + (m - j) * log_lower + (j - 1) * log_upper + log_pdf
        return float(np.exp(log_value)) if np.isfinite(log_value) else 0.0

    # F(X) ~ Beta(m - j + 1, j): el soporte efectivo sale de sus cuantiles extremos
    lower = _unit_quantile(float(stats.beta.ppf(TAIL_MASS, m - j + 1, j)))
    upper = _unit_quantile(float(stats.beta.isf(TAIL_MASS, m - j + 1, j)))

    mass, _ = integrate.quad(density, lower, upper, epsabs=QUAD_EPSABS, limit=200)
    if not abs(mass - 1.0) <= 1e-6:
        raise NumericFailure(f"Cuadratura del estadístico de orden sin normalizar (m={m}, j={j}): masa {mass:.10g}")

    mean, _ = integrate.quad(lambda x: x * density(x), lower, upper, epsabs=QUAD_EPSABS, limit=200)
    variance, _ = integrate.quad(
        lambda x: (x - mean) ** 2 * density(x), lower, upper, epsabs=QUAD_EPSABS ** 2, limit=200
    )
    return mean, float(np.sqrt(max(variance, 0.0)))


def order_stat_moments(r: float, m: int, j: int) -> Tuple[float, float]:
    """
    Media y desviación estándar del j-ésimo mayor de m muestras iid de s(λ; r)

    Args:
        r: Radio del semicírculo
        m: Tamaño de la muestra
        j: Rango desde arriba (j = 1 es el máximo)

    Returns:
        (media, desviación estándar); ambas escalan linealmente con r
    """
    if r <= 0:
        raise GraphArgumentError(f"El radio debe ser positivo: {r}")
    if not (1 <= j <= m):
        raise GraphArgumentError(f"Rango inválido: se requiere 1 <= j <= m (j={j}, m={m})")
    mean, std = _unit_order_stat_moments(int(m), int(j))
    return r * mean, r * std


def estimate_c_with_diagnostics(full_mean_spectrum: npt.ArrayLike, K: int = 5) -> BulkEstimate:
    """
    Estima c recorriendo el borde del bulk

    Para i = 1, 2, ...: r = λ̄(i); compara λ̄(i+1..i+K) con las medias de los K
    mayores estadísticos de orden de n - i muestras de s(λ; r). Se detiene
    cuando todas las desviaciones son <= una desviación estándar.

    Args:
        full_mean_spectrum: Espectro medio completo (longitud n, decreciente)
        K: Autovalores comparados por iteración

    Returns:
        BulkEstimate con c = max(i - 1, 1) y la tabla de iteraciones
    """
    values = np.asarray(full_mean_spectrum, dtype=np.float64)
    n = values.shape[0]
    if K < 1:
        raise GraphArgumentError(f"K debe ser >= 1: {K}")
    if values.ndim != 1 or n < K + 2:
        raise GraphArgumentError(f"El espectro medio necesita longitud >= K + 2 = {K + 2}: {n}")
    if not np.all(np.isfinite(values)):
        raise GraphArgumentError("El espectro medio tiene valores no finitos")

    iterations: List[BulkIteration] = []
    exhausted = False
    i = 1
    while True:
        if i + K > n:
            exhausted = True
            break
        r = float(values[i - 1])
        if r <= 0:
            # Sin radio positivo no hay semicírculo que comparar
            exhausted = True
            break

        expected, deviations, thresholds = [], [], []
        for j in range(1, K + 1):
            mean, std = order_stat_moments(r, n - i, j)
            expected.append(mean)
            deviations.append(abs(float(values[i - 1 + j]) - mean))
            thresholds.append(std)
        iterations.append(BulkIteration(
            i=i, r=r, expected=expected, deviations=deviations, thresholds=thresholds
        ))

        if all(d <= s for d, s in zip(deviations, thresholds)):
            break
        i += 1

    c = max(i - 1, 1)
    if exhausted:
        logger.warning(f"La estimación de c agotó el espectro en i={i}; se devuelve c={c}")
    logger.info(f"Estimación de c: {c} ({len(iterations)} iteraciones, K={K})")
    return BulkEstimate(c=c, k_bulk=K, exhausted=exhausted, iterations=iterations)


def estimate_c(full_mean_spectrum: npt.ArrayLike, K: int = 5) -> int:
    """Número de autovalores fuera del bulk (ver estimate_c_with_diagnostics)"""
    return estimate_c_with_diagnostics(full_mean_spectrum, K).c
