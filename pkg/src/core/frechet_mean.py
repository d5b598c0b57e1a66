"""
Media de Fréchet muestral bajo d_{A_c}

- Geometría por defecto del kernel (s_1 = 1/2, resto iguales)
- Ajuste de p (y q ligado por ||f||_1 = 1) para alinear n·ρ̄·λ_i(L_f) con λ̄_i:
  descenso de gradiente proyectado, gradiente por diferencias centradas,
  paso Barzilai-Borwein con retroceso
- Grafo media de un conjunto finito
- Media exacta por enumeración para n <= 5 y proyección sobre espectros realizables
"""
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple
import numpy as np
import numpy.typing as npt
from src.core.exceptions import GraphArgumentError
from src.core.graph import Graph, Spectrum, check_sample, sample_spectra
from src.core.sbm_kernel import FEASIBLE_MAX, FEASIBLE_MIN, make_kernel, normalize_cross_density
from src.models.kernel_schema import FitReport
from src.models.request_models import FitOptions
from src.utils.sampling import SeedSequencer
from custom_logging import get_logger

logger = get_logger(__name__)

BRUTE_FORCE_MAX_N = 5
TIE_TOL = 1e-10
# Límites del paso Barzilai-Borwein
MIN_STEP = 1e-12
MAX_STEP = 1e12


def default_geometry(c: int) -> List[float]:
    """
    s = [1] si c = 1; si no s_1 = 1/2 y s_i = 1/(2(c-1)) para i = 2..c
    """
    if c < 1:
        raise GraphArgumentError(f"c debe ser >= 1: {c}")
    if c == 1:
        return [1.0]
    return [0.5] + [1.0 / (2.0 * (c - 1))] * (c - 1)


class KernelObjective:
    """
    Objetivo Σ_i (n ρ̄ λ_i(L_f) - target_i)² como función de p

    Internamente se trabaja en unidades de λ(L_f): J̃ = J / (n ρ̄)², que tiene
    el mismo minimizador y gradientes de orden 1.
    """

    def __init__(self, target: Spectrum, s: Sequence[float], rho_bar: float, n: int):
        self.s = np.asarray(s, dtype=np.float64)
        self.scale = n * rho_bar
        self.rho_bar = rho_bar
        self.scaled_target = np.asarray(target, dtype=np.float64) / self.scale
        self.weights = np.sqrt(np.outer(self.s, self.s))
        self.lower = FEASIBLE_MIN / rho_bar
        self.upper = FEASIBLE_MAX / rho_bar

    def project(self, p: np.ndarray) -> np.ndarray:
        """Caja ρ̄·p_i ∈ [1e-6, 1]"""
        return np.clip(p, self.lower, self.upper)

    def cross_density(self, p: np.ndarray) -> Tuple[float, bool]:
        """q normalizado y recortado a ρ̄·q ∈ [1e-6, 1] (q = 0 si c = 1)"""
        q, feasible = normalize_cross_density(self.s, p)
        if len(self.s) == 1:
            return 0.0, feasible
        return float(np.clip(q, self.lower, self.upper)), feasible

    def eigenvalues(self, p: np.ndarray) -> np.ndarray:
        q, _ = self.cross_density(p)
        block = np.full((len(p), len(p)), q)
        np.fill_diagonal(block, p)
        return np.linalg.eigvalsh(block * self.weights)[::-1]

    def __call__(self, p: np.ndarray) -> float:
        residual = self.eigenvalues(p) - self.scaled_target
        return float(residual @ residual)

    def gradient(self, p: np.ndarray, step: float) -> np.ndarray:
        """Diferencias centradas con paso absoluto `step` por coordenada"""
        grad = np.empty_like(p)
        for k in range(len(p)):
            forward = p.copy()
            backward = p.copy()
            forward[k] += step
            backward[k] -= step
            grad[k] = (self(forward) - self(backward)) / (2.0 * step)
        return grad

    def raw(self, scaled_value: float) -> float:
        """Objetivo en unidades de autovalores de adyacencia"""
        return scaled_value * self.scale ** 2


def _descend(
    objective: KernelObjective,
    p_start: np.ndarray,
    opts: FitOptions
) -> Tuple[np.ndarray, List[float], int, bool, float, bool]:
    """
    Descenso proyectado desde p_start

    Returns:
        (p final, traza escalada, iteraciones, convergió, norma del gradiente proyectado,
         algún iterado con normalización factible)
    """
    p = objective.project(p_start.astype(np.float64))
    value = objective(p)
    trace = [value]
    any_feasible = objective.cross_density(p)[1]
    previous_p: Optional[np.ndarray] = None
    previous_grad: Optional[np.ndarray] = None
    converged = False
    grad_norm = float("inf")
    iterations = 0

    for iterations in range(1, opts.max_iters + 1):
        grad = objective.gradient(p, opts.fd_step)
        grad_norm = float(np.linalg.norm(p - objective.project(p - grad)))

        # Paso Barzilai-Borwein; si no es positivo, el paso inicial
        alpha = opts.step_size
        if previous_p is not None:
            dp = p - previous_p
            dg = grad - previous_grad
            curvature = float(dp @ dg)
            if curvature > 0:
                alpha = float(np.clip((dp @ dp) / curvature, MIN_STEP, MAX_STEP))

        accepted = False
        for _ in range(opts.max_halvings + 1):
            candidate = objective.project(p - alpha * grad)
            candidate_value = objective(candidate)
            if candidate_value <= value:
                accepted = True
                break
            alpha /= 2.0

        if not accepted:
            converged = grad_norm <= 1e-3 * (1.0 + value)
            break

        q_old, _ = objective.cross_density(p)
        q_new, feasible = objective.cross_density(candidate)
        any_feasible = any_feasible or feasible
        old_state = np.append(p, q_old)
        change = np.linalg.norm(np.append(candidate, q_new) - old_state) / max(np.linalg.norm(old_state), 1e-300)

        previous_p, previous_grad = p, grad
        p, value = candidate, candidate_value
        trace.append(value)

        if change < opts.rel_tol:
            grad_norm = float(np.linalg.norm(p - objective.project(p - objective.gradient(p, opts.fd_step))))
            if grad_norm <= 1e-3 * (1.0 + value):
                converged = True
                break

    return p, trace, iterations, converged, grad_norm, any_feasible


def fit_kernel(
    target: npt.ArrayLike,
    s: Sequence[float],
    rho_bar: float,
    n: int,
    opts: Optional[FitOptions] = None
) -> FitReport:
    """
    Ajusta el kernel canónico cuyo n·ρ̄·λ(L_f) se acerca al espectro objetivo

    Args:
        target: Espectro objetivo λ̄ (longitud c)
        s: Geometría (longitud c)
        rho_bar: Densidad media ρ̄ ∈ (0, 1)
        n: Número de vértices
        opts: Hiperparámetros

    Returns:
        FitReport con el kernel ajustado (ρ = ρ̄, q común) y la traza del objetivo
    """
    opts = opts or FitOptions()
    target = np.asarray(target, dtype=np.float64)
    s = np.asarray(s, dtype=np.float64)

    if target.ndim != 1 or target.size == 0:
        raise GraphArgumentError("El espectro objetivo debe ser un vector no vacío")
    if not np.all(np.isfinite(target)):
        raise GraphArgumentError(f"El espectro objetivo tiene valores no finitos: {target.tolist()}")
    if s.shape != target.shape:
        raise GraphArgumentError(f"s y el objetivo deben tener la misma longitud: {s.size} vs {target.size}")
    if np.any(s <= 0) or abs(s.sum() - 1.0) > 1e-9:
        raise GraphArgumentError(f"Geometría inválida: {s.tolist()}")
    if not (0.0 < rho_bar < 1.0):
        raise GraphArgumentError(f"ρ̄ debe estar en (0, 1): {rho_bar}")
    if n < 2:
        raise GraphArgumentError(f"n debe ser >= 2: {n}")

    if np.any(target <= 0):
        logger.warning(
            f"Autovalores objetivo no positivos {target[target <= 0].tolist()}: "
            "un kernel no negativo no puede alcanzarlos; se ajusta igualmente"
        )

    objective = KernelObjective(target, s, rho_bar, n)
    sequencer = SeedSequencer(opts.seed)

    best = None
    for attempt in range(2):
        rng = sequencer.generator("init", attempt)
        p_start = rng.uniform(0.1, 0.9, size=target.size) / rho_bar
        result = _descend(objective, p_start, opts)
        if best is None or result[1][-1] < best[1][-1]:
            best = result + (attempt,)
        if result[3]:
            break
        logger.warning(f"Ajuste sin convergencia (intento {attempt + 1}); se reinicia con otra semilla")

    p, trace, iterations, converged, grad_norm, any_feasible, attempt = best
    q, feasible = objective.cross_density(p)
    if not any_feasible:
        logger.warning("||f||_1 = 1 no fue alcanzable en ningún iterado; se devuelve el mejor kernel")
        converged = False

    kernel = make_kernel(rho_bar, s, p, q)
    report = FitReport(
        kernel=kernel,
        target=target.tolist(),
        rho_bar=rho_bar,
        n=n,
        objective_trace=[objective.raw(v) for v in trace],
        iterations=iterations,
        converged=converged,
        gradient_norm=grad_norm,
        normalization_feasible=feasible,
        restarts=attempt
    )
    logger.info(
        f"Ajuste del kernel: c={target.size}, objetivo={report.objective:.6g}, "
        f"iteraciones={iterations}, convergió={converged}"
    )
    return report


def set_mean_index(graphs: Sequence[Graph], c: int) -> int:
    """Índice del grafo que minimiza la media de d²_{A_c} al resto (empates: el menor)"""
    spectra = sample_spectra(graphs, c)
    differences = spectra[:, None, :] - spectra[None, :, :]
    mean_squared = np.mean(np.sum(differences ** 2, axis=2), axis=1)
    return int(np.argmin(mean_squared))


def set_mean_graph(graphs: Sequence[Graph], c: int) -> Graph:
    """Grafo media del conjunto: argmin_{g ∈ conjunto} (1/Ñ) Σ_k d²_{A_c}(g, g_k)"""
    return graphs[set_mean_index(graphs, c)]


@lru_cache(maxsize=8)
def _enumerate_graphs(n: int) -> Tuple[Tuple[Tuple[Tuple[int, int], ...], ...], np.ndarray]:
    """
    Todos los grafos simples en n vértices

    Returns:
        (conjuntos de aristas ordenados, espectros completos decrecientes 2^E x n)
    """
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    count = 1 << len(pairs)
    codes = np.arange(count, dtype=np.int64)
    bits = ((codes[:, None] >> np.arange(len(pairs))) & 1).astype(np.float64)

    adjacency = np.zeros((count, n, n), dtype=np.float64)
    for k, (u, v) in enumerate(pairs):
        adjacency[:, u, v] = bits[:, k]
        adjacency[:, v, u] = bits[:, k]
    spectra = np.linalg.eigvalsh(adjacency)[:, ::-1].copy()

    edge_sets = tuple(
        tuple(pair for k, pair in enumerate(pairs) if code >> k & 1)
        for code in range(count)
    )
    return edge_sets, spectra


def _lexicographic_argmin(values: np.ndarray, edge_sets: Sequence[Tuple]) -> int:
    """Mínimo de `values`; empates (TIE_TOL) al conjunto de aristas lexicográficamente menor"""
    best = float(values.min())
    ties = np.flatnonzero(values <= best + TIE_TOL)
    return int(min(ties, key=lambda k: edge_sets[k]))


def _check_brute_force_size(n: int) -> None:
    if n > BRUTE_FORCE_MAX_N:
        raise GraphArgumentError(
            f"La enumeración exhaustiva sólo se admite para n <= {BRUTE_FORCE_MAX_N}: n={n}"
        )


def realizable_spectra(n: int, c: int) -> np.ndarray:
    """Λ_n^c: espectros truncados de todos los grafos en n vértices (con repeticiones)"""
    _check_brute_force_size(n)
    if not (1 <= c <= n):
        raise GraphArgumentError(f"c debe estar en [1, {n}]: {c}")
    return _enumerate_graphs(n)[1][:, :c].copy()


def closest_realizable_spectrum(target: npt.ArrayLike, n: int, c: int) -> Tuple[Spectrum, float]:
    """
    Proyección de un espectro objetivo sobre Λ_n^c

    Returns:
        (espectro realizable más cercano, distancia l2)
    """
    target = np.asarray(target, dtype=np.float64)
    spectra = realizable_spectra(n, c)
    if target.shape != (c,):
        raise GraphArgumentError(f"El objetivo debe tener longitud {c}")
    distances = np.sum((spectra - target) ** 2, axis=1)
    best = _lexicographic_argmin(distances, _enumerate_graphs(n)[0])
    return spectra[best].copy(), float(np.sqrt(distances[best]))


def brute_force_frechet_mean(sample: Sequence[Graph], c: int) -> Tuple[Graph, float]:
    """
    Media de Fréchet muestral exacta por enumeración de los 2^{n(n-1)/2} grafos

    Args:
        sample: Grafos con el mismo n <= 5
        c: Autovalores comparados

    Returns:
        (minimizador, objetivo (1/N) Σ_k d²_{A_c}); empates al conjunto de aristas
        lexicográficamente menor
    """
    n = check_sample(sample)
    _check_brute_force_size(n)
    edge_sets, spectra = _enumerate_graphs(n)
    if not (1 <= c <= n):
        raise GraphArgumentError(f"c debe estar en [1, {n}]: {c}")

    observed = sample_spectra(sample, c)
    candidates = spectra[:, :c]
    objectives = np.mean(
        np.sum((candidates[:, None, :] - observed[None, :, :]) ** 2, axis=2), axis=1
    )
    best = _lexicographic_argmin(objectives, edge_sets)
    return Graph.from_edges(n, edge_sets[best]), float(objectives[best])
