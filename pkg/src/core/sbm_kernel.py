"""
Kernels canónicos de bloques estocásticos

- Valor puntual del kernel y etiquetas de bloque en la grilla i/n
- Autovalores del operador integral L_f por reducción exacta c x c
- Construcción de un kernel diagonal por bloques con autovalores dados
- Normalización ||f||_1 = 1 mediante la densidad cruzada común q
- Estimación de primer orden E[λ_i(A)] ≈ n·ρ·λ_i(L_f)
"""
from typing import Sequence, Tuple
import numpy as np
import numpy.typing as npt
from pydantic import ValidationError
from src.core.exceptions import GraphArgumentError, KernelInfeasibleError
from src.core.graph import Spectrum, descending
from src.models.kernel_schema import SbmKernel
from custom_logging import get_logger

logger = get_logger(__name__)

# Rango permitido para ρ·p_i y ρ·q durante la optimización
FEASIBLE_MIN = 1e-6
FEASIBLE_MAX = 1.0


def make_kernel(
    rho: float,
    s: Sequence[float],
    p: Sequence[float],
    q: "float | npt.ArrayLike" = 0.0
) -> SbmKernel:
    """
    Construye un SbmKernel validado

    Args:
        rho: Escala ρ_n
        s: Geometría (tamaños relativos)
        p: Densidades dentro de comunidad
        q: Densidad cruzada común (escalar) o matriz c x c

    Raises:
        KernelInfeasibleError: si el kernel no es válido
    """
    c = len(s)
    q_values = np.asarray(q, dtype=np.float64)
    if q_values.ndim == 0:
        q_matrix = np.full((c, c), float(q_values))
        np.fill_diagonal(q_matrix, 0.0)
    else:
        q_matrix = q_values
    try:
        return SbmKernel(
            rho=float(rho),
            s=[float(v) for v in s],
            p=[float(v) for v in p],
            q_matrix=np.asarray(q_matrix, dtype=np.float64).tolist()
        )
    except ValidationError as e:
        raise KernelInfeasibleError(f"Kernel inválido: {e.errors()[0]['msg']}") from e


def block_index(kernel: SbmKernel, x: npt.ArrayLike) -> npt.NDArray[np.int64]:
    """
    Comunidad de cada coordenada x con intervalos [S_{i-1}, S_i)

    x = 1 (último vértice de la grilla i/n) cae en la última comunidad.
    """
    index = np.searchsorted(kernel.boundaries, np.asarray(x, dtype=np.float64), side="right")
    return np.minimum(index, kernel.c - 1).astype(np.int64)


def kernel_value(kernel: SbmKernel, x: float, y: float) -> float:
    """
    ρ·f(x, y): ρ·p_i en el bloque diagonal i, ρ·q_ij fuera de la diagonal

    Raises:
        GraphArgumentError: si x o y no están en [0, 1)
    """
    if not (0.0 <= x < 1.0 and 0.0 <= y < 1.0):
        raise GraphArgumentError(f"(x, y) debe estar en [0, 1)^2: ({x}, {y})")
    i, j = block_index(kernel, [x, y])
    return float(kernel.rho * kernel.block_matrix[i, j])


def grid_blocks(kernel: SbmKernel, n: int) -> npt.NDArray[np.int64]:
    """Comunidad de cada vértice en la grilla i/n, i = 1..n"""
    if n < 1:
        raise GraphArgumentError(f"n debe ser positivo: {n}")
    return block_index(kernel, np.arange(1, n + 1) / n)


def edge_probabilities(kernel: SbmKernel, n: int) -> npt.NDArray[np.float64]:
    """Matriz n x n con ρ·f(i/n, j/n) (diagonal incluida, no se usa)"""
    labels = grid_blocks(kernel, n)
    return kernel.rho * kernel.block_matrix[np.ix_(labels, labels)]


def operator_eigenvalues(kernel: SbmKernel) -> Spectrum:
    """
    Autovalores de L_f: t -> ∫ f(·, y) t(y) dy, de mayor a menor (sin ρ)

    Las autofunciones de un kernel constante por bloques son constantes por
    bloques, así que el espectro no nulo coincide con el de la matriz
    simétrica M_ij = f_ij·sqrt(s_i s_j).
    """
    s = kernel.s_array
    weights = np.sqrt(np.outer(s, s))
    return descending(np.linalg.eigvalsh(kernel.block_matrix * weights))


def kernel_from_target_eigenvalues(
    theta: npt.ArrayLike,
    s: Sequence[float],
    rho: float
) -> SbmKernel:
    """
    Kernel diagonal por bloques con λ_i(L_f) = θ_i: p_i = θ_i / s_i, Q = 0

    Raises:
        GraphArgumentError: θ no positivo, no estrictamente decreciente o de otra longitud que s
        KernelInfeasibleError: ρ·θ_i/s_i > 1
    """
    theta = np.asarray(theta, dtype=np.float64)
    s = np.asarray(s, dtype=np.float64)
    if theta.ndim != 1 or theta.shape != s.shape:
        raise GraphArgumentError(f"θ y s deben tener la misma longitud: {theta.shape} vs {s.shape}")
    if np.any(theta <= 0):
        raise GraphArgumentError(f"Los autovalores objetivo deben ser positivos: {theta.tolist()}")
    if np.any(np.diff(theta) >= 0):
        raise GraphArgumentError(f"Los autovalores objetivo deben ser distintos y decrecientes: {theta.tolist()}")

    p = theta / s
    if np.any(rho * p > 1.0):
        raise KernelInfeasibleError(
            f"ρ·θ_i/s_i > 1 para algún i (max {float(np.max(rho * p)):.6g}): no hay kernel acotado por 1"
        )
    logger.debug(f"Kernel diagonal por bloques con p={p.tolist()}")
    return make_kernel(rho, s, p, 0.0)


def normalize_cross_density(s: Sequence[float], p: Sequence[float]) -> Tuple[float, bool]:
    """
    q común tal que ||f||_1 = Σ p_i s_i² + q (1 - Σ s_i²) = 1

    Args:
        s: Geometría
        p: Densidades dentro de comunidad

    Returns:
        (q, factible). Si Σ p_i s_i² > 1 se devuelve q = 0 y factible = False.
        Con c = 1 (denominador nulo) q = 0 y factible indica si Σ p s² = 1.
    """
    s = np.asarray(s, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    diagonal_mass = float(np.sum(p * s ** 2))
    off_diagonal_area = 1.0 - float(np.sum(s ** 2))

    if off_diagonal_area <= 1e-15:
        return 0.0, bool(abs(diagonal_mass - 1.0) <= 1e-12)
    if diagonal_mass > 1.0 + 1e-12:
        return 0.0, False
    return max(1.0 - diagonal_mass, 0.0) / off_diagonal_area, True


def l1_norm(kernel: SbmKernel) -> float:
    """||f||_1 sobre el cuadrado unidad, contando los bloques (i, j) y (j, i)"""
    s = kernel.s_array
    return float(np.sum(kernel.block_matrix * np.outer(s, s)))


def expected_density(kernel: SbmKernel) -> float:
    """Densidad esperada de los grafos muestreados: ρ·||f||_1"""
    return kernel.rho * l1_norm(kernel)


def expected_extreme_eigenvalues(kernel: SbmKernel, n: int) -> Spectrum:
    """E[σ_c(A)] ≈ n·ρ·λ_i(L_f) (estimación de primer orden, error O(sqrt(ρ)))"""
    if n < 2:
        raise GraphArgumentError(f"n debe ser >= 2: {n}")
    return n * kernel.rho * operator_eigenvalues(kernel)


def interpolated_kernel(t: float, rho: float = 1.0, q: float = 0.0) -> SbmKernel:
    """
    Kernel donde una segunda comunidad aparece de forma continua en t ∈ [0, 1]

    s(t) = [1 - t/2, t/2], ρ·p(t) = [0.2 + t/2, 0.1 + t/2]; en t = 0 queda
    una única comunidad con ρ·p = 0.2.

    Args:
        t: Parámetro de la trayectoria
        rho: Escala ρ (p se expresa como ρ·p(t)/ρ)
        q: Densidad cruzada ρ·q
    """
    if not (0.0 <= t <= 1.0):
        raise GraphArgumentError(f"t debe estar en [0, 1]: {t}")
    if t == 0.0:
        return make_kernel(rho, [1.0], [0.2 / rho])
    s = [1.0 - t / 2.0, t / 2.0]
    rho_p = np.array([0.2 + t / 2.0, 0.1 + t / 2.0])
    return make_kernel(rho, s, rho_p / rho, q / rho)
