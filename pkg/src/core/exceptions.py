"""
Categorías de error del paquete

La CLI traduce cada categoría a un código de salida:
    GraphArgumentError -> 2, GraphDataError -> 3, NumericFailure -> 4
"""


class SpectralFrechetError(Exception):
    """Error base del paquete"""

    exit_code = 1


class GraphArgumentError(SpectralFrechetError, ValueError):
    """Argumento fuera de rango o precondición violada"""

    exit_code = 2


class KernelInfeasibleError(GraphArgumentError):
    """Kernel con valores fuera de [0, 1] o autovalores objetivo no realizables"""


class GraphDataError(SpectralFrechetError, ValueError):
    """Archivo de grafo, manifiesto o muestra mal formados"""

    exit_code = 3


class NumericFailure(SpectralFrechetError, RuntimeError):
    """Falla numérica: cuadratura, optimización o densidad ponderada inválida"""

    exit_code = 4
