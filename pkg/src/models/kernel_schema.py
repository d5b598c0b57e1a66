"""
Kernel canónico del modelo de bloques estocástico y reporte del ajuste
Basado en la parametrización (ρ, s, p, Q) con c comunidades
"""
from typing import List, Optional
import numpy as np
from pydantic import BaseModel, Field, model_validator

ATOL = 1e-9


class SbmKernel(BaseModel):
    """
    Kernel canónico ρ·f(x, y; p, Q, s):
    - ρ·p_i en el bloque diagonal i
    - ρ·q_ij en el bloque (i, j), i != j
    Los bloques son intervalos semiabiertos [S_{i-1}, S_i) con S_i = Σ_{k<=i} s_k
    """
    rho: float = Field(..., description="Escala de densidad ρ_n", gt=0.0, le=1.0)
    s: List[float] = Field(..., description="Tamaños relativos de comunidad (suman 1)", min_length=1)
    p: List[float] = Field(..., description="Densidades dentro de cada comunidad")
    q_matrix: List[List[float]] = Field(..., description="Densidades entre comunidades (simétrica, diagonal nula)")

    class Config:
        frozen = True
        json_schema_extra = {
            "example": {
                "rho": 0.1,
                "s": [0.5, 0.25, 0.25],
                "p": [4.0, 2.0, 3.0],
                "q_matrix": [[0.0, 0.5, 0.5], [0.5, 0.0, 0.5], [0.5, 0.5, 0.0]]
            }
        }

    @model_validator(mode="after")
    def check_kernel(self) -> "SbmKernel":
        c = len(self.s)
        s = np.asarray(self.s, dtype=np.float64)
        p = np.asarray(self.p, dtype=np.float64)
        q = np.asarray(self.q_matrix, dtype=np.float64)

        if p.shape != (c,):
            raise ValueError(f"p debe tener longitud {c}, tiene {p.shape}")
        if q.shape != (c, c):
            raise ValueError(f"q_matrix debe ser {c}x{c}, es {q.shape}")
        if not (np.all(np.isfinite(s)) and np.all(np.isfinite(p)) and np.all(np.isfinite(q))):
            raise ValueError("El kernel tiene valores no finitos")
        if np.any(s <= 0):
            raise ValueError(f"s debe ser positivo: {self.s}")
        if abs(s.sum() - 1.0) > ATOL:
            raise ValueError(f"s debe sumar 1, suma {s.sum():.12g}")
        if np.any(p < 0) or np.any(q < 0):
            raise ValueError("p y q_matrix deben ser no negativos")
        if not np.allclose(q, q.T, rtol=0.0, atol=ATOL):
            raise ValueError("q_matrix debe ser simétrica")
        if np.any(np.abs(np.diag(q)) > ATOL):
            raise ValueError("q_matrix debe tener diagonal nula")
        if np.any(self.rho * p > 1.0 + ATOL) or np.any(self.rho * q > 1.0 + ATOL):
            raise ValueError("ρ·f sale de [0, 1]: el kernel no es un campo de probabilidades")
        return self

    @property
    def c(self) -> int:
        return len(self.s)

    @property
    def s_array(self) -> np.ndarray:
        return np.asarray(self.s, dtype=np.float64)

    @property
    def p_array(self) -> np.ndarray:
        return np.asarray(self.p, dtype=np.float64)

    @property
    def q_array(self) -> np.ndarray:
        return np.asarray(self.q_matrix, dtype=np.float64)

    @property
    def block_matrix(self) -> np.ndarray:
        """Matriz c x c de valores de f por bloque (p en la diagonal, q fuera)"""
        values = self.q_array.copy()
        np.fill_diagonal(values, self.p_array)
        return values

    @property
    def boundaries(self) -> np.ndarray:
        """Bordes acumulados S_1, ..., S_c"""
        return np.cumsum(self.s_array)

    @property
    def is_canonical_geometry(self) -> bool:
        """True si s es no creciente (geometría canónica)"""
        return bool(np.all(np.diff(self.s_array) <= ATOL))

    @property
    def uniform_cross_density(self) -> Optional[float]:
        """q común si todos los bloques fuera de la diagonal son iguales"""
        if self.c == 1:
            return 0.0
        off = self.q_array[~np.eye(self.c, dtype=bool)]
        if np.allclose(off, off[0], rtol=0.0, atol=0.0):
            return float(off[0])
        return None


class FitReport(BaseModel):
    """Resultado del ajuste del kernel a los autovalores objetivo"""
    kernel: SbmKernel = Field(..., description="Kernel ajustado")
    target: List[float] = Field(..., description="Espectro objetivo (longitud c)")
    rho_bar: float = Field(..., description="Densidad media usada como ρ")
    n: int = Field(..., description="Número de vértices", ge=2)
    objective_trace: List[float] = Field(default_factory=list, description="Objetivo en cada paso aceptado")
    iterations: int = Field(0, ge=0, description="Iteraciones de descenso")
    converged: bool = Field(False, description="Criterio de parada alcanzado")
    gradient_norm: float = Field(float("nan"), description="Norma del gradiente proyectado final")
    normalization_feasible: bool = Field(True, description="||f||_1 = 1 alcanzable en el óptimo")
    restarts: int = Field(0, ge=0, description="Reinicios aleatorios usados")

    class Config:
        arbitrary_types_allowed = True

    @property
    def c(self) -> int:
        return len(self.target)

    @property
    def objective(self) -> float:
        return self.objective_trace[-1] if self.objective_trace else float("inf")

    def fitted_eigenvalues(self) -> np.ndarray:
        """n·ρ̄·λ_i(L_f) del kernel ajustado (marcadores rojos de las figuras)"""
        from src.core.sbm_kernel import operator_eigenvalues
        return self.n * self.rho_bar * operator_eigenvalues(self.kernel)
