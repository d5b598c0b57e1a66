"""
Modelos de salida del pipeline y de la CLI
"""
from typing import List, Optional
from pydantic import BaseModel, Field
from .kernel_schema import FitReport


class BulkIteration(BaseModel):
    """Una iteración de la búsqueda del borde del bulk"""
    i: int = Field(..., description="Índice candidato del borde (base 1)", ge=1)
    r: float = Field(..., description="Radio del semicírculo, r = λ̄(i)")
    expected: List[float] = Field(..., description="Medias de los K mayores estadísticos de orden")
    deviations: List[float] = Field(..., description="|λ̄(i+j) - media_j|, j = 1..K")
    thresholds: List[float] = Field(..., description="Desviaciones estándar de los estadísticos de orden")

    @property
    def accepted(self) -> bool:
        return all(d <= s for d, s in zip(self.deviations, self.thresholds))


class BulkEstimate(BaseModel):
    """Resultado de la estimación de c"""
    c: int = Field(..., description="Autovalores fuera del bulk", ge=1)
    k_bulk: int = Field(..., description="K usado en la comparación", ge=1)
    exhausted: bool = Field(False, description="El recorrido agotó el espectro sin aceptar un borde")
    iterations: List[BulkIteration] = Field(default_factory=list)


class AlignmentRow(BaseModel):
    """Comparación por índice: objetivo, estimación del kernel y grafo realizado"""
    i: int = Field(..., ge=1)
    target: float = Field(..., description="λ̄_i de la muestra (marcador negro)")
    fitted: float = Field(..., description="n·ρ̄·λ_i(L_f) (marcador rojo)")
    realized: float = Field(..., description="λ_i del grafo media (marcador azul)")
    fitted_relative_error: float = Field(..., description="|fitted - target| / |target|")


class MeanResult(BaseModel):
    """Salida de la media de Fréchet muestral aproximada"""
    c: int = Field(..., ge=1)
    rho_bar: float = Field(..., description="Densidad (media o ponderada) usada como ρ")
    geometry: List[float] = Field(..., description="Vector s usado en el ajuste")
    fit: FitReport
    alignment: List[AlignmentRow] = Field(default_factory=list)
    bulk: Optional[BulkEstimate] = Field(None, description="Diagnóstico de c si fue estimado")
    set_mean_index: int = Field(..., description="Índice del grafo elegido entre los Ñ muestreados", ge=0)
    processing_time_seconds: float = Field(0.0)


class RegressionPoint(BaseModel):
    """Estimación de la regresión de Fréchet en un valor t"""
    t: float
    weights: List[float] = Field(..., description="s_{k,N}(t) para cada observación")
    result: MeanResult
