"""
Modelos de entrada: hiperparámetros del ajuste y configuración de la CLI
"""
from pathlib import Path
from typing import List, Literal, Optional
from pydantic import BaseModel, Field, field_validator, model_validator
from src.utils.settings import DEFAULT_SEED


class FitOptions(BaseModel):
    """Hiperparámetros del ajuste del kernel y del grafo media"""
    max_iters: int = Field(500, description="Máximo de iteraciones de descenso", gt=0)
    rel_tol: float = Field(1e-4, description="Tolerancia del cambio relativo en (p, q)", gt=0.0, lt=1.0)
    fd_step: float = Field(1e-4, description="Paso de diferencias centradas por coordenada de p", gt=0.0)
    step_size: float = Field(0.1, description="Paso inicial del descenso proyectado", gt=0.0)
    max_halvings: int = Field(30, description="Máximo de reducciones del paso por iteración", gt=0)
    n_tilde: int = Field(5, description="Ñ: grafos muestreados para el grafo media", gt=0)
    k_bulk: int = Field(5, description="K para la estimación de c", gt=0)
    seed: int = Field(DEFAULT_SEED, description="Semilla raíz", ge=0, lt=2**64)
    c_override: Optional[int] = Field(None, description="c fijo (omite la estimación)", gt=0)
    s_override: Optional[List[float]] = Field(None, description="Geometría fija (omite la por defecto)")

    class Config:
        json_schema_extra = {
            "example": {
                "max_iters": 500,
                "rel_tol": 1e-4,
                "fd_step": 1e-4,
                "step_size": 0.1,
                "n_tilde": 5,
                "seed": DEFAULT_SEED,
                "c_override": 3
            }
        }

    @model_validator(mode="after")
    def check_geometry(self) -> "FitOptions":
        if self.s_override is not None:
            if any(v <= 0 for v in self.s_override):
                raise ValueError("s_override debe ser positivo")
            if abs(sum(self.s_override) - 1.0) > 1e-9:
                raise ValueError("s_override debe sumar 1")
            if self.c_override is not None and len(self.s_override) != self.c_override:
                raise ValueError("s_override y c_override no coinciden")
        return self


class GenerateRequest(BaseModel):
    """Parámetros del subcomando generate"""
    ensemble: Literal["sbm", "ba", "ws", "er", "sbm-trend", "sbm-interp"]
    n: int = Field(..., ge=2)
    count: int = Field(..., description="N: grafos a generar", gt=0)
    seed: int = Field(DEFAULT_SEED, ge=0, lt=2**64)
    output_dir: Path
    m0: Optional[int] = Field(None, gt=0)
    m: Optional[int] = Field(None, gt=0)
    K: Optional[int] = Field(None, ge=0)
    beta: Optional[float] = Field(None, ge=0.0, le=1.0)
    p: Optional[List[float]] = Field(None, description="p (sbm, er) o ρ·p(0) (sbm-trend)")
    p_slope: Optional[List[float]] = Field(None, description="Pendiente de ρ·p(t) (sbm-trend)")
    q: Optional[float] = Field(None, ge=0.0, description="Densidad cruzada (ρ·q en sbm-trend y sbm-interp)")
    s: Optional[List[float]] = Field(None, description="Geometría; se normaliza a suma 1")
    rho: float = Field(1.0, gt=0.0, le=1.0)

    @field_validator("s")
    @classmethod
    def normalize_geometry(cls, value: Optional[List[float]]) -> Optional[List[float]]:
        if value is None:
            return value
        total = sum(value)
        if total <= 0 or any(v <= 0 for v in value):
            raise ValueError("s debe ser positivo")
        return [v / total for v in value]

    @model_validator(mode="after")
    def check_ensemble_parameters(self) -> "GenerateRequest":
        required = {
            "ba": ("m0", "m"),
            "ws": ("K", "beta"),
            "er": ("p",),
            "sbm": ("p", "q", "s"),
            "sbm-trend": ("p", "p_slope", "q", "s"),
            "sbm-interp": ("q",),
        }[self.ensemble]
        missing = [name for name in required if getattr(self, name) is None]
        if missing:
            raise ValueError(f"Faltan parámetros para '{self.ensemble}': {', '.join(missing)}")
        if self.ensemble in ("sbm-trend", "sbm-interp") and self.count < 2:
            raise ValueError(f"{self.ensemble} necesita al menos 2 grafos")
        return self


class RunConfig(BaseModel):
    """Parámetros comunes de los subcomandos que leen una muestra"""
    input_dir: Path
    output_dir: Optional[Path] = None
    options: FitOptions = Field(default_factory=FitOptions)
    t_values: List[float] = Field(default_factory=list, description="Valores t para regress")

    @field_validator("input_dir")
    @classmethod
    def input_must_exist(cls, value: Path) -> Path:
        if not value.is_dir():
            raise ValueError(f"El directorio de entrada no existe: {value}")
        return value
