"""
Configuración del paquete desde variables de entorno
Prefijo: SPECTRAL_FRECHET_ (ej. SPECTRAL_FRECHET_THREADS=4)
"""
import os
from functools import lru_cache
from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings

load_dotenv()

DEFAULT_SEED = 20240601


class FrechetSettings(BaseSettings):
    """Configuración global; los flags de la CLI tienen prioridad"""
    threads: int = Field(0, ge=0, description="Máximo de hilos (0 = automático)")
    log_level: str = Field("INFO", description="Nivel de logging de la CLI")
    default_seed: int = Field(DEFAULT_SEED, ge=0, lt=2**64, description="Semilla por defecto")
    k_bulk: int = Field(5, ge=1, description="K por defecto para la estimación de c")
    n_tilde: int = Field(5, ge=1, description="Tamaño por defecto del conjunto para el grafo media")

    class Config:
        env_prefix = "SPECTRAL_FRECHET_"
        case_sensitive = False


@lru_cache(maxsize=1)
def get_settings() -> FrechetSettings:
    """Instancia única de la configuración"""
    return FrechetSettings()


def resolve_threads(threads: int) -> int:
    """Convierte el valor configurado (0 = automático) en un número de hilos"""
    if threads > 0:
        return threads
    return os.cpu_count() or 1
