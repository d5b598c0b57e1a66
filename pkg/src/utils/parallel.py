"""
Ejecución paralela con tope de hilos

Los resultados se devuelven en el orden de entrada, así la salida no depende
del número de hilos. numpy/scipy liberan el GIL en eigh, por eso alcanzan hilos.
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar
from src.utils.settings import get_settings, resolve_threads

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(
    func: Callable[[T], R],
    items: Iterable[T],
    threads: Optional[int] = None
) -> List[R]:
    """
    Aplica `func` a cada elemento

    Args:
        func: Función pura
        items: Elementos de entrada
        threads: Tope de hilos (None = SPECTRAL_FRECHET_THREADS)

    Returns:
        Lista de resultados en el orden de `items`
    """
    items = list(items)
    workers = resolve_threads(get_settings().threads if threads is None else threads)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(func, items))
