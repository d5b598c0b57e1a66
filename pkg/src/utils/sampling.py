"""
Utilidades de aleatoriedad reproducible

Toda la aleatoriedad sale de una única semilla. Las sub-semillas se derivan
con BLAKE2b sobre "(semilla):(propósito):(índice)" y los generadores son
Philox (contador, 4x64) de numpy, portables entre plataformas.

Para el muestreo de aristas cada fila i tiene su propio flujo Philox con
clave (sub_semilla, i); el par (i, j), j > i, consume la posición j - i - 1
de ese flujo. El resultado no depende del orden de recorrido ni de los hilos.
"""
import hashlib
import numpy as np

UINT64_MASK = (1 << 64) - 1


class SeedSequencer:
    """Deriva semillas y generadores a partir de una semilla raíz"""

    def __init__(self, seed: int):
        if seed < 0 or seed > UINT64_MASK:
            raise ValueError(f"La semilla debe ser un entero sin signo de 64 bits: {seed}")
        self.seed = int(seed)

    def derive(self, purpose: str, index: int = 0) -> int:
        """
        Sub-semilla de 64 bits para (propósito, índice)

        Args:
            purpose: Etiqueta del uso (ej. "sample", "set-mean", "init")
            index: Índice dentro del propósito (ej. número de grafo)

        Returns:
            Entero en [0, 2^64)
        """
        return derive_seed(self.seed, purpose, index)

    def generator(self, purpose: str, index: int = 0) -> np.random.Generator:
        """Generador Philox para (propósito, índice)"""
        return philox_generator(self.derive(purpose, index))


def derive_seed(seed: int, purpose: str, index: int = 0) -> int:
    """Hash documentado de (semilla, propósito, índice) a 64 bits"""
    payload = f"{int(seed)}:{purpose}:{int(index)}".encode("utf-8")
    digest = hashlib.blake2b(payload, digest_size=8).digest()
    return int.from_bytes(digest, "little")


def philox_generator(seed: int, stream: int = 0) -> np.random.Generator:
    """
    Generador Philox con clave de 128 bits (seed, stream)

    Args:
        seed: Semilla de 64 bits
        stream: Sub-flujo (ej. la fila del grafo)

    Returns:
        np.random.Generator
    """
    key = ((int(seed) & UINT64_MASK) << 64) | (int(stream) & UINT64_MASK)
    return np.random.Generator(np.random.Philox(key=key))


def pair_uniforms(seed: int, n: int) -> np.ndarray:
    """
    Matriz n x n de uniformes en [0, 1) para los pares i < j

    La entrada (i, j) se toma del flujo de la fila i; el triángulo inferior
    y la diagonal quedan en 1.0 (nunca producen arista).
    """
    uniforms = np.ones((n, n), dtype=np.float64)
    for i in range(n - 1):
        uniforms[i, i + 1:] = philox_generator(seed, i).random(n - i - 1)
    return uniforms
