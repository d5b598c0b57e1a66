"""
Validación de la muestra y control de calidad del resultado
- Verificación de tamaños y densidades de la muestra
- Reporte de alineación por índice: objetivo, estimación del kernel, grafo realizado
- Error relativo máximo como medida de calidad
"""
from typing import List, Sequence
import numpy as np
import numpy.typing as npt
import pandas as pd
from src.core.exceptions import GraphArgumentError
from src.core.graph import Graph, check_sample, density
from src.models.response_models import AlignmentRow


class SampleValidation:
    """Valida muestras de grafos y compara espectros del resultado"""

    def validate_sample(self, sample: Sequence[Graph]) -> npt.NDArray[np.float64]:
        """
        Verifica que la muestra sea utilizable por la media de Fréchet

        Returns:
            Densidades de cada grafo

        Raises:
            GraphArgumentError: muestra vacía, tamaños distintos, n < 2 o densidad fuera de (0, 1)
        """
        n = check_sample(sample)
        if n < 2:
            raise GraphArgumentError(f"Los grafos necesitan n >= 2: n={n}")

        densities = np.array([density(g) for g in sample])
        bad = np.flatnonzero((densities <= 0.0) | (densities >= 1.0))
        if bad.size:
            k = int(bad[0])
            raise GraphArgumentError(
                f"La densidad de cada grafo debe estar en (0, 1): el grafo {k} tiene densidad {densities[k]:.6g}"
            )
        return densities

    def alignment_report(
        self,
        target: npt.ArrayLike,
        fitted: npt.ArrayLike,
        realized: npt.ArrayLike
    ) -> List[AlignmentRow]:
        """
        Filas (i, objetivo, n·ρ̄·λ_i(L_f), λ_i del grafo media)

        Args:
            target: Espectro medio truncado de la muestra
            fitted: Autovalores predichos por el kernel ajustado
            realized: Espectro truncado del grafo devuelto
        """
        target = np.asarray(target, dtype=np.float64)
        fitted = np.asarray(fitted, dtype=np.float64)
        realized = np.asarray(realized, dtype=np.float64)
        if not (target.shape == fitted.shape == realized.shape):
            raise GraphArgumentError("Los tres espectros deben tener la misma longitud")

        rows = []
        for i, (t, f, r) in enumerate(zip(target, fitted, realized), start=1):
            error = abs(f - t) / abs(t) if t != 0 else float(abs(f - t))
            rows.append(AlignmentRow(i=i, target=t, fitted=f, realized=r, fitted_relative_error=error))
        return rows

    @staticmethod
    def max_relative_error(rows: Sequence[AlignmentRow]) -> float:
        """Peor error relativo entre la estimación del kernel y el objetivo"""
        return max((row.fitted_relative_error for row in rows), default=0.0)

    @staticmethod
    def alignment_frame(rows: Sequence[AlignmentRow]) -> pd.DataFrame:
        """Tabla con las columnas i, target, fitted, realized"""
        return pd.DataFrame(
            [{"i": row.i, "target": row.target, "fitted": row.fitted, "realized": row.realized} for row in rows],
            columns=["i", "target", "fitted", "realized"]
        )
