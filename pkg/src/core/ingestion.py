"""
Step 1: Ingesta de la muestra de grafos
Entrada: directorio con g_<k>.txt y, opcionalmente, manifest.csv (filename[, t])
"""
import re
from pathlib import Path
from typing import List, Optional, Tuple, Union
from src.core.exceptions import GraphDataError
from src.core.graph import Graph
from src.utils.file_handlers import MANIFEST_CSV, FileHandler
from src.utils.parallel import parallel_map
from custom_logging import get_logger

logger = get_logger(__name__)

GRAPH_FILE_PATTERN = re.compile(r"^g_(\d+)\.txt$")


class GraphIngestion:
    """Maneja la lectura de una muestra de grafos desde disco"""

    def __init__(self):
        self.file_handler = FileHandler()

    def list_graph_files(self, input_dir: Union[str, Path]) -> Tuple[List[Path], Optional[List[float]]]:
        """
        Archivos de la muestra en orden

        Con manifest.csv se respeta su orden (y se devuelven los t si existen);
        sin él, g_<k>.txt ordenados por k.

        Returns:
            (rutas, valores t o None)
        """
        input_dir = Path(input_dir)
        if not input_dir.is_dir():
            raise GraphDataError(f"El directorio de entrada no existe: {input_dir}")

        if (input_dir / MANIFEST_CSV).exists():
            table = self.file_handler.read_manifest(input_dir)
            paths = [input_dir / name for name in table["filename"]]
            t_values = table["t"].tolist() if "t" in table.columns else None
            return paths, t_values

        indexed = []
        for path in input_dir.iterdir():
            match = GRAPH_FILE_PATTERN.match(path.name)
            if match:
                indexed.append((int(match.group(1)), path))
        return [path for _, path in sorted(indexed)], None

    def ingest(self, input_dir: Union[str, Path]) -> Tuple[List[Graph], Optional[List[float]]]:
        """
        Lee todos los grafos de la muestra

        Args:
            input_dir: Directorio de la muestra

        Returns:
            Tupla de (grafos, valores t del manifiesto o None)

        Raises:
            GraphDataError: directorio vacío, archivo mal formado o tamaños distintos
        """
        paths, t_values = self.list_graph_files(input_dir)
        if not paths:
            raise GraphDataError(f"No hay archivos de grafo en {input_dir}")

        graphs = parallel_map(self.file_handler.read_graph, paths)

        sizes = {g.n for g in graphs}
        if len(sizes) != 1:
            raise GraphDataError(f"La muestra en {input_dir} mezcla tamaños de grafo: {sorted(sizes)}")

        logger.info(f"Ingesta completada: {len(graphs)} grafos con n={graphs[0].n} desde {input_dir}")
        return graphs, t_values
