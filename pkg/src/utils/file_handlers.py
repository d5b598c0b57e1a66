"""
Utilidades para archivos de grafos, documentos de kernel y CSV

- Formato de grafo: primera línea `n <N>`, luego una arista `u v` (u < v) por línea,
  líneas con `#` ignoradas
- Documento de kernel en JSON
- CSV con '.' decimal y 17 cifras significativas
"""
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union
import pandas as pd
from pydantic import ValidationError
from src.core.exceptions import GraphArgumentError, GraphDataError
from src.core.graph import Graph
from src.core.sbm_kernel import make_kernel
from src.models.kernel_schema import SbmKernel
from src.utils.json_utils import clean_for_json

PathLike = Union[str, Path]
FLOAT_FORMAT = "%.17g"
MANIFEST_CSV = "manifest.csv"
MANIFEST_JSON = "manifest.json"


def graph_filename(index: int) -> str:
    return f"g_{index}.txt"


class FileHandler:
    """Lectura y escritura de los artefactos de la CLI"""

    @staticmethod
    def parse_graph(text: str, source: str = "<texto>") -> Graph:
        """
        Interpreta el formato de texto de un grafo

        Args:
            text: Contenido completo
            source: Nombre usado en los mensajes de error

        Returns:
            Graph

        Raises:
            GraphDataError: con el número de línea del problema
        """
        n: Optional[int] = None
        edges: List[Tuple[int, int]] = []
        seen = set()

        for line_number, raw_line in enumerate(text.splitlines(), start=1):
            line = raw_line.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()

            if n is None:
                if len(tokens) != 2 or tokens[0] != "n":
                    raise GraphDataError(f"{source}:{line_number}: se esperaba 'n <N>', se leyó '{line}'")
                try:
                    n = int(tokens[1])
                except ValueError:
                    raise GraphDataError(f"{source}:{line_number}: N no es entero: '{tokens[1]}'")
                if n < 1:
                    raise GraphDataError(f"{source}:{line_number}: N debe ser positivo: {n}")
                continue

            if len(tokens) != 2:
                raise GraphDataError(f"{source}:{line_number}: se esperaba 'u v', se leyó '{line}'")
            try:
                u, v = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise GraphDataError(f"{source}:{line_number}: vértices no enteros: '{line}'")
            if not (0 <= u < v < n):
                raise GraphDataError(f"{source}:{line_number}: se requiere 0 <= u < v < {n}: '{line}'")
            if (u, v) in seen:
                raise GraphDataError(f"{source}:{line_number}: arista duplicada ({u}, {v})")
            seen.add((u, v))
            edges.append((u, v))

        if n is None:
            raise GraphDataError(f"{source}: falta la cabecera 'n <N>'")
        return Graph.from_edges(n, edges)

    @staticmethod
    def format_graph(g: Graph) -> str:
        lines = [f"n {g.n}"] + [f"{u} {v}" for u, v in g.edges()]
        return "\n".join(lines) + "\n"

    @staticmethod
    def read_graph(path: PathLike) -> Graph:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            raise GraphDataError(f"No existe el archivo de grafo: {path}")
        except UnicodeDecodeError as e:
            raise GraphDataError(f"{path}: no es UTF-8 ({e})")
        return FileHandler.parse_graph(text, str(path))

    @staticmethod
    def write_graph(g: Graph, path: PathLike) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(FileHandler.format_graph(g), encoding="utf-8")
        return path

    @staticmethod
    def kernel_document(kernel: SbmKernel) -> Dict[str, Any]:
        """rho, s, p y q (escalar si todos los bloques cruzados son iguales)"""
        uniform = kernel.uniform_cross_density
        return clean_for_json({
            "rho": kernel.rho,
            "s": kernel.s,
            "p": kernel.p,
            "q": uniform if uniform is not None else kernel.q_matrix
        })

    @staticmethod
    def write_kernel(kernel: SbmKernel, path: PathLike, extra: Optional[Dict[str, Any]] = None) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        document = FileHandler.kernel_document(kernel)
        if extra:
            document.update(clean_for_json(extra))
        path.write_text(json.dumps(document, indent=2, sort_keys=False) + "\n", encoding="utf-8")
        return path

    @staticmethod
    def read_kernel(path: PathLike) -> SbmKernel:
        path = Path(path)
        try:
            document = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise GraphDataError(f"No se pudo leer el kernel {path}: {e}")

        try:
            return make_kernel(document["rho"], document["s"], document["p"], document.get("q", 0.0))
        except KeyError as e:
            raise GraphDataError(f"{path}: falta el campo {e}")
        except (GraphArgumentError, ValidationError) as e:
            raise GraphDataError(f"{path}: kernel inválido: {e}")

    @staticmethod
    def write_csv(df: pd.DataFrame, path: Optional[PathLike] = None) -> str:
        """
        Escribe un DataFrame con 17 cifras significativas

        Returns:
            El texto CSV (también escrito en `path` si se da)
        """
        text = df.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        if path is not None:
            path = Path(path)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
        return text

    @staticmethod
    def write_manifest(
        output_dir: PathLike,
        filenames: Sequence[str],
        parameters: Dict[str, Any],
        t_values: Optional[Sequence[float]] = None
    ) -> None:
        """manifest.json (parámetros, semilla, archivos) y manifest.csv (filename[, t])"""
        output_dir = Path(output_dir)
        table = pd.DataFrame({"filename": list(filenames)})
        if t_values is not None:
            table["t"] = list(t_values)
        FileHandler.write_csv(table, output_dir / MANIFEST_CSV)

        document = clean_for_json({**parameters, "files": list(filenames)})
        (output_dir / MANIFEST_JSON).write_text(json.dumps(document, indent=2) + "\n", encoding="utf-8")

    @staticmethod
    def read_manifest(input_dir: PathLike) -> pd.DataFrame:
        """
        Lee manifest.csv; debe tener la columna filename (y t opcional)

        Raises:
            GraphDataError: si falta o está mal formado
        """
        path = Path(input_dir) / MANIFEST_CSV
        try:
            table = pd.read_csv(path, dtype={"filename": str})
        except FileNotFoundError:
            raise GraphDataError(f"No existe {path}")
        except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            raise GraphDataError(f"{path}: CSV mal formado ({e})")
        if "filename" not in table.columns:
            raise GraphDataError(f"{path}: falta la columna 'filename'")
        if "t" in table.columns:
            t_values = pd.to_numeric(table["t"], errors="coerce")
            bad = t_values.isna()
            if bad.any():
                # +2: cabecera y numeración desde 1
                raise GraphDataError(f"{path}:{int(bad.idxmax()) + 2}: t no numérico")
            table["t"] = t_values.astype(float)
        return table
