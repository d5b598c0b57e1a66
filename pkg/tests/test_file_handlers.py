"""
Tests de formatos de archivo e ingesta de muestras
"""
import json
import numpy as np
import pandas as pd
import pytest
from src.core.exceptions import GraphDataError
from src.core.graph import Graph
from src.core.ingestion import GraphIngestion
from src.core.sbm_kernel import make_kernel
from src.models.response_models import AlignmentRow
from src.utils.file_handlers import FileHandler, graph_filename
from src.utils.json_utils import clean_for_json


class TestGraphFormat:
    """Texto `n <N>` seguido de aristas `u v`"""

    def test_parse(self):
        g = FileHandler.parse_graph("n 4\n0 1\n2 3\n")
        assert g.n == 4
        assert list(g.edges()) == [(0, 1), (2, 3)]

    def test_comments_and_blank_lines(self):
        text = "# muestra\n\nn 3\n# arista\n0 2\n\n"
        assert list(FileHandler.parse_graph(text).edges()) == [(0, 2)]

    def test_format_is_sorted(self):
        g = Graph.from_edges(4, [(2, 3), (0, 1), (0, 3)])
        assert FileHandler.format_graph(g) == "n 4\n0 1\n0 3\n2 3\n"

    def test_isolated_vertices_survive(self, tmp_path):
        g = Graph.from_edges(6, [(0, 1)])
        path = FileHandler.write_graph(g, tmp_path / "g.txt")
        assert FileHandler.read_graph(path) == g

    @pytest.mark.parametrize("text, line", [
        ("0 1\n", 1),                   # falta la cabecera
        ("n x\n", 1),
        ("n 3\n0 1\n1 0\n", 3),         # u > v
        ("n 3\n0 1\n0 1\n", 3),         # duplicada
        ("n 3\n0 3\n", 2),              # fuera de rango
        ("n 3\n# c\n0 1 2\n", 3),       # tres columnas
        ("n 3\n1 1\n", 2),              # lazo
    ])
    def test_errors_report_line(self, text, line):
        with pytest.raises(GraphDataError, match=f"g.txt:{line}:"):
            FileHandler.parse_graph(text, "g.txt")

    def test_empty_file(self):
        with pytest.raises(GraphDataError):
            FileHandler.parse_graph("# nada\n", "g.txt")

    def test_missing_file(self, tmp_path):
        with pytest.raises(GraphDataError):
            FileHandler.read_graph(tmp_path / "no.txt")


class TestKernelDocument:

    def test_uniform_q_is_scalar(self):
        kernel = make_kernel(0.1, [0.5, 0.5], [2.0, 1.0], 0.5)
        document = FileHandler.kernel_document(kernel)
        assert document == {"rho": 0.1, "s": [0.5, 0.5], "p": [2.0, 1.0], "q": 0.5}

    def test_matrix_q(self):
        q = [[0.0, 0.1, 0.2], [0.1, 0.0, 0.3], [0.2, 0.3, 0.0]]
        kernel = make_kernel(1.0, [0.4, 0.3, 0.3], [0.5, 0.5, 0.5], q)
        assert FileHandler.kernel_document(kernel)["q"] == q

    def test_write_and_read(self, tmp_path):
        kernel = make_kernel(0.2, [0.5, 0.25, 0.25], [3.0, 2.0, 1.0], 0.4)
        path = FileHandler.write_kernel(kernel, tmp_path / "kernel.json", extra={"c": 3, "converged": True})
        document = json.loads(path.read_text())
        assert document["c"] == 3
        assert document["converged"] is True
        assert FileHandler.read_kernel(path) == kernel

    def test_invalid_kernel_file(self, tmp_path):
        path = tmp_path / "kernel.json"
        path.write_text(json.dumps({"rho": 1.0, "s": [0.5, 0.5], "p": [2.0, 0.1]}))
        with pytest.raises(GraphDataError):
            FileHandler.read_kernel(path)


class TestCsvAndManifest:

    def test_full_precision(self):
        text = FileHandler.write_csv(pd.DataFrame({"x": [1 / 3]}))
        assert text == "x\n0.33333333333333331\n"

    def test_manifest_round_trip(self, tmp_path):
        names = [graph_filename(k) for k in range(3)]
        FileHandler.write_manifest(tmp_path, names, {"seed": 5}, t_values=[0.1, 0.5, 0.9])
        table = FileHandler.read_manifest(tmp_path)
        assert table["filename"].tolist() == names
        assert table["t"].tolist() == [0.1, 0.5, 0.9]
        document = json.loads((tmp_path / "manifest.json").read_text())
        assert document["seed"] == 5
        assert document["files"] == names

    def test_manifest_without_filename(self, tmp_path):
        (tmp_path / "manifest.csv").write_text("name,t\ng_0.txt,0.1\n")
        with pytest.raises(GraphDataError):
            FileHandler.read_manifest(tmp_path)

    def test_manifest_with_bad_t(self, tmp_path):
        (tmp_path / "manifest.csv").write_text("filename,t\ng_0.txt,0.1\ng_1.txt,abc\n")
        with pytest.raises(GraphDataError, match=":3:"):
            FileHandler.read_manifest(tmp_path)


class TestIngestion:
    """Lectura de un directorio de muestra"""

    def write_sample(self, directory, graphs):
        for k, g in enumerate(graphs):
            FileHandler.write_graph(g, directory / graph_filename(k))

    def test_numeric_order(self, tmp_path):
        graphs = [Graph.from_edges(4, [(0, k % 3 + 1)]) for k in range(12)]
        self.write_sample(tmp_path, graphs)
        read, t_values = GraphIngestion().ingest(tmp_path)
        assert read == graphs
        assert t_values is None

    def test_manifest_order_and_covariates(self, tmp_path, k3, path3):
        self.write_sample(tmp_path, [k3, path3])
        FileHandler.write_manifest(tmp_path, ["g_1.txt", "g_0.txt"], {}, t_values=[1.0, 0.0])
        read, t_values = GraphIngestion().ingest(tmp_path)
        assert read == [path3, k3]
        assert t_values == [1.0, 0.0]

    def test_ignores_other_files(self, tmp_path, k3):
        self.write_sample(tmp_path, [k3])
        (tmp_path / "notes.txt").write_text("n 5\n")
        read, _ = GraphIngestion().ingest(tmp_path)
        assert read == [k3]

    def test_mixed_sizes(self, tmp_path, k3):
        self.write_sample(tmp_path, [k3, Graph.complete(4)])
        with pytest.raises(GraphDataError):
            GraphIngestion().ingest(tmp_path)

    def test_empty_directory(self, tmp_path):
        with pytest.raises(GraphDataError):
            GraphIngestion().ingest(tmp_path)

    def test_missing_directory(self, tmp_path):
        with pytest.raises(GraphDataError):
            GraphIngestion().ingest(tmp_path / "missing")


class TestJsonCleaning:

    def test_numpy_and_non_finite(self):
        data = {"a": np.array([1.5, np.nan]), "b": np.int64(3), "c": np.bool_(True), "d": float("inf")}
        assert clean_for_json(data) == {"a": [1.5, None], "b": 3, "c": True, "d": None}

    def test_models_and_paths(self, tmp_path):
        row = AlignmentRow(i=1, target=2.0, fitted=2.0, realized=1.0, fitted_relative_error=0.0)
        assert clean_for_json(row)["realized"] == 1.0
        assert clean_for_json(tmp_path) == str(tmp_path)
