"""
CLI - Media de Fréchet espectral de grafos

Subcomandos:
    generate    Genera una muestra de grafos aleatorios (sbm, ba, ws, er, sbm-trend, sbm-interp)
    estimate-c  Estima el número de autovalores fuera del bulk
    mean        Media de Fréchet muestral aproximada
    regress     Regresión de Fréchet lineal sobre un manifiesto (filename, t)
    spectrum    Espectro (completo o truncado) de un archivo de grafo

Ejecutar con:
    python main.py mean --input data/ba --output out/ba

Códigos de salida: 0 éxito, 2 argumento inválido, 3 datos mal formados, 4 falla numérica
"""
import functools
import json
import sys
from pathlib import Path
from typing import Callable, List, Optional, Sequence
import click
import numpy as np
import pandas as pd
from dotenv import load_dotenv
from pydantic import ValidationError
from tqdm import tqdm
from src.core.bulk_estimator import estimate_c_with_diagnostics
from src.core.exceptions import GraphArgumentError, SpectralFrechetError
from src.core.graph import Graph, adjacency_spectrum, bulk_histogram, mean_spectrum, sample_spectra
from src.core.ingestion import GraphIngestion
from src.core.pipeline import FrechetMeanPipeline
from src.core.random_graphs import (
    barabasi_albert,
    erdos_renyi,
    interpolated_dataset,
    sample_kernel_graph,
    sbm_trend_dataset,
    watts_strogatz,
)
from src.core.regression import FrechetRegression, RegressionDataset
from src.core.sbm_kernel import make_kernel
from src.core.validation import SampleValidation
from src.models.request_models import FitOptions, GenerateRequest, RunConfig
from src.models.response_models import BulkEstimate, MeanResult
from src.utils.file_handlers import FileHandler, graph_filename
from src.utils.json_utils import clean_for_json
from src.utils.sampling import derive_seed
from src.utils.settings import get_settings
from custom_logging import get_logger, setup_logger

# Cargar variables de entorno
load_dotenv()

logger = get_logger("src.cli")

DEFAULT_T_GRID = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)
# Redondeo de la salida de `spectrum` a la precisión del eigensolver
SPECTRUM_DECIMALS = 12


def handle_errors(command: Callable) -> Callable:
    """Traduce las categorías de error a códigos de salida y `Error: ...` en stderr"""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except SpectralFrechetError as e:
            click.echo(f"Error: {e}", err=True)
            sys.exit(e.exit_code)
        except ValidationError as e:
            details = "; ".join(f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors())
            click.echo(f"Error: {details}", err=True)
            sys.exit(GraphArgumentError.exit_code)

    return wrapper


def parse_float_list(ctx: click.Context, param: click.Parameter, value: Optional[str]) -> Optional[List[float]]:
    """'0.4,0.5,0.6' -> [0.4, 0.5, 0.6]"""
    if value is None:
        return None
    try:
        return [float(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise click.BadParameter(f"lista de números separada por comas: '{value}'")


def fit_options(
    seed: Optional[int],
    k_bulk: Optional[int],
    c: Optional[int],
    n_tilde: Optional[int],
    max_iters: Optional[int],
    tol: Optional[float],
    s: Optional[List[float]] = None
) -> FitOptions:
    """Los flags tienen prioridad sobre la configuración y ésta sobre los valores por defecto"""
    settings = get_settings()
    values = {
        "seed": settings.default_seed if seed is None else seed,
        "k_bulk": settings.k_bulk if k_bulk is None else k_bulk,
        "n_tilde": settings.n_tilde if n_tilde is None else n_tilde,
        "c_override": c,
        "s_override": s,
    }
    if max_iters is not None:
        values["max_iters"] = max_iters
    if tol is not None:
        values["rel_tol"] = tol
    return FitOptions(**values)


def fit_flags(command: Callable) -> Callable:
    """Flags comunes de los subcomandos que ajustan un kernel"""
    options = [
        click.option("--k-bulk", type=int, default=None, help="K para la estimación de c"),
        click.option("--c", "c", type=int, default=None, help="c fijo (omite la estimación)"),
        click.option("--n-tilde", type=int, default=None, help="Ñ: grafos muestreados para el grafo media"),
        click.option("--seed", type=int, default=None, help="Semilla raíz"),
        click.option("--max-iters", type=int, default=None, help="Máximo de iteraciones del ajuste"),
        click.option("--tol", type=float, default=None, help="Tolerancia relativa del ajuste"),
        click.option("--s", "s", callback=parse_float_list, default=None, help="Geometría fija, ej. 0.5,0.25,0.25"),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def echo_csv(df: pd.DataFrame) -> None:
    click.echo(FileHandler.write_csv(df), nl=False)


def result_document(result: MeanResult) -> dict:
    """MeanResult sin el tiempo de proceso, para salidas reproducibles byte a byte"""
    return clean_for_json(result.model_dump(exclude={"processing_time_seconds"}))


def bulk_frame(bulk: BulkEstimate) -> pd.DataFrame:
    rows = []
    for it in bulk.iterations:
        for j, (expected, deviation, threshold) in enumerate(zip(it.expected, it.deviations, it.thresholds), start=1):
            rows.append({
                "i": it.i, "r": it.r, "j": j, "expected": expected,
                "deviation": deviation, "threshold": threshold, "accepted": it.accepted
            })
    return pd.DataFrame(rows, columns=["i", "r", "j", "expected", "deviation", "threshold", "accepted"])


def histogram_frame(sample: Sequence[Graph], mean_graph: Optional[Graph], c: int, bins: int) -> pd.DataFrame:
    """Conteos del bulk (autovalores c+1..n): promedio por grafo de la muestra y del grafo media"""
    sample_bulk = sample_spectra(sample)[:, c:]
    pooled = sample_bulk.ravel()
    if mean_graph is not None:
        pooled = np.concatenate([pooled, adjacency_spectrum(mean_graph)[c:]])
    value_range = (float(pooled.min()), float(pooled.max())) if pooled.size else None
    counts, edges = bulk_histogram(sample_bulk.ravel(), bins, value_range)
    table = pd.DataFrame({
        "bin_left": edges[:-1],
        "bin_right": edges[1:],
        "sample_count": counts / len(sample),
    })
    if mean_graph is not None:
        mean_counts, _ = bulk_histogram(adjacency_spectrum(mean_graph)[c:], bins, value_range)
        table["mean_count"] = mean_counts
    return table


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Logging en nivel DEBUG")
def cli(verbose: bool) -> None:
    """Media de Fréchet muestral de grafos bajo la pseudométrica espectral truncada"""
    level = "DEBUG" if verbose else get_settings().log_level
    setup_logger("src", level)


@cli.command()
@click.option("--ensemble", type=click.Choice(["sbm", "ba", "ws", "er", "sbm-trend", "sbm-interp"]), required=True)
@click.option("--n", "n", type=int, required=True, help="Vértices por grafo")
@click.option("--N", "count", type=int, required=True, help="Número de grafos")
@click.option("--seed", type=int, default=None, help="Semilla raíz")
@click.option("--output", "output_dir", type=click.Path(file_okay=False, path_type=Path), required=True)
@click.option("--m0", type=int, default=None, help="ba: tamaño del grafo completo inicial")
@click.option("--m", "m", type=int, default=None, help="ba: aristas por vértice nuevo")
@click.option("--K", "ring_k", type=int, default=None, help="ws: vecinos en el anillo (par)")
@click.option("--beta", type=float, default=None, help="ws: probabilidad de recableado")
@click.option("--p", "p", callback=parse_float_list, default=None, help="sbm/er: p; sbm-trend: ρ·p(0)")
@click.option("--p-slope", callback=parse_float_list, default=None, help="sbm-trend: pendiente de ρ·p(t)")
@click.option("--q", "q", type=float, default=None, help="Densidad cruzada común (ρ·q en sbm-trend y sbm-interp)")
@click.option("--s", "s", callback=parse_float_list, default=None, help="Geometría (se normaliza a suma 1)")
@click.option("--rho", type=float, default=1.0, show_default=True, help="sbm: escala ρ")
@handle_errors
def generate(ensemble, n, count, seed, output_dir, m0, m, ring_k, beta, p, p_slope, q, s, rho) -> None:
    """Genera N grafos y un manifiesto con todos los parámetros"""
    request = GenerateRequest(
        ensemble=ensemble, n=n, count=count,
        seed=get_settings().default_seed if seed is None else seed,
        output_dir=output_dir, m0=m0, m=m, K=ring_k, beta=beta,
        p=p, p_slope=p_slope, q=q, s=s, rho=rho
    )
    output_dir = request.output_dir
    output_dir.mkdir(parents=True, exist_ok=True)
    file_handler = FileHandler()
    logger.info(f"Generando {request.count} grafos '{request.ensemble}' con n={request.n} en {output_dir}")

    t_values = None
    if request.ensemble == "sbm-trend":
        dataset = sbm_trend_dataset(
            request.n, request.count, request.p, request.p_slope, request.s, request.q, request.seed
        )
        t_values = [t for t, _ in dataset]
        draw = lambda k: dataset[k][1]
    elif request.ensemble == "sbm-interp":
        dataset = interpolated_dataset(request.n, request.count, request.q, request.seed)
        t_values = [t for t, _ in dataset]
        draw = lambda k: dataset[k][1]
    else:
        if request.ensemble == "sbm":
            kernel = make_kernel(request.rho, request.s, request.p, request.q)
            sampler = lambda seed_k: sample_kernel_graph(kernel, request.n, seed_k)
        elif request.ensemble == "er":
            if len(request.p) != 1:
                raise GraphArgumentError("er necesita un único valor de --p")
            sampler = lambda seed_k: erdos_renyi(request.n, request.p[0], seed_k)
        elif request.ensemble == "ba":
            sampler = lambda seed_k: barabasi_albert(request.n, request.m0, request.m, seed_k)
        else:
            sampler = lambda seed_k: watts_strogatz(request.n, request.K, request.beta, seed_k)
        draw = lambda k: sampler(derive_seed(request.seed, "sample", k))

    filenames = []
    for k in tqdm(range(request.count), desc="generate", file=sys.stderr, disable=None):
        name = graph_filename(k)
        file_handler.write_graph(draw(k), output_dir / name)
        filenames.append(name)

    parameters = request.model_dump(exclude={"output_dir"}, exclude_none=True)
    file_handler.write_manifest(output_dir, filenames, parameters, t_values)
    logger.info(f"Generación completada: {len(filenames)} archivos y manifiesto en {output_dir}")


@cli.command("estimate-c")
@click.option("--input", "input_dir", type=click.Path(path_type=Path), required=True)
@click.option("--k-bulk", type=int, default=None, help="Autovalores comparados por iteración")
@click.option("--output", "output_path", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="CSV con el detalle de cada iteración")
@handle_errors
def estimate_c_command(input_dir, k_bulk, output_path) -> None:
    """Imprime c estimado y, debajo, el CSV de diagnóstico de cada iteración"""
    config = RunConfig(input_dir=input_dir, options=fit_options(None, k_bulk, None, None, None, None))
    graphs, _ = GraphIngestion().ingest(config.input_dir)
    bulk = estimate_c_with_diagnostics(mean_spectrum(graphs, graphs[0].n), config.options.k_bulk)
    table = bulk_frame(bulk)
    if output_path is not None:
        FileHandler.write_csv(table, output_path)
    click.echo(str(bulk.c))
    echo_csv(table)


@cli.command()
@click.option("--input", "input_dir", type=click.Path(path_type=Path), required=True)
@click.option("--output", "output_dir", type=click.Path(file_okay=False, path_type=Path), required=True)
@click.option("--bins", type=int, default=50, show_default=True, help="Intervalos del histograma del bulk")
@fit_flags
@handle_errors
def mean(input_dir, output_dir, bins, k_bulk, c, n_tilde, seed, max_iters, tol, s) -> None:
    """Media de Fréchet muestral aproximada; imprime el CSV de alineación"""
    config = RunConfig(
        input_dir=input_dir,
        output_dir=output_dir,
        options=fit_options(seed, k_bulk, c, n_tilde, max_iters, tol, s)
    )
    graphs, _ = GraphIngestion().ingest(config.input_dir)
    mean_graph, result = FrechetMeanPipeline(config.options).process(graphs)

    file_handler = FileHandler()
    out = config.output_dir
    file_handler.write_graph(mean_graph, out / "mean_graph.txt")
    file_handler.write_kernel(result.fit.kernel, out / "kernel.json", extra={
        "c": result.c,
        "objective": result.fit.objective,
        "converged": result.fit.converged
    })
    alignment = SampleValidation.alignment_frame(result.alignment)
    file_handler.write_csv(alignment, out / "alignment.csv")
    file_handler.write_csv(histogram_frame(graphs, mean_graph, result.c, bins), out / "bulk_histogram.csv")
    if result.bulk is not None:
        file_handler.write_csv(bulk_frame(result.bulk), out / "estimate_c.csv")
    (out / "result.json").write_text(
        json.dumps(result_document(result), indent=2) + "\n", encoding="utf-8"
    )
    echo_csv(alignment)


@cli.command()
@click.option("--input", "input_dir", type=click.Path(path_type=Path), required=True)
@click.option("--output", "output_dir", type=click.Path(file_okay=False, path_type=Path), required=True)
@click.option("--t", "t_values", type=float, multiple=True, help="Punto de consulta (repetible)")
@fit_flags
@handle_errors
def regress(input_dir, output_dir, t_values, k_bulk, c, n_tilde, seed, max_iters, tol, s) -> None:
    """Regresión de Fréchet en cada --t; imprime el CSV (t, i, target, fitted, realized)"""
    config = RunConfig(
        input_dir=input_dir,
        output_dir=output_dir,
        options=fit_options(seed, k_bulk, c, n_tilde, max_iters, tol, s),
        t_values=list(t_values) or list(DEFAULT_T_GRID)
    )
    graphs, covariates = GraphIngestion().ingest(config.input_dir)
    if covariates is None:
        raise GraphArgumentError(f"regress necesita {config.input_dir}/manifest.csv con la columna t")

    regression = FrechetRegression(RegressionDataset.from_lists(covariates, graphs), config.options)
    points = regression.grid(config.t_values)

    file_handler = FileHandler()
    out = config.output_dir
    frames = []
    for k, (graph, point) in enumerate(points):
        file_handler.write_graph(graph, out / f"regression_graph_{k}.txt")
        file_handler.write_kernel(point.result.fit.kernel, out / f"kernel_{k}.json", extra={
            "t": point.t,
            "c": point.result.c,
            "objective": point.result.fit.objective,
            "converged": point.result.fit.converged
        })
        frame = SampleValidation.alignment_frame(point.result.alignment)
        frame.insert(0, "t", point.t)
        frames.append(frame)

    table = pd.concat(frames, ignore_index=True)
    file_handler.write_csv(table, out / "regression.csv")
    echo_csv(table)


@cli.command()
@click.argument("graph_file", type=click.Path(path_type=Path))
@click.option("--c", "c", type=int, default=None, help="Sólo los c mayores autovalores")
@click.option("--bins", type=int, default=50, show_default=True)
@click.option("--histogram", "histogram_path", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="CSV con los conteos del bulk (autovalores después de los c primeros)")
@handle_errors
def spectrum(graph_file, c, bins, histogram_path) -> None:
    """Imprime el espectro de un grafo como una línea separada por comas"""
    graph = FileHandler.read_graph(graph_file)
    values = adjacency_spectrum(graph)
    if c is not None:
        if not (1 <= c <= graph.n):
            raise GraphArgumentError(f"c debe estar en [1, {graph.n}]: {c}")
        shown = values[:c]
    else:
        shown = values

    # +0.0 elimina los ceros negativos
    rounded = np.round(shown, SPECTRUM_DECIMALS) + 0.0
    click.echo(",".join(f"{v:.17g}" for v in rounded))

    if histogram_path is not None:
        FileHandler.write_csv(histogram_frame([graph], None, c or 0, bins), histogram_path)


if __name__ == "__main__":
    cli()
