"""
Tests del pipeline de la media de Fréchet muestral aproximada
"""
import numpy as np
import pytest
from src.core.exceptions import GraphArgumentError
from src.core.graph import Graph, mean_spectrum, truncated_spectrum
from src.core.pipeline import FrechetMeanPipeline, approximate_frechet_mean
from src.core.random_graphs import sample_graphs
from src.core.validation import SampleValidation
from src.models.request_models import FitOptions
from src.utils import parallel
from src.utils.settings import FrechetSettings


@pytest.fixture
def opts() -> FitOptions:
    return FitOptions(c_override=2, n_tilde=3, seed=1)


class TestPipeline:
    """Pasos del pipeline de punta a punta"""

    def test_returns_graph_report_and_c(self, two_block_sample, opts):
        mean_graph, fit, c = approximate_frechet_mean(two_block_sample, opts)
        assert c == 2
        assert mean_graph.n == 80
        assert fit.c == 2
        assert fit.rho_bar == pytest.approx(np.mean([g.m / (80 * 79 / 2) for g in two_block_sample]))

    def test_target_is_mean_spectrum(self, two_block_sample, opts):
        _, fit, _ = approximate_frechet_mean(two_block_sample, opts)
        np.testing.assert_allclose(fit.target, mean_spectrum(two_block_sample, 2))

    def test_identical_sample_targets_its_spectrum(self, two_block_sample, opts):
        g = two_block_sample[0]
        _, fit, _ = approximate_frechet_mean([g] * 4, opts)
        np.testing.assert_allclose(fit.target, truncated_spectrum(g, 2), rtol=1e-12)

    def test_relabeling_does_not_change_target(self, two_block_sample, opts, rng):
        relabeled = [g.permuted(rng.permutation(g.n)) for g in two_block_sample]
        _, fit, _ = approximate_frechet_mean(two_block_sample, opts)
        _, fit_relabeled, _ = approximate_frechet_mean(relabeled, opts)
        np.testing.assert_allclose(fit_relabeled.target, fit.target, rtol=1e-10)
        np.testing.assert_allclose(fit_relabeled.fitted_eigenvalues(), fit.fitted_eigenvalues(), rtol=1e-6)

    def test_deterministic(self, two_block_sample, opts):
        first, fit_a, _ = approximate_frechet_mean(two_block_sample, opts)
        second, fit_b, _ = approximate_frechet_mean(two_block_sample, opts)
        assert first == second
        assert fit_a.kernel == fit_b.kernel

    def test_result_alignment_rows(self, two_block_sample, opts):
        mean_graph, result = FrechetMeanPipeline(opts).process(two_block_sample)
        assert [row.i for row in result.alignment] == [1, 2]
        np.testing.assert_allclose(
            [row.realized for row in result.alignment], truncated_spectrum(mean_graph, 2)
        )
        assert result.bulk is None
        assert 0 <= result.set_mean_index < 3

    def test_estimates_c_when_not_fixed(self, two_block_sample):
        _, result = FrechetMeanPipeline(FitOptions(n_tilde=2)).process(two_block_sample)
        assert result.bulk is not None
        assert result.c == result.bulk.c

    def test_geometry_override(self, two_block_sample):
        opts = FitOptions(c_override=2, s_override=[0.6, 0.4], n_tilde=2)
        _, result = FrechetMeanPipeline(opts).process(two_block_sample)
        assert result.geometry == [0.6, 0.4]
        np.testing.assert_allclose(result.fit.kernel.s, [0.6, 0.4])

    def test_geometry_length_mismatch(self, two_block_sample):
        pipeline = FrechetMeanPipeline(FitOptions(c_override=3, n_tilde=2))
        pipeline.opts.s_override = [0.5, 0.5]
        with pytest.raises(GraphArgumentError):
            pipeline.process(two_block_sample)



class TestThreadCount:
    """La salida no depende del número de hilos"""

    @staticmethod
    def run_with_threads(monkeypatch, threads, kernel, opts):
        monkeypatch.setattr(parallel, "get_settings", lambda: FrechetSettings(threads=threads))
        sample = sample_graphs(kernel, 80, 6, seed=7)
        mean_graph, fit, _ = approximate_frechet_mean(sample, opts)
        return sample, mean_graph, fit

    def test_single_and_many_threads_agree(self, monkeypatch, two_block_kernel, opts):
        sample_1, mean_1, fit_1 = self.run_with_threads(monkeypatch, 1, two_block_kernel, opts)
        sample_8, mean_8, fit_8 = self.run_with_threads(monkeypatch, 8, two_block_kernel, opts)
        assert sample_1 == sample_8
        assert mean_1 == mean_8
        assert fit_1.kernel == fit_8.kernel
        assert fit_1.objective_trace == fit_8.objective_trace

class TestSampleErrors:
    """Muestras que el pipeline rechaza"""

    def test_empty_graph_in_sample(self, two_block_sample, opts):
        with pytest.raises(GraphArgumentError):
            approximate_frechet_mean(two_block_sample + [Graph.empty(80)], opts)

    def test_complete_graph_in_sample(self, two_block_sample, opts):
        with pytest.raises(GraphArgumentError):
            approximate_frechet_mean([Graph.complete(80)] + two_block_sample, opts)

    def test_mixed_sizes(self, two_block_sample, opts):
        with pytest.raises(GraphArgumentError):
            approximate_frechet_mean(two_block_sample + [Graph.from_edges(5, [(0, 1)])], opts)

    def test_c_larger_than_n(self, path3):
        with pytest.raises(GraphArgumentError):
            approximate_frechet_mean([path3], FitOptions(c_override=4))


class TestAlignmentReport:

    def test_relative_errors(self):
        validation = SampleValidation()
        rows = validation.alignment_report([10.0, 0.0], [11.0, 0.5], [9.0, 0.1])
        assert rows[0].fitted_relative_error == pytest.approx(0.1)
        assert rows[1].fitted_relative_error == pytest.approx(0.5)
        assert validation.max_relative_error(rows) == pytest.approx(0.5)

    def test_frame_columns(self):
        rows = SampleValidation().alignment_report([3.0], [2.0], [1.0])
        frame = SampleValidation.alignment_frame(rows)
        assert list(frame.columns) == ["i", "target", "fitted", "realized"]
        assert frame.iloc[0].tolist() == [1, 3.0, 2.0, 1.0]

    def test_length_mismatch(self):
        with pytest.raises(GraphArgumentError):
            SampleValidation().alignment_report([1.0, 2.0], [1.0], [1.0])
