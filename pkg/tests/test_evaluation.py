"""
Tests for AUC scoring, experiment cells and sweeps.
"""

import numpy as np
import pandas as pd
import pytest

from layerrecon.core.exceptions import DegenerateEvaluationError, NumericalFailureError
from layerrecon.models.requests import FitConfig, FitMode, SimilarityRandomization
from layerrecon.models.responses import EvalReport, RemovalPlan
from layerrecon.services import evaluation
from layerrecon.services.evaluation import (
    AUC_COLUMNS,
    SIM_COLUMNS,
    auc,
    dimension_sweep,
    evaluation_pairs,
    mann_whitney_auc,
    removal_sweep,
    roc_curve,
    run_cell,
    similarity_sweep,
    summarize_similarity,
    top_l_sweep,
    trapezoid_area,
)
from tests.conftest import directed, undirected

SMALL_FIT = FitConfig(K=2, max_iter=100)


def brute_force_auc(scores, labels) -> float:
    pos = scores[labels == 1]
    neg = scores[labels == 0]
    wins = (pos[:, None] > neg[None, :]).sum() + 0.5 * (pos[:, None] == neg[None, :]).sum()
    return float(wins) / (len(pos) * len(neg))


def threshold_roc(scores, labels):
    points = [(0.0, 0.0)]
    for t in np.unique(scores)[::-1]:
        above = scores >= t
        points.append((np.mean(above[labels == 0]), np.mean(above[labels == 1])))
    return points


@pytest.fixture
def path_layer():
    return undirected("p", 4, [(0, 1), (1, 2), (2, 3)])


class TestAucMetric:
    def test_perfect_separation(self):
        assert mann_whitney_auc(np.array([0.9, 0.8, 0.1, 0.2]), np.array([1, 1, 0, 0])) == 1.0

    def test_inverted_separation(self):
        assert mann_whitney_auc(np.array([0.1, 0.2, 0.9]), np.array([1, 1, 0])) == 0.0

    def test_all_ties(self):
        assert mann_whitney_auc(np.ones(6), np.array([1, 0, 1, 0, 0, 0])) == 0.5

    def test_matches_brute_force(self):
        rng = np.random.default_rng(21)
        for _ in range(100):
            size = int(rng.integers(2, 501))
            labels = rng.integers(0, 2, size)
            labels[0], labels[1] = 0, 1
            scores = rng.integers(0, 6, size).astype(float)
            assert mann_whitney_auc(scores, labels) == pytest.approx(brute_force_auc(scores, labels), abs=1e-12)

    def test_monotone_transform_invariance(self):
        rng = np.random.default_rng(22)
        scores = rng.random(50)
        labels = rng.integers(0, 2, 50)
        labels[:2] = (0, 1)
        assert mann_whitney_auc(np.exp(3 * scores), labels) == mann_whitney_auc(scores, labels)

    def test_degenerate(self):
        with pytest.raises(DegenerateEvaluationError):
            mann_whitney_auc(np.array([0.1, 0.2]), np.array([1, 1]))
        with pytest.raises(DegenerateEvaluationError):
            roc_curve(np.array([0.1, 0.2]), np.array([0, 0]))


class TestRocCurve:
    def test_matches_threshold_enumeration(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            size = int(rng.integers(2, 30))
            labels = rng.integers(0, 2, size)
            labels[0], labels[1] = 0, 1
            scores = rng.integers(0, 5, size).astype(float)
            roc = roc_curve(scores, labels)
            expected = threshold_roc(scores, labels)
            np.testing.assert_allclose(np.array(roc), np.array(expected), atol=1e-12)
            assert roc[-1] == (1.0, 1.0)

    def test_area_equals_auc(self):
        rng = np.random.default_rng(24)
        for _ in range(50):
            labels = rng.integers(0, 2, 60)
            labels[:2] = (0, 1)
            scores = np.round(rng.random(60), 1)
            assert trapezoid_area(roc_curve(scores, labels)) == pytest.approx(
                mann_whitney_auc(scores, labels), abs=1e-9
            )


class TestLayerAuc:
    def test_evaluation_pairs_undirected(self, path_layer):
        plan = RemovalPlan(fraction=1 / 3, seed=0, removed_edges=[(1, 2)])
        rows, cols, labels = evaluation_pairs(path_layer, plan)
        pairs = sorted(zip(rows.tolist(), cols.tolist(), labels.tolist()))
        assert pairs == [(0, 2, 0), (0, 3, 0), (1, 2, 1), (1, 3, 0)]

    def test_evaluation_pairs_directed(self):
        layer = directed("d", 3, [(0, 1), (1, 2)])
        plan = RemovalPlan(fraction=0.5, seed=0, removed_edges=[(0, 1)])
        rows, cols, labels = evaluation_pairs(layer, plan)
        assert len(rows) == 5
        assert labels.sum() == 1
        assert (1, 2) not in set(zip(rows.tolist(), cols.tolist()))

    def test_report(self, path_layer):
        plan = RemovalPlan(fraction=1 / 3, seed=9, removed_edges=[(1, 2)])
        scores = np.full((4, 4), 0.1)
        scores[1, 2] = scores[2, 1] = 0.9
        np.fill_diagonal(scores, np.nan)
        report = auc(scores, path_layer, plan)
        assert report.auc == 1.0
        assert (report.positives, report.negatives) == (1, 3)
        assert report.seed == 9
        assert report.roc[0] == (0.0, 0.0) and report.roc[-1] == (1.0, 1.0)

    def test_nothing_hidden(self, path_layer):
        plan = RemovalPlan(fraction=0.0, seed=0, removed_edges=[])
        with pytest.raises(DegenerateEvaluationError):
            auc(np.zeros((4, 4)), path_layer, plan)

    def test_non_finite_scores(self, path_layer):
        plan = RemovalPlan(fraction=1 / 3, seed=0, removed_edges=[(1, 2)])
        scores = np.zeros((4, 4))
        scores[0, 2] = np.inf
        with pytest.raises(ValueError, match="finite"):
            auc(scores, path_layer, plan)

    def test_shape_mismatch(self, path_layer):
        plan = RemovalPlan(fraction=1 / 3, seed=0, removed_edges=[(1, 2)])
        with pytest.raises(ValueError):
            auc(np.zeros((3, 3)), path_layer, plan)


class TestRunCell:
    def test_deterministic(self, toy_network):
        cfg = SMALL_FIT.model_copy(update={"mode": FitMode.MAP})
        first = run_cell(toy_network, "A", cfg, 0.4, top_l=2, runs=2, base_seed=5)
        second = run_cell(toy_network, "A", cfg, 0.4, top_l=2, runs=2, base_seed=5)
        assert first == second
        assert first.per_run_seeds == [5, 6]
        assert first.mean_auc == pytest.approx(np.mean(first.per_run_auc))
        assert not first.extrapolated

    def test_multi_run_auc_matches_its_roc(self, toy_network):
        report = run_cell(toy_network, "A", SMALL_FIT, 0.4, top_l=2, runs=4, base_seed=1)
        assert len(report.per_run_auc) == 4
        assert report.auc == pytest.approx(trapezoid_area(report.roc), abs=1e-9)
        assert report.auc == report.per_run_auc[0]
        assert report.mean_auc == pytest.approx(np.mean(report.per_run_auc))

    def test_report_rejects_auc_off_its_roc(self):
        with pytest.raises(ValueError, match="area under roc"):
            EvalReport(auc=0.8, roc=[(0.0, 0.0), (0.0, 1.0), (1.0, 1.0)])

    def test_full_removal_extrapolates(self, toy_network):
        report = run_cell(toy_network, "A", SMALL_FIT, 1.0, top_l=1, runs=1, base_seed=0)
        assert report.extrapolated
        assert report.positives == 7

    def test_full_removal_without_prior_is_chance(self, toy_network):
        cfg = SMALL_FIT.model_copy(update={"mode": FitMode.MLE})
        report = run_cell(toy_network, "A", cfg, 1.0, top_l=1, runs=1, base_seed=0)
        assert report.auc == 0.5
        assert not report.extrapolated

    @pytest.mark.parametrize("top_l", [0, 4])
    def test_invalid_top_l(self, toy_network, top_l):
        with pytest.raises(ValueError, match="top_l"):
            run_cell(toy_network, "A", SMALL_FIT, 0.4, top_l=top_l, runs=1, base_seed=0)

    def test_invalid_runs(self, toy_network):
        with pytest.raises(ValueError, match="runs"):
            run_cell(toy_network, "A", SMALL_FIT, 0.4, top_l=1, runs=0, base_seed=0)

    def test_failed_runs_are_skipped(self, toy_network, monkeypatch):
        real_fit = evaluation.fit

        def flaky_fit(target, priorf, cfg):
            if cfg.seed == 0:
                raise NumericalFailureError(3)
            return real_fit(target, priorf, cfg)

        monkeypatch.setattr(evaluation, "fit", flaky_fit)
        report = run_cell(toy_network, "A", SMALL_FIT, 0.4, top_l=1, runs=3, base_seed=0)
        assert report.failed_runs == [0]
        assert report.per_run_seeds == [1, 2]

    def test_every_run_failing_raises(self, toy_network, monkeypatch):
        def broken_fit(target, priorf, cfg):
            raise NumericalFailureError(1)

        monkeypatch.setattr(evaluation, "fit", broken_fit)
        with pytest.raises(NumericalFailureError):
            run_cell(toy_network, "A", SMALL_FIT, 0.4, top_l=1, runs=2, base_seed=0)


class TestAucSweeps:
    def test_removal_sweep_rows(self, toy_network):
        result = removal_sweep(toy_network, "A", [0.4], runs=2, top_l=2, base_seed=3, fit_cfg=SMALL_FIT)
        rows = result.rows
        assert list(rows.columns) == AUC_COLUMNS
        assert list(rows["mode"]) == ["map", "map", "mle", "mle"]
        assert list(rows["run"]) == [0, 1, 0, 1]
        assert list(rows["seed"]) == [3, 4, 3, 4]
        assert len(result.reports) == 2

    def test_parallel_matches_serial(self, toy_network):
        kwargs = dict(runs=1, top_l=2, base_seed=0, fit_cfg=SMALL_FIT)
        serial = removal_sweep(toy_network, "A", [0.3, 0.6], **kwargs)
        parallel = removal_sweep(toy_network, "A", [0.3, 0.6], jobs=3, **kwargs)
        pd.testing.assert_frame_equal(serial.rows, parallel.rows)

    def test_dimension_sweep(self, toy_network):
        result = dimension_sweep(toy_network, "A", [1, 3], runs=1, modes=(FitMode.MLE,), fit_cfg=SMALL_FIT)
        assert list(result.rows["K"]) == [1, 3]
        assert set(result.rows["fraction"]) == {0.4}

    def test_top_l_sweep_rejects_unavailable_layers(self, toy_network):
        with pytest.raises(ValueError, match="top_l"):
            top_l_sweep(toy_network, "A")

    def test_top_l_sweep(self, toy_network):
        result = top_l_sweep(toy_network, "A", top_ls=(1, 3), fractions=[0.4], runs=1, fit_cfg=SMALL_FIT)
        assert list(result.rows["top_l"]) == [1, 3]
        assert set(result.rows["mode"]) == {"map"}


class TestSimilaritySweep:
    def test_unreduced_target_matches_itself(self, toy_network):
        rows = similarity_sweep(
            toy_network, "A", [0.0, 0.5], phis=[64], runs=2, randomize=SimilarityRandomization.BOTH
        )
        assert list(rows.columns) == SIM_COLUMNS
        # original plus three comparison layers per cell
        assert len(rows) == 2 * 2 * 4
        original = rows[(rows["reference"] == "original") & (rows["fraction"] == 0.0)]
        assert list(original["similarity"]) == [1.0, 1.0]
        copy = rows[(rows["reference"] == "B") & (rows["fraction"] == 0.0)]
        assert list(copy["similarity"]) == [1.0, 1.0]

    def test_hash_randomization_keeps_removal_fixed(self, toy_network):
        rows = similarity_sweep(
            toy_network, "A", [0.5], phis=[64], runs=3, randomize=SimilarityRandomization.HASH, top_similar=1
        )
        assert set(rows["reference"]) == {"original", "B"}
        assert list(rows["run"].unique()) == [0, 1, 2]

    def test_summary(self, toy_network):
        rows = similarity_sweep(toy_network, "A", [0.5], phis=[32, 64], runs=3)
        summary = summarize_similarity(rows)
        assert {"target", "fraction", "phi", "reference", "mean", "q1", "q3", "iqr"} <= set(summary.columns)
        assert len(summary) == 2 * 4
        assert set(summary["count"]) == {3}

    def test_invalid_phi(self, toy_network):
        with pytest.raises(ValueError, match="phi"):
            similarity_sweep(toy_network, "A", [0.5], phis=[100], runs=1)
