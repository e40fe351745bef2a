import numpy as np
import pytest

from apps.auto_binning.application.baselines import evaluate_baseline
from apps.auto_binning.application.binning import encode, fit_grid
from apps.auto_binning.application.model import extract, structure_counts
from apps.auto_binning.application.path import fit_fold_strand, stratified_folds, trace
from apps.auto_binning.application.synth import default_spec, generate
from apps.auto_binning.domain import BaselineSpec, PathConfig, group_weights

SEEDS = range(20)
NBINS = 20
CELL = 1.0 / NBINS

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def runs():
    """Per seed: the extracted model, its ground truth, and the shared-fold comparison against equal-frequency."""
    outcomes = []
    for seed in SEEDS:
        data, truth = generate(default_spec(n=5000, p=5, informative=2, seed=seed))
        grid = fit_grid(data, NBINS)
        design = encode(data, grid)
        folds = stratified_folds(data.target, 5, seed)

        path = trace(design, data.target, PathConfig(seed=seed), folds=folds)
        model = extract(path.final_fit, grid, 1e-6)
        baseline = evaluate_baseline(data, BaselineSpec(method="equal-frequency", nbins=NBINS), folds)
        _, abm_bins = structure_counts(path.final_fit, 1e-6)

        outcomes.append(
            {
                "model": model,
                "truth": truth,
                "path": path,
                "design": design,
                "target": data.target,
                "abm_bins": abm_bins,
                "abm_auc": path.selected.mean_auc,
                "baseline": baseline,
            }
        )
    return outcomes


def test_informative_variables_are_kept(runs):
    kept = sum(set(run["truth"].informative) <= set(run["model"].kept) for run in runs)

    assert kept >= 18


def test_noise_variables_are_dropped(runs):
    for name in runs[0]["truth"].noise:
        dropped = sum(name in run["model"].dropped for run in runs)
        assert dropped >= 16, name


def test_recovered_cut_points_are_near_true_cuts(runs):
    def recovered_well(run) -> bool:
        for name in run["truth"].informative:
            if name not in run["model"].kept:
                return False
            true_cuts = np.asarray(run["truth"].cuts[name])
            for cut in run["model"].variable(name).cutpoints:
                if np.min(np.abs(true_cuts - cut)) > CELL:
                    return False
        return True

    assert sum(recovered_well(run) for run in runs) >= 16


def test_fewer_bins_than_equal_frequency(runs):
    assert all(run["abm_bins"] < run["baseline"].total_bins for run in runs)
    assert all(run["baseline"].total_bins == 5 * NBINS for run in runs)


def test_auc_close_to_equal_frequency(runs):
    close = sum(run["abm_auc"] >= run["baseline"].mean_auc - 0.005 for run in runs)

    assert close >= 16


def test_every_path_trace_is_monotone(runs):
    for run in runs:
        for point in run["path"].points:
            assert np.all(np.diff(point.fit.objective_trace) <= 0.0)
        assert np.all(np.diff(run["path"].final_fit.objective_trace) <= 0.0)


def test_fold_fit_traces_are_monotone(runs):
    config = PathConfig()
    for run in runs:
        path = run["path"]
        strand = path.selected_index // config.lambda2_count
        points = path.points[strand * config.lambda2_count:(strand + 1) * config.lambda2_count]
        lambdas2 = np.array([point.lambda2 for point in points])
        weights = group_weights(run["design"].group_sizes)

        for fold in range(config.folds):
            fits = fit_fold_strand(
                run["design"], run["target"], path.folds, fold, lambdas2, config.lambda1_multipliers[strand], weights
            )
            for result in fits:
                assert np.all(np.diff(result.objective_trace) <= 0.0)
