import json

import numpy as np
import pandas as pd
import pytest
from click.testing import CliRunner

from apps.auto_binning.application.model import auc
from apps.auto_binning.application.synth import default_spec, generate
from apps.auto_binning.domain import BinningModel, InvariantViolation, Provenance, SolverError
from apps.auto_binning.infrastructure import write_dataset
from apps.auto_binning.tools import run
from apps.auto_binning.tools.run import cli

FAST_FLAGS = ["--nbins", "6", "--lambda2-count", "3", "--lambda1-multipliers", "0.5,1", "--folds", "2", "--seed", "3"]


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def train_csv(tmp_path):
    data, _ = generate(default_spec(n=300, p=3, informative=2, seed=2))
    return write_dataset(data, tmp_path / "train.csv")


def _fit(runner, train_csv, out, *extra):
    return runner.invoke(cli, ["fit", "--input", str(train_csv), "--out", str(out), *FAST_FLAGS, *extra])


def test_fit_writes_artifacts_and_summary(runner, train_csv, tmp_path):
    result = _fit(runner, train_csv, tmp_path / "out")

    assert result.exit_code == 0, result.output
    assert "selected lambda1=" in result.output
    assert "kept variables" in result.output
    for name in ("model.json", "grid.json", "scorecard.csv", "path.csv"):
        assert (tmp_path / "out" / name).is_file()

    model = BinningModel.from_file(tmp_path / "out" / "model.json")
    assert model.features == ("x0", "x1", "x2")
    assert model.provenance.nbins == 6
    assert model.provenance.train_auc is not None
    path = pd.read_csv(tmp_path / "out" / "path.csv")
    assert len(path) == 6
    assert path["selected"].sum() == 1


def test_fit_is_byte_identical_across_runs(runner, train_csv, tmp_path):
    assert _fit(runner, train_csv, tmp_path / "first").exit_code == 0
    assert _fit(runner, train_csv, tmp_path / "second").exit_code == 0

    for name in ("model.json", "path.csv", "scorecard.csv", "grid.json"):
        assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes()


def test_missing_input_exits_with_one(runner, tmp_path):
    result = runner.invoke(cli, ["fit", "--input", str(tmp_path / "absent.csv"), "--out", str(tmp_path / "out")])

    assert result.exit_code == 1
    assert "error:" in result.output
    assert "absent.csv" in result.output
    assert not (tmp_path / "out").exists()


def test_nbins_of_one_is_a_config_error(runner, train_csv, tmp_path):
    result = runner.invoke(cli, ["fit", "--input", str(train_csv), "--nbins", "1", "--out", str(tmp_path / "out")])

    assert result.exit_code == 1
    assert "error: invalid nbins" in result.output


def test_bad_target_leaves_no_outputs(runner, write_csv, tmp_path):
    path = write_csv("a,y\n1,0\n2,3\n3,1\n")

    result = runner.invoke(cli, ["fit", "--input", str(path), "--out", str(tmp_path / "out")])

    assert result.exit_code == 1
    assert "target not binary" in result.output
    assert not (tmp_path / "out").exists()


def test_unknown_option_is_a_usage_error(runner):
    result = runner.invoke(cli, ["fit", "--bins", "4"])

    assert result.exit_code == 1
    assert "error:" in result.output


def test_internal_failure_exits_with_two(runner, train_csv, tmp_path, monkeypatch):
    def broken(config):
        raise InvariantViolation("merged bins out of order")

    monkeypatch.setattr(run, "fit", broken)

    result = runner.invoke(cli, ["fit", "--input", str(train_csv), "--out", str(tmp_path / "out")])

    assert result.exit_code == 2
    assert "error: merged bins out of order" in result.output


def test_solver_failure_exits_with_one(runner, train_csv, tmp_path, monkeypatch):
    def diverging(config):
        raise SolverError("non-finite objective encountered; check input scaling")

    monkeypatch.setattr(run, "fit", diverging)

    result = runner.invoke(cli, ["fit", "--input", str(train_csv), "--out", str(tmp_path / "out")])

    assert result.exit_code == 1
    assert "error: non-finite objective" in result.output


def test_config_file_is_overridden_by_flags(runner, train_csv, tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"input": str(train_csv), "nbins": 1, "target": "y", "folds": 2}))

    failing = runner.invoke(cli, ["fit", "--config", str(config), "--out", str(tmp_path / "a")])
    passing = runner.invoke(cli, ["fit", "--config", str(config), "--out", str(tmp_path / "b"), *FAST_FLAGS])

    assert failing.exit_code == 1
    assert passing.exit_code == 0, passing.output
    assert BinningModel.from_file(tmp_path / "b" / "model.json").provenance.nbins == 6


def test_predict_round_trip_reproduces_training_auc(runner, train_csv, tmp_path):
    assert _fit(runner, train_csv, tmp_path / "out").exit_code == 0

    result = runner.invoke(
        cli,
        ["predict", "--model", str(tmp_path / "out" / "model.json"), "--input", str(train_csv), "--out", str(tmp_path / "scores.csv")],
    )

    assert result.exit_code == 0, result.output
    scores = pd.read_csv(tmp_path / "scores.csv")
    assert list(scores.columns) == ["score"]
    target = pd.read_csv(train_csv)["y"].to_numpy(dtype=float)
    model = BinningModel.from_file(tmp_path / "out" / "model.json")
    assert abs(auc(scores["score"].to_numpy(), target) - model.provenance.train_auc) <= 1e-9


def test_predict_with_fully_dropped_model_is_constant(runner, write_csv, tmp_path):
    model = BinningModel(
        intercept=-0.3,
        dropped=("a", "b"),
        features=("a", "b"),
        provenance=Provenance(nbins=4, lambda1=1.0, lambda2=1.0, tol=1e-6),
    )
    model_path = model.save(tmp_path / "model.json")
    data = write_csv("a,b\n1,2\n-5,1e9\n3,0\n")

    result = runner.invoke(cli, ["predict", "--model", str(model_path), "--input", str(data), "--out", str(tmp_path)])

    assert result.exit_code == 0, result.output
    scores = pd.read_csv(tmp_path / "scores.csv")["score"]
    assert scores.nunique() == 1
    assert len(scores) == 3


def test_predict_accepts_out_of_range_values(runner, train_csv, write_csv, tmp_path):
    assert _fit(runner, train_csv, tmp_path / "out").exit_code == 0
    data = write_csv("x0,x1,x2\n-1000,5000,0.5\n1e12,-1e12,2\n", name="unseen.csv")

    result = runner.invoke(
        cli, ["predict", "--model", str(tmp_path / "out" / "model.json"), "--input", str(data), "--out", str(tmp_path / "s.csv")]
    )

    assert result.exit_code == 0, result.output
    scores = pd.read_csv(tmp_path / "s.csv")["score"].to_numpy()
    assert np.all((scores > 0.0) & (scores < 1.0))


def test_predict_names_missing_variable(runner, train_csv, write_csv, tmp_path):
    assert _fit(runner, train_csv, tmp_path / "out").exit_code == 0
    model = BinningModel.from_file(tmp_path / "out" / "model.json")
    assert model.kept, "fixture data should keep at least one variable"
    data = write_csv("unrelated\n1\n2\n", name="other.csv")

    result = runner.invoke(
        cli, ["predict", "--model", str(tmp_path / "out" / "model.json"), "--input", str(data), "--out", str(tmp_path / "s.csv")]
    )

    assert result.exit_code == 1
    assert f"missing variable '{model.kept[0]}'" in result.output


def test_compare_one_baseline_twice(runner, train_csv, tmp_path):
    config = tmp_path / "compare.json"
    config.write_text(json.dumps({"baselines": [{"method": "equal-frequency"}]}))
    args = ["compare", "--config", str(config), "--input", str(train_csv), *FAST_FLAGS]

    first = runner.invoke(cli, [*args, "--out", str(tmp_path / "first")])
    second = runner.invoke(cli, [*args, "--out", str(tmp_path / "second")])

    assert first.exit_code == 0, first.output
    table = pd.read_csv(tmp_path / "first" / "comparison.csv")
    assert table["method"].tolist() == ["abm", "equal-frequency"]
    assert table["total_bins"].iloc[1] == 3 * 6
    assert (tmp_path / "first" / "comparison.csv").read_bytes() == (tmp_path / "second" / "comparison.csv").read_bytes()
    assert second.exit_code == 0


def test_synth_writes_standard_csv(runner, tmp_path):
    result = runner.invoke(cli, ["synth", "--n", "50", "--p", "4", "--informative", "1", "--seed", "8", "--out", str(tmp_path / "s.csv")])

    assert result.exit_code == 0, result.output
    frame = pd.read_csv(tmp_path / "s.csv")
    assert list(frame.columns) == ["x0", "x1", "x2", "x3", "y"]
    assert len(frame) == 50
    assert set(frame["y"].unique()) <= {0, 1}


def test_synth_from_layout_file(runner, tmp_path):
    layout = tmp_path / "layout.json"
    layout.write_text(
        json.dumps({"n": 30, "p": 2, "seed": 1, "informative": {"1": {"cuts": [0.5], "contributions": [-1.0, 1.0]}}})
    )

    result = runner.invoke(cli, ["synth", "--config", str(layout), "--out", str(tmp_path)])

    assert result.exit_code == 0, result.output
    assert len(pd.read_csv(tmp_path / "synth.csv")) == 30
