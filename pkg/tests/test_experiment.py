import csv
import io
import json
import math

import numpy as np
import pytest

from ecomrec.data import split_indices
from ecomrec.errors import StageError
from ecomrec.experiment import (
    ExperimentConfig,
    atomic_write,
    emit_figure_data,
    model_table_csv,
    parse_pca,
    prepare_trial,
    run_experiment,
    run_trial,
    summary_table,
    write_report,
)
from ecomrec.ingest import SynthConfig

FAST = {"rf": {"n_trees": 15}, "lr": {"max_iter": 100}}


def _cfg(**kw):
    base = dict(synth=SynthConfig(n_rows=200, n_products=5, noise=0.1, seed=4), trials=3,
                hyperparams=FAST)
    base.update(kw)
    return ExperimentConfig(**base)


@pytest.fixture(scope="module")
def report():
    return run_experiment(_cfg())


def test_parse_pca():
    assert parse_pca("off") is None and parse_pca(None) is None
    assert parse_pca("k=2") == {"k": 2}
    assert parse_pca("var=0.9") == {"variance": 0.9}
    for bad in ("k=0", "var=1.5", "k", "pca", "var=abc"):
        with pytest.raises(ValueError):
            parse_pca(bad)


def test_run_trial_is_deterministic(noisy_ds):
    cfg = _cfg()
    for kind in ("rf", "dt", "gnb", "lr"):
        assert run_trial(noisy_ds, kind, 5, cfg) == run_trial(noisy_ds, kind, 5, cfg)


def test_noiseless_forest_is_exact(clean_ds):
    cfg = _cfg(synth=SynthConfig(200, 5, 0.0, 3))
    for seed in range(3):
        assert run_trial(clean_ds, "rf", seed, cfg).accuracy == 1.0


def test_noisy_trials_vary(noisy_ds):
    accs = {run_trial(noisy_ds, "dt", s, _cfg()).accuracy for s in range(10)}
    assert len(accs) >= 2


def test_shape_and_seeds(report):
    assert [m.kind for m in report.models] == ["rf", "dt", "gnb", "lr"]
    for m in report.models:
        assert [t.seed for t in m.trials] == [0, 1, 2]


def test_models_share_each_split(report):
    digests = {m.kind: [t.split_digest for t in m.trials] for m in report.models}
    assert len({tuple(d) for d in digests.values()}) == 1
    assert len(set(digests["rf"])) == 3


def test_paired_index_sets(noisy_ds):
    cfg = _cfg()
    split = split_indices(noisy_ds.n, cfg.train_ratio, 3)
    a = prepare_trial(None, noisy_ds, split, cfg)
    b = prepare_trial(None, noisy_ds, split_indices(noisy_ds.n, cfg.train_ratio, 3), cfg)
    for u, v in zip(a, b):
        assert np.array_equal(u, v)


def test_mean_row_is_the_trial_mean(report):
    for m in report.models:
        for name in ("accuracy", "mse", "rmse", "mae", "r_square"):
            vals = [getattr(t.report, name) for t in m.trials]
            got = getattr(m.mean, name)
            if any(v is None for v in vals):
                assert got is None
            else:
                assert abs(math.fsum(vals) / len(vals) - got) <= 1e-12


def test_single_trial_mean_equals_trial():
    rep = run_experiment(_cfg(models=("rf",), trials=1))
    m = rep.model("rf")
    assert m.mean == m.trials[0].report
    rows = list(csv.reader(io.StringIO(model_table_csv(m))))
    assert len(rows) == 3 and rows[1][3:] == rows[2][3:]


def test_table_layout(report):
    rows = list(csv.reader(io.StringIO(model_table_csv(report.model("rf")))))
    assert rows[0] == ["Model", "Trial", "Seed", "Accuracy", "R Square", "MSE", "MAE"]
    assert len(rows) == 1 + 3 + 1
    assert rows[-1][:2] == ["RF", "average"]
    assert float(rows[-1][3]) == report.model("rf").mean.accuracy


def test_figure_data(report):
    figs = emit_figure_data(report)
    assert set(figs) == {"accuracy", "r_square", "mse", "mae"}
    rows = list(csv.reader(io.StringIO(figs["accuracy"])))
    assert [r[0] for r in rows[1:]] == ["RF", "DT", "GNB", "LR"]
    for r in rows[1:]:
        assert float(r[1]) == report.model(r[0].lower()).mean.accuracy


def test_figure_order_ignores_config_order():
    rep = run_experiment(_cfg(models=("lr", "rf"), trials=1))
    rows = list(csv.reader(io.StringIO(emit_figure_data(rep)["mse"])))
    assert [r[0] for r in rows[1:]] == ["RF", "LR"]


def test_report_json(report):
    doc = json.loads(report.to_json())
    prov = doc["provenance"]
    assert len(prov["dataset_sha256"]) == 64 and prov["config"]["trials"] == 3
    assert prov["config"]["pca"] is None
    assert set(doc["models"]) == {"rf", "dt", "gnb", "lr"}
    assert "rmse" in doc["models"]["rf"]["mean"]
    assert report.to_json() == run_experiment(_cfg()).to_json()


def test_pca_toggle_is_recorded_and_changes_inputs():
    on = run_experiment(_cfg(models=("gnb",), pca={"k": 2}))
    off = run_experiment(_cfg(models=("gnb",)))
    assert on.provenance["config"]["pca"] == {"k": 2}
    assert on.to_json() != off.to_json()


def test_encoders_fitted_on_train_only():
    rep = run_experiment(_cfg(models=("dt",), encoder_fit="train", trials=2))
    assert rep.provenance["config"]["encoder_fit"] == "train"
    assert 0.0 <= rep.model("dt").mean.accuracy <= 1.0


def test_stage_errors_are_annotated(tmp_path):
    with pytest.raises(StageError) as e:
        run_experiment(_cfg(synth=None, data_path=str(tmp_path / "missing.csv")))
    assert e.value.stage == "ingest"
    with pytest.raises(StageError) as e:
        run_experiment(_cfg(hyperparams={"rf": {"n_trees": 0}}))
    assert e.value.stage == "train:rf"
    with pytest.raises(StageError) as e:
        run_experiment(_cfg(trials=0))
    assert e.value.stage == "config"


def test_write_report(tmp_path, report):
    written = write_report(report, tmp_path / "out")
    names = sorted(p.name for p in written)
    assert names == sorted(["report.json", "table_rf.csv", "table_dt.csv", "table_gnb.csv",
                            "table_lr.csv", "figure_accuracy.csv", "figure_r_square.csv",
                            "figure_mse.csv", "figure_mae.csv"])
    assert not list((tmp_path / "out").glob(".*tmp"))


def test_atomic_write_leaves_nothing_on_failure(tmp_path):
    target = tmp_path / "x.txt"
    with pytest.raises(TypeError):
        atomic_write(target, 12345)
    assert list(tmp_path.iterdir()) == []


def test_summary_mentions_every_model(report):
    text = summary_table(report)
    for name in ("RF", "DT", "GNB", "LR"):
        assert name in text
