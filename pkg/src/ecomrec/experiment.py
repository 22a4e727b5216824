"""Repeated holdout trials for every model, aggregated into per-model tables.

Trial ``i`` uses seed ``base_seed + i`` for its split, and every model in the
trial sees the same split.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import classifiers
from .data import DEFAULT_SCHEMA, EncodedDataset, Schema, encode_dataset, split_indices
from .errors import StageError
from .ingest import RawTable, SynthConfig, generate_synthetic, parse_csv
from .metrics import MetricReport, evaluate, format_percent, mean_report
from .pca import fit_pca, transform

DISPLAY = {"rf": "RF", "dt": "DT", "gnb": "GNB", "lr": "LR"}
FIGURE_ORDER = ("rf", "dt", "gnb", "lr")
FIGURE_METRICS = (
    ("accuracy", "accuracy"),
    ("r_square", "r_square"),
    ("mse", "mse"),
    ("mae", "mae"),
)
TABLE_HEADER = ("Model", "Trial", "Seed", "Accuracy", "R Square", "MSE", "MAE")


def parse_pca(text: str | None) -> dict | None:
    """``off`` -> None, ``k=<n>`` -> {"k": n}, ``var=<t>`` -> {"variance": t}."""
    if text is None or text == "off":
        return None
    key, sep, val = text.partition("=")
    if sep and key == "k":
        k = int(val)
        if k < 1:
            raise ValueError("pca k must be >= 1")
        return {"k": k}
    if sep and key == "var":
        t = float(val)
        if not 0.0 < t <= 1.0:
            raise ValueError("pca var must lie in (0, 1]")
        return {"variance": t}
    raise ValueError(f"bad pca setting {text!r}; use off, k=<n> or var=<0..1>")


@dataclass(frozen=True)
class ExperimentConfig:
    data_path: str | None = None
    synth: SynthConfig | None = None
    schema: Schema = DEFAULT_SCHEMA
    models: tuple[str, ...] = FIGURE_ORDER
    trials: int = 10
    base_seed: int = 0
    train_ratio: float = 0.75
    pca: dict | None = None
    pca_standardize: bool = True
    hyperparams: dict = field(default_factory=dict)
    encoder_fit: str = "full"  # or "train"

    def validate(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.models:
            raise ValueError("select at least one model")
        for m in self.models:
            if m not in classifiers.TRAINERS:
                raise ValueError(f"unknown model {m!r}")
        if len(set(self.models)) != len(self.models):
            raise ValueError("models listed more than once")
        if (self.data_path is None) == (self.synth is None):
            raise ValueError("give exactly one of data_path or synth")
        if self.encoder_fit not in ("full", "train"):
            raise ValueError("encoder_fit must be 'full' or 'train'")
        if not 0.0 < self.train_ratio < 1.0:
            raise ValueError("train_ratio must lie in (0, 1)")

    def echo(self) -> dict:
        return {
            "data_path": self.data_path,
            "synth": None if self.synth is None else vars(self.synth).copy(),
            "schema": self.schema.to_dict(),
            "models": list(self.models),
            "trials": self.trials,
            "base_seed": self.base_seed,
            "train_ratio": self.train_ratio,
            "pca": self.pca,
            "pca_standardize": self.pca_standardize,
            "hyperparams": self.hyperparams,
            "encoder_fit": self.encoder_fit,
        }


@dataclass(frozen=True)
class TrialResult:
    seed: int
    report: MetricReport
    split_digest: str


@dataclass(frozen=True)
class ModelResult:
    kind: str
    trials: tuple[TrialResult, ...]
    mean: MetricReport


@dataclass(frozen=True)
class ExperimentReport:
    models: tuple[ModelResult, ...]
    provenance: dict

    def model(self, kind) -> ModelResult:
        for m in self.models:
            if m.kind == kind:
                return m
        raise KeyError(kind)

    def to_dict(self) -> dict:
        return {
            "provenance": self.provenance,
            "models": {
                m.kind: {
                    "trials": [
                        {"seed": t.seed, "split_digest": t.split_digest, **t.report.to_dict()}
                        for t in m.trials
                    ],
                    "mean": m.mean.to_dict(),
                }
                for m in self.models
            },
            "notes": {"rmse": "computed for completeness; left out of the CSV tables"},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def load_table(cfg: ExperimentConfig) -> RawTable:
    if cfg.synth is not None:
        return generate_synthetic(cfg.synth)
    return parse_csv(Path(cfg.data_path).read_bytes())


def _digest(split) -> str:
    h = hashlib.sha256()
    h.update(np.asarray(split.train_indices, dtype=np.int64).tobytes())
    h.update(b"|")
    h.update(np.asarray(split.test_indices, dtype=np.int64).tobytes())
    return h.hexdigest()[:16]


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc


def prepare_trial(table: RawTable, full: EncodedDataset | None, split, cfg: ExperimentConfig):
    """Train/test matrices for one split, after encoding and optional PCA."""
    if cfg.encoder_fit == "full":
        train, test = full.subset(split.train_indices), full.subset(split.test_indices)
    else:
        train = _stage("encode", encode_dataset, table.take(split.train_indices), cfg.schema)
        test = _stage("encode", encode_dataset, table.take(split.test_indices), cfg.schema,
                      train.encoders)
    Xtr, Xte, categorical = train.features, test.features, train.categorical
    if cfg.pca is not None:
        model = _stage("pca", fit_pca, Xtr, standardize=cfg.pca_standardize, **cfg.pca)
        Xtr, Xte = transform(model, Xtr), transform(model, Xte)
        categorical = (False,) * Xtr.shape[1]
    return Xtr, train.target, Xte, test.target, categorical


def _hp(cfg, kind, seed):
    hp = dict(cfg.hyperparams.get(kind, {}))
    if kind == "rf":
        hp.setdefault("seed", seed)
    return hp


def fit_and_score(kind, Xtr, ytr, Xte, yte, categorical, hp) -> MetricReport:
    model = _stage(f"train:{kind}", classifiers.train, kind, Xtr, ytr, categorical, **hp)
    pred = _stage(f"predict:{kind}", classifiers.predict, model, Xte)
    return _stage("evaluate", evaluate, yte, pred)


def run_trial(ds: EncodedDataset, model_kind: str, seed: int, cfg: ExperimentConfig,
              table: RawTable | None = None) -> MetricReport:
    """One split -> (PCA) -> fit -> evaluate pass; deterministic in its inputs."""
    split = _stage("split", split_indices, ds.n, cfg.train_ratio, seed)
    data = prepare_trial(table, ds, split, cfg)
    return fit_and_score(model_kind, *data, _hp(cfg, model_kind, seed))


def run_experiment(cfg: ExperimentConfig, table: RawTable | None = None) -> ExperimentReport:
    _stage("config", cfg.validate)
    if table is None:
        table = _stage("ingest", load_table, cfg)
    full = _stage("encode", encode_dataset, table, cfg.schema)

    per_model = {k: [] for k in cfg.models}
    for i in range(cfg.trials):
        seed = cfg.base_seed + i
        split = _stage("split", split_indices, full.n, cfg.train_ratio, seed)
        digest = _digest(split)
        data = prepare_trial(table, full, split, cfg)
        for kind in cfg.models:
            rep = fit_and_score(kind, *data, _hp(cfg, kind, seed))
            per_model[kind].append(TrialResult(seed, rep, digest))

    results = tuple(
        ModelResult(k, tuple(per_model[k]), mean_report(t.report for t in per_model[k]))
        for k in cfg.models
    )
    provenance = {
        "config": cfg.echo(),
        "dataset_sha256": table.fingerprint(),
        "n_rows": full.n,
        "n_classes": full.n_classes,
        "features": list(full.feature_names),
        "artifact_version": __version__,
    }
    return ExperimentReport(results, provenance)


def _num(x) -> str:
    return "" if x is None else repr(float(x))


def model_table_csv(result: ModelResult) -> str:
    buf = io.StringIO(newline="")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TABLE_HEADER)
    name = DISPLAY[result.kind]
    rows = [(str(i + 1), str(t.seed), t.report) for i, t in enumerate(result.trials)]
    rows.append(("average", "", result.mean))
    for trial, seed, r in rows:
        w.writerow([name, trial, seed, _num(r.accuracy), _num(r.r_square), _num(r.mse), _num(r.mae)])
    return buf.getvalue()


def emit_figure_data(report: ExperimentReport) -> dict[str, str]:
    """One bar-chart CSV per metric, models in RF, DT, GNB, LR order."""
    present = [k for k in FIGURE_ORDER if any(m.kind == k for m in report.models)]
    out = {}
    for fname, attr in FIGURE_METRICS:
        buf = io.StringIO(newline="")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("Model", attr))
        for k in present:
            w.writerow((DISPLAY[k], _num(getattr(report.model(k).mean, attr))))
        out[fname] = buf.getvalue()
    return out


def summary_table(report: ExperimentReport) -> str:
    lines = [f"{'Model':<6} {'Accuracy':>10} {'R Square':>10} {'MSE':>10} {'MAE':>10} {'RMSE*':>10}"]
    for m in report.models:
        r = m.mean
        r2 = "n/a" if r.r_square is None else f"{r.r_square:.4g}"
        lines.append(
            f"{DISPLAY[m.kind]:<6} {format_percent(r.accuracy):>10} {r2:>10} "
            f"{r.mse:>10.4g} {r.mae:>10.4g} {r.rmse:>10.4g}"
        )
    lines.append("* RMSE is informational and left out of the CSV tables")
    return "\n".join(lines)


def atomic_write(path: Path, data: str | bytes):
    """Write via a temp file in the same directory, renamed on success."""
    path = Path(path)
    blob = data.encode("utf-8") if isinstance(data, str) else data
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(blob)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_report(report: ExperimentReport, out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {"report.json": report.to_json()}
    for m in report.models:
        files[f"table_{m.kind}.csv"] = model_table_csv(m)
    for name, text in emit_figure_data(report).items():
        files[f"figure_{name}.csv"] = text
    written = []
    for name, text in files.items():
        atomic_write(out / name, text)
        written.append(out / name)
    return written

