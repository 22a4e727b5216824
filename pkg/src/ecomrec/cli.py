"""Command-line entry point: ``ecomrec {generate,run,train,predict}``.

Exit status is 0 on success, 1 on a runtime failure and 2 on a usage error.
Failures print one machine-readable line to stderr::

    error: stage=<stage> type=<ExceptionName> message=<text>
"""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, classifiers
from .data import DEFAULT_SCHEMA, LabelEncoder, Schema, encode_dataset, encode_features
from .errors import ModelFormatError, StageError
from .experiment import (
    ExperimentConfig,
    atomic_write,
    parse_pca,
    run_experiment,
    summary_table,
    write_report,
)
from .ingest import SynthConfig, generate_synthetic, parse_csv, serialize_csv
from .pca import PcaModel, fit_pca, transform

MODEL_FILE_FORMAT = "ecomrec-model"

# flag dest -> (hyperparameter name, model kinds it applies to)
HP_FLAGS = {
    "max_depth": ("max_depth", ("dt", "rf")),
    "min_samples": ("min_samples", ("dt", "rf")),
    "n_trees": ("n_trees", ("rf",)),
    "features_per_split": ("features_per_split", ("rf",)),
    "no_bootstrap": ("bootstrap", ("rf",)),
    "learning_rate": ("learning_rate", ("lr",)),
    "max_iter": ("max_iter", ("lr",)),
    "tol": ("tol", ("lr",)),
    "var_smoothing": ("var_smoothing", ("gnb",)),
}


class UsageError(Exception):
    pass


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {v}")
    return v


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def _unit_interval(text):
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {v}")
    return v


def _open_ratio(text):
    v = float(text)
    if not 0.0 < v < 1.0:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1), got {v}")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {v}")
    return v


def _pca_flag(text):
    try:
        parse_pca(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def _models_flag(text):
    kinds = [k.strip().lower() for k in text.split(",") if k.strip()]
    bad = [k for k in kinds if k not in classifiers.TRAINERS]
    if not kinds or bad:
        raise argparse.ArgumentTypeError(f"models must be a comma list of rf,dt,gnb,lr; got {text!r}")
    if len(set(kinds)) != len(kinds):
        raise argparse.ArgumentTypeError("a model is listed twice")
    return tuple(kinds)


def load_schema(path) -> Schema:
    """Read a schema file::

        [columns]
        customer id = identifier
        product model = categorical
        ...
        [target]
        column = product model
    """
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # keep column-name case
    with open(path, encoding="utf-8") as fh:
        cp.read_file(fh)
    if not cp.has_section("columns") or not cp.has_option("target", "column"):
        raise ValueError("schema file needs a [columns] section and [target] column = <name>")
    cols = tuple((name, kind.strip()) for name, kind in cp.items("columns"))
    return Schema(cols, cp.get("target", "column").strip())


def _add_hp_flags(p):
    g = p.add_argument_group("hyperparameters")
    g.add_argument("--max-depth", type=_nonneg_int, help="tree depth cap (dt, rf)")
    g.add_argument("--min-samples", type=_positive_int, help="minimum rows to split a node (dt, rf)")
    g.add_argument("--n-trees", type=_positive_int, help="forest size (rf)")
    g.add_argument("--features-per-split", type=_positive_int, help="candidate features per node (rf)")
    g.add_argument("--no-bootstrap", action="store_true", default=None, help="train every tree on all rows (rf)")
    g.add_argument("--learning-rate", type=_positive_float, help="gradient step (lr)")
    g.add_argument("--max-iter", type=_positive_int, help="iteration cap (lr)")
    g.add_argument("--tol", type=_positive_float, help="loss-decrease stopping tolerance (lr)")
    g.add_argument("--var-smoothing", type=_positive_float, help="variance floor factor (gnb)")


def collect_hyperparams(args, kinds) -> dict:
    """Per-model hyperparameter dicts; a flag that targets no selected model is
    a usage error."""
    out = {k: {} for k in kinds}
    for dest, (name, targets) in HP_FLAGS.items():
        value = getattr(args, dest, None)
        if value is None:
            continue
        hit = [k for k in targets if k in kinds]
        if not hit:
            flag = "--" + dest.replace("_", "-")
            raise UsageError(f"{flag} applies to {'/'.join(targets)}, none of which is selected")
        if dest == "no_bootstrap":
            value = False
        for k in hit:
            out[k][name] = value
    return {k: v for k, v in out.items() if v}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ecomrec", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ecomrec {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a seeded synthetic transaction CSV")
    g.add_argument("--rows", type=_positive_int, required=True)
    g.add_argument("--products", type=_positive_int, default=10)
    g.add_argument("--noise", type=_unit_interval, default=0.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True, type=Path)

    r = sub.add_parser("run", help="repeated-trial comparison of the classifiers")
    r.add_argument("--data", required=True, type=Path)
    r.add_argument("--schema", type=Path, help="schema file (default: the 11-column order schema)")
    r.add_argument("--models", type=_models_flag, default=("rf", "dt", "gnb", "lr"))
    r.add_argument("--trials", type=_positive_int, default=10)
    r.add_argument("--seed", type=int, default=0, help="base seed; trial i uses seed + i")
    r.add_argument("--ratio", type=_open_ratio, default=0.75, help="train fraction")
    r.add_argument("--pca", type=_pca_flag, default="off", help="off | k=<n> | var=<0..1>")
    r.add_argument("--no-standardize", action="store_true", help="center only before PCA")
    r.add_argument("--encoder-fit", choices=("full", "train"), default="full",
                   help="fit label encoders on the whole table or on each training split")
    r.add_argument("--out-dir", type=Path, default=Path("results"))
    _add_hp_flags(r)

    t = sub.add_parser("train", help="fit one model and save it with its encoders")
    t.add_argument("--data", required=True, type=Path)
    t.add_argument("--schema", type=Path)
    t.add_argument("--model", required=True, choices=sorted(classifiers.TRAINERS))
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--pca", type=_pca_flag, default="off")
    t.add_argument("--no-standardize", action="store_true")
    t.add_argument("--model-out", required=True, type=Path)
    _add_hp_flags(t)

    p = sub.add_parser("predict", help="predict the product for every row of a CSV")
    p.add_argument("--model-in", required=True, type=Path)
    p.add_argument("--data", required=True, type=Path)
    p.add_argument("--predictions-out", required=True, type=Path)
    return parser


def _read_table(path):
    try:
        return parse_csv(Path(path).read_bytes())
    except Exception as exc:
        raise StageError("ingest", exc) from exc


def _schema(args):
    if args.schema is None:
        return DEFAULT_SCHEMA
    try:
        return load_schema(args.schema)
    except Exception as exc:
        raise StageError("schema", exc) from exc


def cmd_generate(args) -> int:
    cfg = SynthConfig(args.rows, args.products, args.noise, args.seed)
    try:
        cfg.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    table = generate_synthetic(cfg)
    try:
        atomic_write(args.out, serialize_csv(table))
    except OSError as exc:
        raise StageError("write", exc) from exc
    print(f"wrote {len(table.rows)} rows to {args.out}")
    return 0


def cmd_run(args) -> int:
    hp = collect_hyperparams(args, args.models)
    schema = _schema(args)
    table = _read_table(args.data)
    cfg = ExperimentConfig(
        data_path=str(args.data),
        schema=schema,
        models=args.models,
        trials=args.trials,
        base_seed=args.seed,
        train_ratio=args.ratio,
        pca=parse_pca(args.pca),
        pca_standardize=not args.no_standardize,
        hyperparams=hp,
        encoder_fit=args.encoder_fit,
    )
    report = run_experiment(cfg, table=table)
    try:
        write_report(report, args.out_dir)
    except OSError as exc:
        raise StageError("write", exc) from exc
    print(summary_table(report))
    return 0


def cmd_train(args) -> int:
    hp = collect_hyperparams(args, (args.model,)).get(args.model, {})
    if args.model == "rf":
        hp.setdefault("seed", args.seed)
    schema = _schema(args)
    table = _read_table(args.data)
    try:
        ds = encode_dataset(table, schema)
    except Exception as exc:
        raise StageError("encode", exc) from exc
    X, categorical = ds.features, ds.categorical
    pca_model = None
    setting = parse_pca(args.pca)
    if setting is not None:
        try:
            pca_model = fit_pca(X, standardize=not args.no_standardize, **setting)
        except Exception as exc:
            raise StageError("pca", exc) from exc
        X, categorical = transform(pca_model, X), (False,) * pca_model.k
    try:
        model = classifiers.train(args.model, X, ds.target, categorical, **hp)
    except Exception as exc:
        raise StageError(f"train:{args.model}", exc) from exc

    doc = classifiers.model_to_dict(model)
    doc["format"] = MODEL_FILE_FORMAT
    doc["pipeline"] = {
        "schema": schema.to_dict(),
        "encoders": {name: list(enc.classes) for name, enc in sorted(ds.encoders.items())},
        "pca": None if pca_model is None else pca_model.to_dict(),
        "artifact_version": __version__,
    }
    try:
        atomic_write(args.model_out, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise StageError("write", exc) from exc
    print(f"trained {args.model} on {ds.n} rows; saved to {args.model_out}")
    return 0


def load_model_file(path):
    """Return ``(model, schema, encoders, pca_model)`` from a saved model file."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(doc, dict) or doc.get("format") != MODEL_FILE_FORMAT:
        raise ModelFormatError("not an ecomrec model file")
    model = classifiers.model_from_dict(doc)
    try:
        pipe = doc["pipeline"]
        schema = Schema.from_dict(pipe["schema"])
        encoders = {k: LabelEncoder(tuple(v)) for k, v in pipe["encoders"].items()}
        pca_model = None if pipe["pca"] is None else PcaModel.from_dict(pipe["pca"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed pipeline section: {exc}") from None
    if schema.target_column not in encoders:
        raise ModelFormatError("model file lacks the target encoder")
    return model, schema, encoders, pca_model


def cmd_predict(args) -> int:
    try:
        model, schema, encoders, pca_model = load_model_file(args.model_in)
    except Exception as exc:
        raise StageError("load-model", exc) from exc
    table = _read_table(args.data)
    try:
        feature_encoders = {k: v for k, v in encoders.items() if k != schema.target_column}
        X, _, _ = encode_features(table, schema, feature_encoders, allow_missing_target=True)
        if pca_model is not None:
            X = transform(pca_model, X)
    except Exception as exc:
        raise StageError("encode", exc) from exc
    try:
        codes = classifiers.predict(model, X)
        labels = encoders[schema.target_column].decode(np.asarray(codes, dtype=np.int64))
    except Exception as exc:
        raise StageError("predict", exc) from exc
    buf = io.StringIO(newline="")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([schema.target_column])
    w.writerows([v] for v in labels)
    out = buf.getvalue()
    try:
        atomic_write(args.predictions_out, out)
    except OSError as exc:
        raise StageError("write", exc) from exc
    print(f"wrote {len(labels)} predictions to {args.predictions_out}")
    return 0


COMMANDS = {"generate": cmd_generate, "run": cmd_run, "train": cmd_train, "predict": cmd_predict}


def _error_line(stage, exc):
    msg = str(exc).replace("\n", " ")
    print(f"error: stage={stage} type={type(exc).__name__} message={msg}", file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits 2 on bad flags
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        _error_line("usage", exc)
        return 2
    except StageError as exc:
        _error_line(exc.stage, exc.cause)
        return 1
    except Exception as exc:  # pragma: no cover - last-resort guard
        _error_line("internal", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
