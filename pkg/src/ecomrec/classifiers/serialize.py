"""JSON documents for trained models: ``{"kind", "version", "model"}``."""
from __future__ import annotations

import json

import numpy as np

from ..errors import ModelFormatError
from .bayes import GnbModel
from .forest import RfModel
from .logistic import LrModel
from .tree import DtModel, Leaf, Node

FORMAT_VERSION = 1


def _label_out(c):
    if isinstance(c, (np.integer, int)):
        return int(c)
    if isinstance(c, str):
        return str(c)
    return float(c)


def _labels_out(classes):
    return [_label_out(c) for c in classes]


def _node_to_dict(node):
    if isinstance(node, Leaf):
        return {"leaf": node.label, "dist": list(node.distribution)}
    if node.threshold is None:
        children = [[v, _node_to_dict(ch)] for v, ch in node.children.items()]
    else:
        children = [_node_to_dict(ch) for ch in node.children]
    return {
        "feature": node.feature,
        "threshold": node.threshold,
        "label": node.label,
        "dist": list(node.distribution),
        "children": children,
    }


def _node_from_dict(d):
    if "leaf" in d:
        return Leaf(int(d["leaf"]), [int(x) for x in d["dist"]])
    if d["threshold"] is None:
        children = {float(v): _node_from_dict(ch) for v, ch in d["children"]}
        thr = None
    else:
        children = [_node_from_dict(ch) for ch in d["children"]]
        thr = float(d["threshold"])
    return Node(int(d["feature"]), thr, children, int(d["label"]), [int(x) for x in d["dist"]])


def _dt_body(m: DtModel):
    return {
        "classes": _labels_out(m.classes),
        "n_features": m.n_features,
        "categorical": list(m.categorical),
        "max_depth": m.max_depth,
        "min_samples": m.min_samples,
        "root": _node_to_dict(m.root),
    }


def _dt_from(b):
    return DtModel(
        _node_from_dict(b["root"]),
        np.asarray(b["classes"]),
        int(b["n_features"]),
        tuple(bool(c) for c in b["categorical"]),
        b["max_depth"],
        int(b["min_samples"]),
    )


def model_kind(model) -> str:
    for kind, cls in (("gnb", GnbModel), ("lr", LrModel), ("dt", DtModel), ("rf", RfModel)):
        if isinstance(model, cls):
            return kind
    raise TypeError(f"not a model: {type(model).__name__}")


def model_to_dict(model) -> dict:
    kind = model_kind(model)
    if kind == "gnb":
        body = {
            "classes": _labels_out(model.classes),
            "priors": model.priors.tolist(),
            "means": model.means.tolist(),
            "variances": model.variances.tolist(),
            "epsilon": model.epsilon,
        }
    elif kind == "lr":
        body = {
            "classes": _labels_out(model.classes),
            "weights": model.weights.tolist(),
            "biases": model.biases.tolist(),
            "learning_rate": model.learning_rate,
            "max_iter": model.max_iter,
            "tol": model.tol,
            "n_iter": list(model.n_iter),
        }
    elif kind == "dt":
        body = _dt_body(model)
    else:
        body = {
            "classes": _labels_out(model.classes),
            "n_features": model.n_features,
            "n_trees": model.n_trees,
            "features_per_split": model.features_per_split,
            "bootstrap": model.bootstrap,
            "seed": model.seed,
            "max_depth": model.max_depth,
            "min_samples": model.min_samples,
            "trees": [_dt_body(t) for t in model.trees],
        }
    return {"kind": kind, "version": FORMAT_VERSION, "model": body}


def model_from_dict(doc: dict):
    if not isinstance(doc, dict) or "kind" not in doc or "version" not in doc:
        raise ModelFormatError("model document lacks a kind tag or version")
    if doc["version"] != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model version {doc['version']!r}")
    kind, b = doc["kind"], doc.get("model")
    try:
        if kind == "gnb":
            return GnbModel(np.asarray(b["classes"]), np.asarray(b["priors"], dtype=float),
                            np.asarray(b["means"], dtype=float),
                            np.asarray(b["variances"], dtype=float), float(b["epsilon"]))
        if kind == "lr":
            return LrModel(np.asarray(b["classes"]), np.asarray(b["weights"], dtype=float),
                           np.asarray(b["biases"], dtype=float), float(b["learning_rate"]),
                           int(b["max_iter"]), float(b["tol"]), tuple(b.get("n_iter", ())))
        if kind == "dt":
            return _dt_from(b)
        if kind == "rf":
            return RfModel([_dt_from(t) for t in b["trees"]], np.asarray(b["classes"]),
                           int(b["n_features"]), int(b["n_trees"]), int(b["features_per_split"]),
                           bool(b["bootstrap"]), int(b["seed"]), b["max_depth"], int(b["min_samples"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed {kind} model: {exc}") from None
    raise ModelFormatError(f"unknown model kind {kind!r}")


def dumps(model) -> str:
    return json.dumps(model_to_dict(model), sort_keys=True, separators=(",", ":"))


def loads(text: str):
    return model_from_dict(json.loads(text))
