"""Accuracy plus regression-style errors computed on encoded class labels.

R², MSE, RMSE and MAE treat the integer label codes as numbers. That is only
meaningful as a rough distance between codes, but it is what produces the
negative R² values seen for weak classifiers.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConstantTruth, EmptyInput, LengthMismatch


def _pair(y_true, y_pred, min_len=1):
    a = np.asarray(y_true, dtype=float).reshape(-1)
    b = np.asarray(y_pred, dtype=float).reshape(-1)
    if a.shape != b.shape:
        raise LengthMismatch(f"length mismatch: {a.size} vs {b.size}")
    if a.size < min_len:
        if a.size == 0:
            raise EmptyInput("metrics need at least one sample")
        raise LengthMismatch(f"need at least {min_len} samples, got {a.size}")
    return a, b


def accuracy(y_true, y_pred) -> float:
    a, b = _pair(y_true, y_pred)
    return float(np.count_nonzero(a == b)) / a.size


def r_square(y_true, y_pred) -> float:
    a, b = _pair(y_true, y_pred, min_len=2)
    ss_tot = float(np.sum((a - a.mean()) ** 2))
    if ss_tot == 0.0:
        raise ConstantTruth("R² is undefined when y_true is constant")
    return 1.0 - float(np.sum((a - b) ** 2)) / ss_tot


def mse(y_true, y_pred) -> float:
    a, b = _pair(y_true, y_pred)
    return float(np.mean((a - b) ** 2))


def rmse(y_true, y_pred) -> float:
    return math.sqrt(mse(y_true, y_pred))


def mae(y_true, y_pred) -> float:
    a, b = _pair(y_true, y_pred)
    return float(np.mean(np.abs(a - b)))


@dataclass(frozen=True)
class MetricReport:
    accuracy: float
    r_square: float | None  # None when the truth is constant
    mse: float
    rmse: float
    mae: float
    n: int

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d) -> "MetricReport":
        return cls(**d)

    def table_row(self) -> str:
        """``accuracy% | r² | mse | mae`` for quick printing."""
        return " | ".join([
            format_percent(self.accuracy),
            "n/a" if self.r_square is None else f"{self.r_square:.4g}",
            f"{self.mse:.4g}",
            f"{self.mae:.4g}",
        ])


def format_percent(x: float) -> str:
    s = f"{100.0 * x:.3f}".rstrip("0").rstrip(".")
    return s + "%"


def evaluate(y_true, y_pred) -> MetricReport:
    a, b = _pair(y_true, y_pred)
    try:
        r2 = r_square(a, b)
    except (ConstantTruth, LengthMismatch):
        r2 = None
    m = mse(a, b)
    return MetricReport(accuracy(a, b), r2, m, math.sqrt(m), mae(a, b), int(a.size))


def mean_report(reports) -> MetricReport:
    """Arithmetic mean of each metric; R² is None if any trial lacks it."""
    reports = list(reports)
    if not reports:
        raise EmptyInput("no reports to average")
    k = len(reports)

    def avg(name):
        return sum(getattr(r, name) for r in reports) / k

    r2 = None if any(r.r_square is None for r in reports) else avg("r_square")
    return MetricReport(avg("accuracy"), r2, avg("mse"), avg("rmse"), avg("mae"),
                        round(avg("n")))
