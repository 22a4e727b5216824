"""Dataset schema, label encoding and the seeded train/test split."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from .errors import (
    DegenerateTarget,
    EmptyColumn,
    ParseError,
    SchemaMismatch,
    TooFewRows,
    UnseenCategory,
)

if TYPE_CHECKING:
    from .ingest import RawTable

KINDS = ("categorical", "numeric", "identifier", "freetext")


@dataclass(frozen=True)
class Schema:
    """Ordered column names with their kinds, plus the column to predict.

    Identifier and freetext columns are carried through ingestion but never
    become features.
    """

    columns: tuple[tuple[str, str], ...]
    target_column: str

    def __post_init__(self):
        cols = tuple((str(n), str(k)) for n, k in self.columns)
        object.__setattr__(self, "columns", cols)
        names = [n for n, _ in cols]
        if any(not n for n in names):
            raise SchemaMismatch("column names must be non-empty")
        if len(set(names)) != len(names):
            raise SchemaMismatch("column names must be unique")
        for n, k in cols:
            if k not in KINDS:
                raise SchemaMismatch(f"column {n!r}: unknown kind {k!r}")
        if self.target_column not in names:
            raise SchemaMismatch(f"target column {self.target_column!r} not in schema")
        if self.kind(self.target_column) != "categorical":
            raise SchemaMismatch("target column must be categorical")

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.columns]

    def kind(self, name: str) -> str:
        return dict(self.columns)[name]

    @property
    def feature_columns(self) -> list[str]:
        return [
            n
            for n, k in self.columns
            if n != self.target_column and k in ("categorical", "numeric")
        ]

    def to_dict(self) -> dict:
        return {
            "columns": [[n, k] for n, k in self.columns],
            "target_column": self.target_column,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Schema":
        return cls(tuple(tuple(c) for c in d["columns"]), d["target_column"])


DEFAULT_SCHEMA = Schema(
    columns=(
        ("customer id", "identifier"),
        ("name", "identifier"),
        ("email", "identifier"),
        ("product model", "categorical"),
        ("product quantity", "numeric"),
        ("product price", "numeric"),
        ("customer address", "identifier"),
        ("phone number", "identifier"),
        ("order date", "identifier"),
        ("order status", "categorical"),
        ("customer feedback message", "freetext"),
    ),
    target_column="product model",
)


@dataclass(frozen=True)
class LabelEncoder:
    """Bijection between category strings and codes ``0..k-1``.

    Codes follow ascending lexicographic order of the category strings.
    """

    classes: tuple[str, ...]
    mapping: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        object.__setattr__(self, "mapping", {c: i for i, c in enumerate(self.classes)})

    def __len__(self):
        return len(self.classes)

    def encode(self, values: Iterable[str]) -> np.ndarray:
        out = []
        for v in values:
            try:
                out.append(self.mapping[v])
            except KeyError:
                raise UnseenCategory(f"category {v!r} was not seen when fitting") from None
        return np.asarray(out, dtype=np.int64)

    def decode(self, codes: Iterable[int]) -> list[str]:
        k = len(self.classes)
        out = []
        for c in codes:
            c = int(c)
            if not 0 <= c < k:
                raise UnseenCategory(f"code {c} outside [0, {k})")
            out.append(self.classes[c])
        return out


def fit_label_encoder(column: Sequence[str]) -> LabelEncoder:
    if len(column) == 0:
        raise EmptyColumn("cannot fit a label encoder on an empty column")
    return LabelEncoder(tuple(sorted(set(column))))


@dataclass(frozen=True)
class EncodedDataset:
    features: np.ndarray
    target: np.ndarray
    encoders: dict[str, LabelEncoder]
    n_classes: int
    feature_names: tuple[str, ...]
    categorical: tuple[bool, ...]
    target_column: str

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    def subset(self, indices) -> "EncodedDataset":
        idx = np.asarray(indices, dtype=np.intp)
        return EncodedDataset(
            self.features[idx],
            self.target[idx],
            self.encoders,
            self.n_classes,
            self.feature_names,
            self.categorical,
            self.target_column,
        )


def _parse_real(value: str, column: str, row: int) -> float:
    try:
        x = float(value)
    except ValueError:
        raise ParseError(f"row {row}, column {column!r}: {value!r} is not a number") from None
    if not math.isfinite(x):
        raise ParseError(f"row {row}, column {column!r}: non-finite value {value!r}")
    return x


def _check_header(header: Sequence[str], schema: Schema, allow_missing_target: bool) -> bool:
    names = schema.names
    if list(header) == names:
        return True
    if allow_missing_target and list(header) == [n for n in names if n != schema.target_column]:
        return False
    raise SchemaMismatch(f"header {list(header)} does not match schema columns {names}")


def encode_features(
    table: "RawTable",
    schema: Schema,
    encoders: dict[str, LabelEncoder] | None = None,
    allow_missing_target: bool = False,
) -> tuple[np.ndarray, dict[str, LabelEncoder], bool]:
    """Build the feature matrix; returns ``(features, encoders, has_target)``.

    Encoders passed in are applied as-is (unseen values raise); missing ones
    are fitted on this table.
    """
    has_target = _check_header(table.header, schema, allow_missing_target)
    pos = {n: i for i, n in enumerate(table.header)}
    width = len(table.header)
    for r, row in enumerate(table.rows, start=1):
        if len(row) != width:
            raise SchemaMismatch(f"row {r} has {len(row)} fields, schema has {width}")

    encoders = dict(encoders or {})
    cols = []
    for name in schema.feature_columns:
        raw = [row[pos[name]] for row in table.rows]
        for r, v in enumerate(raw, start=1):
            if v == "":
                raise ParseError(f"row {r}, column {name!r}: missing value")
        if schema.kind(name) == "numeric":
            cols.append(np.array([_parse_real(v, name, r) for r, v in enumerate(raw, 1)], dtype=float))
        else:
            if name not in encoders:
                encoders[name] = fit_label_encoder(raw)
            cols.append(encoders[name].encode(raw).astype(float))
    n = len(table.rows)
    features = np.column_stack(cols) if cols else np.empty((n, 0))
    return features.reshape(n, len(cols)), encoders, has_target


def encode_dataset(
    table: "RawTable",
    schema: Schema = DEFAULT_SCHEMA,
    encoders: dict[str, LabelEncoder] | None = None,
) -> EncodedDataset:
    """Label-encode categorical columns and drop identifier/freetext ones."""
    features, encoders, _ = encode_features(table, schema, encoders)
    tname = schema.target_column
    raw_target = [row[table.header.index(tname)] for row in table.rows]
    if any(v == "" for v in raw_target):
        raise ParseError(f"column {tname!r}: missing target value")
    if tname not in encoders:
        if len(set(raw_target)) < 2:
            raise DegenerateTarget(f"target column {tname!r} has fewer than 2 distinct values")
        encoders[tname] = fit_label_encoder(raw_target)
    target = encoders[tname].encode(raw_target)
    names = tuple(schema.feature_columns)
    return EncodedDataset(
        features=features,
        target=target,
        encoders=encoders,
        n_classes=len(encoders[tname]),
        feature_names=names,
        categorical=tuple(schema.kind(n) == "categorical" for n in names),
        target_column=tname,
    )


@dataclass(frozen=True)
class TrainTestSplit:
    train_indices: tuple[int, ...]
    test_indices: tuple[int, ...]
    seed: int
    train_ratio: float = 0.75


def split_indices(n: int, ratio: float = 0.75, seed: int = 0) -> TrainTestSplit:
    if not 0.0 < ratio < 1.0:
        raise ValueError(f"train ratio must lie in (0, 1), got {ratio}")
    n_train = math.floor(ratio * n)
    if n < 2 or n_train == 0 or n_train == n:
        raise TooFewRows(f"cannot split {n} rows at ratio {ratio}: one side would be empty")
    perm = np.random.default_rng(seed).permutation(n)
    return TrainTestSplit(
        tuple(int(i) for i in perm[:n_train]),
        tuple(int(i) for i in perm[n_train:]),
        seed,
        ratio,
    )


def split_dataset(ds: EncodedDataset, ratio: float = 0.75, seed: int = 0) -> TrainTestSplit:
    return split_indices(ds.n, ratio, seed)
