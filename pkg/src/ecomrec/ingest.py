"""CSV ingestion and a seeded synthetic generator for the order schema.

:func:`generate_synthetic` fabricates order tables with the eleven default
columns. Only product quantity, product price and order status carry signal
about the product model; every identifier and freetext column is drawn from
fixed pools and is pure noise.
"""
from __future__ import annotations

import csv
import hashlib
import io
from dataclasses import dataclass
from datetime import date, timedelta

import numpy as np

from .data import DEFAULT_SCHEMA
from .errors import BadConfig, BadQuoting, EmptyInput, RaggedRow


@dataclass(frozen=True)
class RawTable:
    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "header", tuple(self.header))
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))
        for i, row in enumerate(self.rows, start=2):
            if len(row) != len(self.header):
                raise RaggedRow(i, len(self.header), len(row))

    def column(self, name: str) -> list[str]:
        j = self.header.index(name)
        return [r[j] for r in self.rows]

    def take(self, indices) -> "RawTable":
        return RawTable(self.header, [self.rows[i] for i in indices])

    def fingerprint(self) -> str:
        return hashlib.sha256(serialize_csv(self)).hexdigest()


def parse_csv(data: bytes | str) -> RawTable:
    """Parse RFC-4180 CSV with a mandatory header row.

    Blank lines are skipped. Raises :class:`RaggedRow` or :class:`BadQuoting`
    carrying the offending physical line number.
    """
    if isinstance(data, bytes):
        text = data.decode("utf-8-sig")
    else:
        text = data
    if not text.strip():
        raise EmptyInput("CSV input is empty")

    reader = csv.reader(io.StringIO(text, newline=""), strict=True)
    header = None
    rows = []
    try:
        for record in reader:
            if not record:
                continue
            if header is None:
                header = record
                continue
            if len(record) != len(header):
                raise RaggedRow(reader.line_num, len(header), len(record))
            rows.append(record)
    except csv.Error as exc:
        raise BadQuoting(reader.line_num or 1, str(exc)) from None
    if header is None:
        raise EmptyInput("CSV input has no header row")
    return RawTable(header, rows)


def serialize_csv(table: RawTable) -> bytes:
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.header)
    writer.writerows(table.rows)
    return buf.getvalue().encode("utf-8")


@dataclass(frozen=True)
class SynthConfig:
    n_rows: int = 1000
    n_products: int = 10
    noise: float = 0.0
    seed: int = 0

    def validate(self):
        if not isinstance(self.n_rows, (int, np.integer)) or self.n_rows <= 0:
            raise BadConfig(f"n_rows must be a positive integer, got {self.n_rows!r}")
        if not isinstance(self.n_products, (int, np.integer)) or self.n_products < 2:
            raise BadConfig(f"n_products must be an integer >= 2, got {self.n_products!r}")
        if not 0.0 <= self.noise <= 1.0:
            raise BadConfig(f"noise must lie in [0, 1], got {self.noise!r}")
        if self.n_rows < 4 * self.n_products:
            raise BadConfig(
                f"n_rows ({self.n_rows}) must be at least 4 * n_products ({4 * self.n_products})"
            )


ORDER_STATUSES = ("cancelled", "delivered", "pending", "returned", "shipped")
N_SEGMENTS = 4
# discount / list / surcharge
PRICE_TIERS = np.array([-0.05, 0.0, 0.05])
# extra units above 1 are Poisson with a per-product rate drawn from this range
QTY_RATE_RANGE = (0.02, 0.3)

_FIRST = ("Amina", "Rahim", "Karim", "Nadia", "Tanvir", "Sadia", "Farhan", "Nusrat",
          "Imran", "Laila", "Arif", "Mitu", "Shakil", "Rumana", "Hasan", "Joya")
_LAST = ("Rahman", "Hossain", "Islam", "Ahmed", "Khan", "Chowdhury", "Akter", "Begum",
         "Uddin", "Sarkar", "Das", "Miah")
_STREETS = ("Road 3, Dhanmondi", "Lake Drive, Gulshan", "Block C, Mirpur 10",
            "Sector 7, Uttara", "Station Road, Tongi", "College Gate, Mohammadpur")
_CITIES = ("Dhaka", "Chattogram", "Sylhet", "Khulna", "Rajshahi")
_FEEDBACK = (
    "Great product, fast delivery",
    "Packaging was damaged, but the item works",
    "Exactly as described",
    "Would buy again",
    "Delivery took longer than promised",
    "Good value for the price, \"highly\" recommended",
    "Not satisfied with the quality",
    "Customer support was helpful",
)
_MODEL_LINES = ("Nova", "Astra", "Pulse", "Vertex", "Orbit", "Zen", "Flux", "Echo")


def _product_names(n: int) -> list[str]:
    names = []
    for i in range(n):
        line = _MODEL_LINES[i % len(_MODEL_LINES)]
        names.append(f"{line} X{100 + i}")
    return names


def generate_synthetic(cfg: SynthConfig) -> RawTable:
    """Draw a seeded table under the default eleven-column schema.

    Each row picks a latent customer segment, the segment picks the product
    (mixed half-and-half with a uniform draw so every product stays common),
    and the product fixes the informative columns: a small-integer quantity
    from a per-product rate, a price at the product's list price moved by one
    of the tiers -5%, 0 or +5%, and the product's fixed order status. List
    prices are spaced at least 25% apart, so the tiers of different products
    never overlap and the product is an exact function of the price when
    ``noise == 0``. With probability
    ``noise`` the recorded product is then replaced by a uniformly random one
    (possibly the same product).
    """
    cfg.validate()
    # independent streams: changing one column's model never reshuffles another
    feat_ss, label_ss, ident_ss = np.random.SeedSequence(cfg.seed).spawn(3)
    rng = np.random.default_rng(feat_ss)
    n, p = int(cfg.n_rows), int(cfg.n_products)
    products = _product_names(p)

    # per-product parameters
    ratios = rng.uniform(1.25, 1.6, size=p - 1)
    ladder = rng.uniform(15.0, 40.0) * np.concatenate([[1.0], np.cumprod(ratios)])
    list_price = ladder[rng.permutation(p)]
    qty_rate = rng.uniform(*QTY_RATE_RANGE, size=p)
    # each product goes through one fixed order flow; a random status per row
    # would let multiway splits strand rare (status, product) pairs
    product_status = rng.integers(0, len(ORDER_STATUSES), size=p)
    segment_pref = rng.dirichlet(np.full(p, 0.5), size=N_SEGMENTS)
    product_probs = 0.5 * segment_pref + 0.5 / p

    segment = rng.integers(0, N_SEGMENTS, size=n)
    true_product = np.array([rng.choice(p, p=product_probs[s]) for s in segment])
    # guarantee coverage of every product
    slots = rng.choice(n, size=p, replace=False)
    true_product[slots] = rng.permutation(p)

    quantity = 1 + rng.poisson(qty_rate[true_product])
    tier = rng.choice(PRICE_TIERS, size=n)
    price = np.round(list_price[true_product] * (1.0 + tier), 2)
    status = product_status[true_product]

    lrng = np.random.default_rng(label_ss)
    flip_u = lrng.random(n)
    replacement = lrng.integers(0, p, size=n)
    recorded = np.where(flip_u < cfg.noise, replacement, true_product)

    irng = np.random.default_rng(ident_ss)
    first = irng.integers(0, len(_FIRST), size=n)
    last = irng.integers(0, len(_LAST), size=n)
    street = irng.integers(0, len(_STREETS), size=n)
    city = irng.integers(0, len(_CITIES), size=n)
    phone = irng.integers(10_000_000, 99_999_999, size=n)
    day = irng.integers(0, 365, size=n)
    feedback = irng.integers(0, len(_FEEDBACK), size=n)
    start = date(2023, 1, 1)

    rows = []
    for i in range(n):
        fn, ln = _FIRST[first[i]], _LAST[last[i]]
        rows.append((
            f"C{i + 1:05d}",
            f"{fn} {ln}",
            f"{fn.lower()}.{ln.lower()}{i + 1}@example.com",
            products[recorded[i]],
            str(int(quantity[i])),
            f"{price[i]:.2f}",
            f"{_STREETS[street[i]]}, {_CITIES[city[i]]}",
            f"+8801{phone[i]}",
            (start + timedelta(days=int(day[i]))).isoformat(),
            ORDER_STATUSES[status[i]],
            _FEEDBACK[feedback[i]],
        ))
    return RawTable(DEFAULT_SCHEMA.names, rows)
