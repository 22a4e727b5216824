"""Principal component analysis by eigendecomposition of the covariance matrix."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, DimensionMismatch, ZeroVarianceAllColumns

NEG_EIG_CLAMP = 1e-10


def jacobi_eigh(a, tol=1e-15, max_sweeps=100):
    """Eigen-decompose a symmetric matrix with cyclic Jacobi rotations.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvectors as columns,
    unsorted.
    """
    a = np.array(a, dtype=float)
    d = a.shape[0]
    v = np.eye(d)
    if d == 1:
        return a.diagonal().copy(), v
    scale = max(np.abs(a).max(), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.triu(a, 1) ** 2))
        if off <= tol * scale:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta == 0.0:
                    t = 1.0
                elif abs(theta) > 1e150:
                    t = 1.0 / (2.0 * theta)
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # A <- J^T A J, applied to rows and columns p, q
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    return a.diagonal().copy(), v


@dataclass(frozen=True)
class PcaModel:
    mean: np.ndarray
    scale: np.ndarray
    components: np.ndarray  # d x k, orthonormal columns
    eigenvalues: np.ndarray  # length k, nonincreasing
    total_variance: float
    all_eigenvalues: np.ndarray  # length d, for diagnostics
    standardize: bool = True

    @property
    def d(self):
        return self.components.shape[0]

    @property
    def k(self):
        return self.components.shape[1]

    def explained_variance_ratio(self):
        if self.total_variance == 0:
            return np.zeros(self.k)
        return self.eigenvalues / self.total_variance

    def to_dict(self) -> dict:
        return {
            "mean": self.mean.tolist(),
            "scale": self.scale.tolist(),
            # column-major: one list per component
            "components": self.components.T.tolist(),
            "eigenvalues": self.eigenvalues.tolist(),
            "all_eigenvalues": self.all_eigenvalues.tolist(),
            "total_variance": float(self.total_variance),
            "standardize": self.standardize,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PcaModel":
        mean = np.asarray(d["mean"], dtype=float)
        comps = np.asarray(d["components"], dtype=float).reshape(-1, mean.size).T
        return cls(
            mean=mean,
            scale=np.asarray(d["scale"], dtype=float),
            components=comps,
            eigenvalues=np.asarray(d["eigenvalues"], dtype=float),
            total_variance=float(d["total_variance"]),
            all_eigenvalues=np.asarray(d.get("all_eigenvalues", d["eigenvalues"]), dtype=float),
            standardize=bool(d.get("standardize", True)),
        )


def fit_pca(features, k=None, variance=None, standardize=True) -> PcaModel:
    """Fit PCA keeping ``k`` components, or enough to reach ``variance``.

    With neither given, keeps 95% of the total variance. Zero-variance
    columns get a unit scale under standardization.
    """
    x = np.asarray(features, dtype=float)
    if x.ndim != 2:
        raise DimensionMismatch("features must be a 2-D matrix")
    n, d = x.shape
    if n < 2:
        raise DegenerateInput(f"PCA needs at least 2 rows, got {n}")
    if d < 1:
        raise DegenerateInput("PCA needs at least 1 column")
    if k is not None and variance is not None:
        raise ValueError("give either k or variance, not both")
    if k is None and variance is None:
        variance = 0.95
    if k is not None and not 1 <= k <= d:
        raise ValueError(f"k must lie in [1, {d}], got {k}")
    if variance is not None and not 0.0 < variance <= 1.0:
        raise ValueError(f"variance target must lie in (0, 1], got {variance}")

    mean = x.mean(axis=0)
    std = x.std(axis=0, ddof=1)
    if np.all(std == 0):
        raise ZeroVarianceAllColumns("every column is constant")
    scale = np.where(std > 0, std, 1.0) if standardize else np.ones(d)
    z = (x - mean) / scale
    cov = z.T @ z / (n - 1)
    cov = 0.5 * (cov + cov.T)

    vals, vecs = jacobi_eigh(cov)
    order = np.argsort(-vals, kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    total = float(np.trace(cov))
    floor = NEG_EIG_CLAMP * max(1.0, abs(total))
    if np.any(vals < -floor):
        raise DegenerateInput(f"covariance has a negative eigenvalue {vals.min():.3e}")
    vals = np.where(vals < 0, 0.0, vals)

    for j in range(d):
        col = vecs[:, j]
        if col[np.argmax(np.abs(col))] < 0:
            vecs[:, j] = -col

    if k is None:
        cum = np.cumsum(vals)
        hit = np.nonzero(cum >= variance * total * (1 - 1e-12))[0]
        k = int(hit[0]) + 1 if hit.size else d
    return PcaModel(
        mean=mean,
        scale=scale,
        components=vecs[:, :k].copy(),
        eigenvalues=vals[:k].copy(),
        total_variance=total,
        all_eigenvalues=vals,
        standardize=standardize,
    )


def transform(model: PcaModel, features) -> np.ndarray:
    x = np.asarray(features, dtype=float)
    if x.ndim != 2:
        x = x.reshape(-1, model.d)
    if x.shape[1] != model.d:
        raise DimensionMismatch(f"expected {model.d} columns, got {x.shape[1]}")
    if x.shape[0] == 0:
        return np.empty((0, model.k))
    return ((x - model.mean) / model.scale) @ model.components


def inverse_transform(model: PcaModel, reduced) -> np.ndarray:
    r = np.asarray(reduced, dtype=float)
    if r.ndim != 2:
        r = r.reshape(-1, model.k)
    if r.shape[1] != model.k:
        raise DimensionMismatch(f"expected {model.k} columns, got {r.shape[1]}")
    return (r @ model.components.T) * model.scale + model.mean
