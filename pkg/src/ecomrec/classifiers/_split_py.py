"""Pure numpy best-split search; fallback for the compiled kernel."""
import numpy as np

TIE_TOL = 1e-12


def _entropy_rows(counts, m):
    m = np.asarray(m, dtype=float).reshape(-1, 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = counts / m
        terms = np.where(counts > 0, -p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return terms.sum(axis=1)


def node_entropy(y, idx, n_classes):
    counts = np.bincount(y[idx], minlength=n_classes).astype(float)
    return float(_entropy_rows(counts[None, :], len(idx))[0])


def best_split(X, y, idx, features, categorical, n_classes):
    """Return ``(feature, threshold, gain)``; feature is -1 when every
    candidate feature is constant on the node.

    A zero-gain split is still returned, so patterns like XOR that only pay
    off one level down can be learned.

    Candidates are ordered by feature then ascending threshold; the first one
    whose gain is within ``TIE_TOL`` of the maximum wins. ``threshold`` is NaN
    for categorical (multiway) splits.
    """
    n = len(idx)
    if n < 2 or len(features) == 0:
        return -1, float("nan"), 0.0
    yy = y[idx]
    total = np.bincount(yy, minlength=n_classes).astype(float)
    parent = float(_entropy_rows(total[None, :], n)[0])

    gains, thrs, feats = [], [], []
    for f in features:
        vals = X[idx, f]
        order = np.argsort(vals, kind="stable")
        sv, sy = vals[order], yy[order]
        if sv[0] == sv[-1]:
            continue
        if categorical[f]:
            _, inv = np.unique(sv, return_inverse=True)
            counts = np.zeros((inv.max() + 1, n_classes))
            np.add.at(counts, (inv, sy), 1.0)
            sizes = counts.sum(axis=1)
            weighted = np.sum((sizes / n) * _entropy_rows(counts, sizes))
            gains.append(np.array([parent - weighted]))
            thrs.append(np.array([np.nan]))
            feats.append(np.array([f]))
        else:
            onehot = np.zeros((n, n_classes))
            onehot[np.arange(n), sy] = 1.0
            left = np.cumsum(onehot, axis=0)[:-1]
            cut = np.nonzero(sv[:-1] < sv[1:])[0]
            left = left[cut]
            right = total - left
            nl = (cut + 1).astype(float)
            nr = n - nl
            weighted = (nl / n) * _entropy_rows(left, nl) + (nr / n) * _entropy_rows(right, nr)
            a, b = sv[cut], sv[cut + 1]
            thr = a + 0.5 * (b - a)
            thr = np.where(thr >= b, a, thr)
            gains.append(parent - weighted)
            thrs.append(thr)
            feats.append(np.full(cut.size, f))
    if not gains:
        return -1, float("nan"), 0.0
    gains = np.concatenate(gains)
    best = gains.max()
    g = int(np.argmax(gains >= best - TIE_TOL))
    return int(np.concatenate(feats)[g]), float(np.concatenate(thrs)[g]), float(gains[g])
