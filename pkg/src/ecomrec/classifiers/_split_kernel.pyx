# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled best-split search for decision-tree nodes.

Same contract as ``_split_py.best_split``.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport log2, NAN
from libc.stdlib cimport malloc, free, qsort

cnp.import_array()

cdef double TIE_TOL = 1e-12


cdef struct Pair:
    double v
    Py_ssize_t y


cdef int _cmp_pair(const void* a, const void* b) noexcept nogil:
    cdef double va = (<Pair*>a).v
    cdef double vb = (<Pair*>b).v
    if va < vb:
        return -1
    if va > vb:
        return 1
    return 0


cdef inline double _entropy(const double* counts, Py_ssize_t c, double m) noexcept nogil:
    cdef double h = 0.0, p
    cdef Py_ssize_t k
    if m <= 0:
        return 0.0
    for k in range(c):
        if counts[k] > 0:
            p = counts[k] / m
            h -= p * log2(p)
    return h


def node_entropy(const Py_ssize_t[::1] y, const Py_ssize_t[::1] idx, Py_ssize_t n_classes):
    cdef Py_ssize_t i, n = idx.shape[0]
    cdef double* counts = <double*>malloc(n_classes * sizeof(double))
    cdef double h
    for i in range(n_classes):
        counts[i] = 0
    for i in range(n):
        counts[y[idx[i]]] += 1
    h = _entropy(counts, n_classes, <double>n)
    free(counts)
    return h


def best_split(const double[:, ::1] X, const Py_ssize_t[::1] y,
               const Py_ssize_t[::1] idx, const Py_ssize_t[::1] features,
               const unsigned char[::1] categorical, Py_ssize_t n_classes):
    """Return ``(feature, threshold, gain)``; feature is -1 when every candidate is constant.

    ``threshold`` is NaN for categorical (multiway) splits.
    """
    cdef Py_ssize_t n = idx.shape[0], nf = features.shape[0], c = n_classes
    cdef Py_ssize_t i, j, k, f, g, start, ncand_f
    cdef double parent, weighted, m, nl, nr, a, b, thr, best_gain
    cdef Py_ssize_t best_feature = -1
    cdef double best_thr = NAN
    if n < 2 or nf == 0:
        return -1, NAN, 0.0

    cdef Pair* pairs = <Pair*>malloc(n * sizeof(Pair))
    cdef double* total = <double*>malloc(c * sizeof(double))
    cdef double* left = <double*>malloc(c * sizeof(double))
    cdef double* right = <double*>malloc(c * sizeof(double))
    # per-candidate storage: gains/thresholds in (feature, threshold) order
    cdef double* gains = <double*>malloc(nf * n * sizeof(double))
    cdef double* thrs = <double*>malloc(nf * n * sizeof(double))
    cdef Py_ssize_t* cand_feat = <Py_ssize_t*>malloc(nf * n * sizeof(Py_ssize_t))
    cdef Py_ssize_t ncand = 0

    for k in range(c):
        total[k] = 0
    for i in range(n):
        total[y[idx[i]]] += 1
    parent = _entropy(total, c, <double>n)

    for j in range(nf):
        f = features[j]
        for i in range(n):
            pairs[i].v = X[idx[i], f]
            pairs[i].y = y[idx[i]]
        qsort(pairs, n, sizeof(Pair), _cmp_pair)
        if pairs[0].v == pairs[n - 1].v:
            continue
        if categorical[f]:
            weighted = 0.0
            start = 0
            while start < n:
                for k in range(c):
                    left[k] = 0
                i = start
                while i < n and pairs[i].v == pairs[start].v:
                    left[pairs[i].y] += 1
                    i += 1
                m = <double>(i - start)
                weighted += (m / n) * _entropy(left, c, m)
                start = i
            gains[ncand] = parent - weighted
            thrs[ncand] = NAN
            cand_feat[ncand] = f
            ncand += 1
        else:
            for k in range(c):
                left[k] = 0
            for i in range(n - 1):
                left[pairs[i].y] += 1
                a = pairs[i].v
                b = pairs[i + 1].v
                if a < b:
                    for k in range(c):
                        right[k] = total[k] - left[k]
                    nl = <double>(i + 1)
                    nr = <double>(n - i - 1)
                    weighted = (nl / n) * _entropy(left, c, nl) + (nr / n) * _entropy(right, c, nr)
                    thr = a + 0.5 * (b - a)
                    if thr >= b:
                        thr = a
                    gains[ncand] = parent - weighted
                    thrs[ncand] = thr
                    cand_feat[ncand] = f
                    ncand += 1

    best_gain = 0.0
    if ncand > 0:
        best_gain = gains[0]
        for g in range(1, ncand):
            if gains[g] > best_gain:
                best_gain = gains[g]
        for g in range(ncand):
            if gains[g] >= best_gain - TIE_TOL:
                best_feature = cand_feat[g]
                best_thr = thrs[g]
                best_gain = gains[g]
                break
    free(pairs); free(total); free(left); free(right)
    free(gains); free(thrs); free(cand_feat)
    if best_feature < 0:
        return -1, NAN, 0.0
    return best_feature, best_thr, best_gain
