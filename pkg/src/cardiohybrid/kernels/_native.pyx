# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops. Results must match ``_fallback`` bit for bit."""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, sqrt

cnp.import_array()

ctypedef cnp.intp_t intp


def knn_indices(const double[:, ::1] train, const double[:, ::1] queries, Py_ssize_t k):
    cdef Py_ssize_t n = train.shape[0], m = queries.shape[0], d = train.shape[1]
    cdef Py_ssize_t q, j, f, pos, s
    cdef double dist, diff
    if k < 1 or k > n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    if queries.shape[1] != d:
        raise ValueError("query / train feature-count mismatch")
    out = np.empty((m, k), dtype=np.intp)
    cdef intp[:, ::1] res = out
    cdef double[::1] best = np.empty(k, dtype=np.float64)
    cdef intp[::1] best_idx = np.empty(k, dtype=np.intp)
    cdef Py_ssize_t filled
    with nogil:
        for q in range(m):
            filled = 0
            for j in range(n):
                dist = 0.0
                for f in range(d):
                    diff = queries[q, f] - train[j, f]
                    dist = dist + diff * diff
                if filled == k and dist >= best[k - 1]:
                    continue
                # insertion keeps earlier indices ahead of equal distances
                pos = filled if filled < k else k - 1
                while pos > 0 and best[pos - 1] > dist:
                    if pos < k:
                        best[pos] = best[pos - 1]
                        best_idx[pos] = best_idx[pos - 1]
                    pos -= 1
                best[pos] = dist
                best_idx[pos] = j
                if filled < k:
                    filled += 1
            for s in range(k):
                res[q, s] = best_idx[s]
    return out


def presort(const double[:, ::1] X):
    return np.ascontiguousarray(np.argsort(np.asarray(X), axis=0, kind="stable").T)


def best_split(const double[:, ::1] X, const intp[:, ::1] order, const intp[::1] rows,
               const double[::1] g, const double[::1] h,
               double lam, double gamma, double min_child_weight):
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1], m = rows.shape[0]
    cdef Py_ssize_t f, i, r, prev
    cdef double G, H, GL, HL, GR, HR, gain, thr, v_prev, v
    cdef double best_gain = 0.0, best_thr = 0.0
    cdef Py_ssize_t best_f = -1
    cdef cnp.uint8_t[::1] mask = np.zeros(n, dtype=np.uint8)
    for i in range(m):
        mask[rows[i]] = 1
    with nogil:
        for f in range(d):
            G = 0.0
            H = 0.0
            for i in range(n):
                r = order[f, i]
                if mask[r]:
                    G = G + g[r]
                    H = H + h[r]
            GL = 0.0
            HL = 0.0
            prev = -1
            for i in range(n):
                r = order[f, i]
                if not mask[r]:
                    continue
                if prev >= 0:
                    v_prev = X[prev, f]
                    v = X[r, f]
                    if v_prev < v:
                        GR = G - GL
                        HR = H - HL
                        if HL >= min_child_weight and HR >= min_child_weight:
                            gain = 0.5 * (GL * GL / (HL + lam) + GR * GR / (HR + lam) - G * G / (H + lam)) - gamma
                            if gain > best_gain:
                                thr = (v_prev + v) * 0.5
                                if thr <= v_prev:
                                    thr = v
                                best_gain = gain
                                best_f = f
                                best_thr = thr
                GL = GL + g[r]
                HL = HL + h[r]
                prev = r
    return best_gain, best_f, best_thr


def tree_predict(const intp[::1] feature, const double[::1] threshold, const intp[::1] left,
                 const intp[::1] right, const double[::1] value, const double[:, ::1] X):
    cdef Py_ssize_t n = X.shape[0], i, node
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] res = out
    with nogil:
        for i in range(n):
            node = 0
            while feature[node] >= 0:
                if X[i, feature[node]] < threshold[node]:
                    node = left[node]
                else:
                    node = right[node]
            res[i] = value[node]
    return out


def adam_update(double[::1] p, const double[::1] g, double[::1] m, double[::1] v, double lr, double beta1,
                double beta2, double eps, double corr1, double corr2):
    cdef Py_ssize_t i, n = p.shape[0]
    cdef double a = 1.0 - beta1, b = 1.0 - beta2, gi
    with nogil:
        for i in range(n):
            gi = g[i]
            m[i] = m[i] * beta1 + a * gi
            v[i] = v[i] * beta2 + b * gi * gi
            p[i] = p[i] - lr * (m[i] / corr1) / (sqrt(v[i] / corr2) + eps)
