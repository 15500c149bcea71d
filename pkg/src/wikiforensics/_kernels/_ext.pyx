# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the scan-heavy inner loops.

Signature-compatible with ``_pure``; see that module for the contracts.
"""

from libc.math cimport sqrt, INFINITY

import numpy as np


def mtld_factor_count(ids, double threshold):
    cdef int[::1] seq = np.ascontiguousarray(ids, dtype=np.int32)
    cdef Py_ssize_t n = seq.shape[0]
    if n == 0:
        return 0.0
    cdef int max_id = 0
    cdef Py_ssize_t i
    for i in range(n):
        if seq[i] > max_id:
            max_id = seq[i]
    # stamp array gives O(1) window resets without reallocating a set
    cdef long[::1] stamp = np.zeros(max_id + 1, dtype=np.int64)
    cdef long generation = 1
    cdef double factors = 0.0
    cdef double ttr = 1.0
    cdef long window_tokens = 0, window_types = 0
    cdef int tok
    for i in range(n):
        tok = seq[i]
        window_tokens += 1
        if stamp[tok] != generation:
            stamp[tok] = generation
            window_types += 1
        ttr = (<double> window_types) / (<double> window_tokens)
        if ttr < threshold:
            factors += 1.0
            window_tokens = 0
            window_types = 0
            generation += 1
            ttr = 1.0
    if window_tokens > 0:
        factors += (1.0 - ttr) / (1.0 - threshold)
    return factors


def count_ngram_keys(ids, starts, int n):
    cdef bytes raw = np.ascontiguousarray(ids, dtype=np.int32).tobytes()
    cdef long[::1] bounds = np.ascontiguousarray(starts, dtype=np.int64)
    cdef dict counts = {}
    cdef Py_ssize_t j, i, lo, hi, base
    cdef Py_ssize_t width = 4 * n
    cdef bytes key
    for j in range(bounds.shape[0] - 1):
        lo = bounds[j]
        hi = bounds[j + 1]
        base = lo * 4
        for i in range(hi - lo - n + 1):
            key = raw[base + i * 4: base + i * 4 + width]
            if key in counts:
                counts[key] += 1
            else:
                counts[key] = 1
    return counts


def best_split_gini(values, labels, int min_leaf):
    cdef double[::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef signed char[::1] y = np.ascontiguousarray(labels, dtype=np.int8)
    cdef Py_ssize_t n = v.shape[0]
    cdef long total1 = 0
    cdef Py_ssize_t i
    for i in range(n):
        total1 += y[i]
    cdef Py_ssize_t best_i = -1
    cdef double best = INFINITY
    cdef long left1 = 0
    cdef long nl, nr
    cdef double p1l, p1r, gl, gr, w
    for i in range(n - 1):
        left1 += y[i]
        nl = i + 1
        nr = n - nl
        if nl < min_leaf or nr < min_leaf:
            continue
        if v[i] == v[i + 1]:
            continue
        p1l = (<double> left1) / (<double> nl)
        p1r = (<double> (total1 - left1)) / (<double> nr)
        gl = 1.0 - p1l * p1l - (1.0 - p1l) * (1.0 - p1l)
        gr = 1.0 - p1r * p1r - (1.0 - p1r) * (1.0 - p1r)
        w = (nl * gl + nr * gr) / (<double> n)
        if w < best:
            best = w
            best_i = i
    return best_i, best


def best_split_gain(values, grad, hess, double lam, int min_leaf):
    cdef double[::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef double[::1] g = np.ascontiguousarray(grad, dtype=np.float64)
    cdef double[::1] h = np.ascontiguousarray(hess, dtype=np.float64)
    cdef Py_ssize_t n = v.shape[0]
    cdef double g_total = 0.0, h_total = 0.0
    cdef Py_ssize_t i
    for i in range(n):
        g_total += g[i]
        h_total += h[i]
    cdef double parent = g_total * g_total / (h_total + lam)
    cdef Py_ssize_t best_i = -1
    cdef double best = 0.0
    cdef double gl = 0.0, hl = 0.0, gr, hr, gain
    for i in range(n - 1):
        gl += g[i]
        hl += h[i]
        if i + 1 < min_leaf or n - i - 1 < min_leaf:
            continue
        if v[i] == v[i + 1]:
            continue
        gr = g_total - gl
        hr = h_total - hl
        gain = gl * gl / (hl + lam) + gr * gr / (hr + lam) - parent
        if gain > best:
            best = gain
            best_i = i
    return best_i, best


def cluster_distance_sums(points, labels, int k):
    cdef double[:, ::1] x = np.ascontiguousarray(points, dtype=np.float64)
    cdef int[::1] lab = np.ascontiguousarray(labels, dtype=np.int32)
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t d = x.shape[1]
    out_arr = np.zeros((n, k), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, m
    cdef double acc, diff, dist
    cdef int cj
    for i in range(n):
        for j in range(i + 1, n):
            acc = 0.0
            for m in range(d):
                diff = x[i, m] - x[j, m]
                acc += diff * diff
            dist = sqrt(acc)
            cj = lab[j]
            if cj >= 0:
                out[i, cj] += dist
            cj = lab[i]
            if cj >= 0:
                out[j, cj] += dist
    return out_arr
