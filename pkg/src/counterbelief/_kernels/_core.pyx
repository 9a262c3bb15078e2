# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels. Mirrors ``_pure`` function for function; see
that module for the contracts. Accumulation order is identical, so the two
backends produce bitwise-equal results."""

from libc.math cimport fabs, INFINITY

import numpy as np


def forward_step(const Py_ssize_t[::1] parents, const Py_ssize_t[::1] obs,
                 const Py_ssize_t[::1] children, const double[::1] b_row,
                 const double[::1] g_col, const double[::1] prev_mass,
                 Py_ssize_t n_out):
    out = np.zeros(n_out)
    cdef double[::1] acc = out
    cdef Py_ssize_t e, i, n_edges = parents.shape[0]
    for e in range(n_edges):
        acc[children[e]] += b_row[obs[e]] * prev_mass[parents[e]]
    for i in range(n_out):
        acc[i] *= g_col[i]
    return out


def backward_step(const Py_ssize_t[::1] parents, const Py_ssize_t[::1] obs,
                  const Py_ssize_t[::1] children, const double[::1] b_row,
                  const double[::1] g_col, const double[::1] next_values,
                  Py_ssize_t n_out):
    out = np.zeros(n_out)
    cdef double[::1] acc = out
    cdef Py_ssize_t e, c, n_edges = parents.shape[0]
    for e in range(n_edges):
        c = children[e]
        acc[parents[e]] += g_col[c] * b_row[obs[e]] * next_values[c]
    return out


def dedup_layer(const double[:, ::1] candidates, double tol):
    cdef Py_ssize_t n = candidates.shape[0]
    cdef Py_ssize_t width = candidates.shape[1]
    assign_arr = np.empty(n, dtype=np.intp)
    kept_arr = np.empty((n, width), dtype=np.float64)
    cdef Py_ssize_t[::1] assign = assign_arr
    cdef double[:, ::1] kept = kept_arr
    cdef Py_ssize_t i, j, q, m = 0
    cdef double d, diff
    cdef bint hit
    for i in range(n):
        assign[i] = m
        for j in range(m):
            d = 0.0
            for q in range(width):
                diff = fabs(kept[j, q] - candidates[i, q])
                if diff > d:
                    d = diff
            if d < tol:
                assign[i] = j
                break
        if assign[i] == m:
            for q in range(width):
                kept[m, q] = candidates[i, q]
            m += 1
    return assign_arr, m


cdef inline void _neumaier_add(double[::1] sums, double[::1] comps,
                               Py_ssize_t idx, double value) nogil:
    cdef double s = sums[idx]
    cdef double t = s + value
    if fabs(s) >= fabs(value):
        comps[idx] += (s - t) + value
    else:
        comps[idx] += (value - t) + s
    sums[idx] = t


cdef inline Py_ssize_t _nearest_node(const double[:, ::1] layer,
                                     const double[:, ::1] beliefs,
                                     Py_ssize_t row, double tol) nogil:
    cdef Py_ssize_t n = layer.shape[0]
    cdef Py_ssize_t width = layer.shape[1]
    cdef Py_ssize_t i, q, best_idx = -1
    cdef double d, diff, best = INFINITY
    for i in range(n):
        d = 0.0
        for q in range(width):
            diff = fabs(layer[i, q] - beliefs[row, q])
            if diff > d:
                d = diff
        if d < best:
            best = d
            best_idx = i
    if best >= tol:
        return -1
    return best_idx


def oracle_enumerate(const double[:, ::1] pt, const double[:, ::1] b,
                     const double[:, ::1] weights, const double[::1] thresholds,
                     const double[:, ::1] pmfs, const double[::1] pi0,
                     const Py_ssize_t[::1] x, const Py_ssize_t[::1] a,
                     Py_ssize_t k, Py_ssize_t m,
                     const double[:, ::1] layer, double tol):
    cdef Py_ssize_t n_nodes = layer.shape[0]
    cdef Py_ssize_t n_states = pt.shape[0]
    cdef Py_ssize_t n_obs = b.shape[1]
    cdef Py_ssize_t n_regions = weights.shape[0]

    sums_arr = np.zeros(n_nodes)
    comps_arr = np.zeros(n_nodes)
    cdef double[::1] sums = sums_arr
    cdef double[::1] comps = comps_arr

    # Depth-first walk state: belief and accumulated weight per depth, plus
    # the next observation to branch on at each depth.
    bel_arr = np.zeros((m + 1, n_states))
    cdef double[:, ::1] bel = bel_arr
    wgt_arr = np.zeros(m + 1)
    cdef double[::1] wgt = wgt_arr
    ynext_arr = np.zeros(m + 1, dtype=np.intp)
    cdef Py_ssize_t[::1] ynext = ynext_arr

    cdef Py_ssize_t i, q, y, region, depth = 0
    cdef Py_ssize_t node_at_k = -1
    cdef bint miss = False
    cdef double w, total, pred, score

    for i in range(n_states):
        bel[0, i] = pi0[i]
    wgt[0] = 1.0
    if k == 0:
        node_at_k = _nearest_node(layer, bel, 0, tol)
        if node_at_k < 0:
            return sums_arr + comps_arr, 1
    ynext[0] = 0

    with nogil:
        while depth >= 0:
            if depth == m:
                _neumaier_add(sums, comps, node_at_k, wgt[depth])
                depth -= 1
                continue
            if ynext[depth] == n_obs:
                depth -= 1
                continue
            y = ynext[depth]
            ynext[depth] += 1
            w = wgt[depth] * b[x[depth + 1], y]
            if w == 0.0:
                continue
            total = 0.0
            for i in range(n_states):
                pred = 0.0
                for q in range(n_states):
                    pred += pt[i, q] * bel[depth, q]
                pred *= b[i, y]
                bel[depth + 1, i] = pred
                total += pred
            if total <= 0.0:
                continue
            for i in range(n_states):
                bel[depth + 1, i] /= total
            region = n_regions - 1
            for i in range(n_regions):
                score = 0.0
                for q in range(n_states):
                    score += weights[i, q] * bel[depth + 1, q]
                if score >= thresholds[i]:
                    region = i
                    break
            w *= pmfs[region, a[depth]]
            if w == 0.0:
                continue
            wgt[depth + 1] = w
            if depth + 1 == k:
                node_at_k = _nearest_node(layer, bel, depth + 1, tol)
                if node_at_k < 0:
                    miss = True
                    break
            ynext[depth + 1] = 0
            depth += 1

    return sums_arr + comps_arr, 1 if miss else 0
