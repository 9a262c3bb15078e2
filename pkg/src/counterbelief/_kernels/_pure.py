"""Pure numpy implementations of the numeric kernels.

Semantics and accumulation order match the compiled backend exactly: edge
sums run in edge order, dedup scans run in insertion order and the
enumeration walks observation branches depth-first in ascending observation
order with Neumaier-compensated accumulation.
"""

import numpy as np


def forward_step(parents, obs, children, b_row, g_col, prev_mass, n_out):
    """Unnormalized filter mass over one layer.

    ``out[c] = g_col[c] * sum over edges (p, y, c) of b_row[y] * prev_mass[p]``.
    """
    w = b_row[obs] * prev_mass[parents]
    acc = np.bincount(children, weights=w, minlength=n_out)
    return g_col * acc


def backward_step(parents, obs, children, b_row, g_col, next_values, n_out):
    """Edge-summed backward values for one layer (transition factor excluded).

    ``out[p] = sum over edges (p, y, c) of g_col[c] * b_row[y] * next_values[c]``.
    """
    w = g_col[children] * b_row[obs] * next_values[children]
    return np.bincount(parents, weights=w, minlength=n_out)


def dedup_layer(candidates, tol):
    """Assign candidate beliefs to merged node ids, first-match-wins.

    Candidates are scanned in order; each is matched against already-inserted
    nodes (insertion order, max-norm distance strictly below ``tol``) and
    merged into the first hit, otherwise inserted as a new node. Returns
    ``(assign, n_unique)``.
    """
    n = candidates.shape[0]
    assign = np.empty(n, dtype=np.intp)
    kept = np.empty_like(candidates)
    m = 0
    for i in range(n):
        c = candidates[i]
        if m:
            hits = np.nonzero(np.abs(kept[:m] - c).max(axis=1) < tol)[0]
        else:
            hits = ()
        if len(hits):
            assign[i] = hits[0]
        else:
            kept[m] = c
            assign[i] = m
            m += 1
    return assign, m


def _neumaier_add(sums, comps, idx, value):
    s = sums[idx]
    t = s + value
    if abs(s) >= abs(value):
        comps[idx] += (s - t) + value
    else:
        comps[idx] += (value - t) + s
    sums[idx] = t


class _LookupMiss(Exception):
    pass


def _nearest_node(layer, belief, tol):
    dist = np.abs(layer - belief).max(axis=1)
    idx = int(np.argmin(dist))
    if dist[idx] >= tol:
        raise _LookupMiss
    return idx


def oracle_enumerate(pt, b, weights, thresholds, pmfs, pi0, x, a, k, m, layer, tol):
    """Exhaustive posterior mass over the nodes of layer ``k``.

    Walks every observation sequence of length ``m`` depth-first, chaining
    the belief update and multiplying observation likelihoods ``b[x_j, y_j]``
    with policy probabilities of the recorded actions. Mass accumulates on
    the layer node nearest (max-norm, within ``tol``) to the chained belief
    at depth ``k``. Returns ``(mass, status)`` with status 1 when some
    chained belief has no node within tolerance.
    """
    n_nodes = layer.shape[0]
    n_obs = b.shape[1]
    sums = np.zeros(n_nodes)
    comps = np.zeros(n_nodes)

    def walk(depth, belief, weight, node_at_k):
        if depth == k:
            node_at_k = _nearest_node(layer, belief, tol)
        if depth == m:
            _neumaier_add(sums, comps, node_at_k, weight)
            return
        for y in range(n_obs):
            w = weight * b[x[depth + 1], y]
            if w == 0.0:
                continue
            numer = b[:, y] * (pt * belief).sum(axis=1)
            total = numer.sum()
            if total <= 0.0:
                continue
            nxt = numer / total
            scores = (weights * nxt).sum(axis=1)
            region = int(np.argmax(scores >= thresholds))
            w *= pmfs[region, a[depth]]
            if w == 0.0:
                continue
            walk(depth + 1, nxt, w, node_at_k)

    try:
        walk(0, np.asarray(pi0, dtype=np.float64), 1.0, -1)
    except _LookupMiss:
        return sums + comps, 1
    return sums + comps, 0
