"""Reachable belief sets as a layered directed graph.

Starting from the adversary's known prior, the set of beliefs it can hold
after k filter updates is finite: one candidate per (belief, observation)
pair from the previous layer, minus duplicates and impossible observations.
The graph stores one layer per time step plus the observation-labelled edges
between consecutive layers, which is all the posterior recursions need.

Candidates are enumerated parent-major (all observations of node 0, then of
node 1, ...) and deduplicated by an insertion-order scan: a candidate within
``tol`` of an earlier node (max-norm) collapses onto the first such node.
Node numbering is therefore deterministic for a given model and tolerance.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .model import policy_pmf_batch


def _freeze(arr):
    out = np.ascontiguousarray(arr)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class LayerEdges:
    """Edges from one layer to the next, as parallel arrays in edge order."""

    parents: np.ndarray
    obs: np.ndarray
    children: np.ndarray

    def __len__(self):
        return len(self.parents)


@dataclass(frozen=True)
class BeliefGraph:
    """Layered graph of the adversary's reachable beliefs.

    ``layers[k]`` is an ``(n_k, X)`` array of belief rows, ``edges[k]``
    connects layer k to layer k+1, and ``action_pmfs[k]`` holds the policy's
    action pmf at each node of layer k.
    """

    layers: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    action_pmfs: list = field(default_factory=list)
    tol: float = 1e-9

    @property
    def horizon(self):
        return len(self.layers) - 1

    @property
    def layer_sizes(self):
        return [layer.shape[0] for layer in self.layers]


def expand_belief_graph(model, n_steps, tol=1e-9):
    """Enumerate the adversary's reachable beliefs out to ``n_steps`` updates.

    Layer k holds at most Y^k nodes; merging keeps the graph small when the
    filter map is many-to-one (identity sensors collapse every layer to at
    most X nodes). ``tol`` is the max-norm merge radius.
    """
    if n_steps < 0:
        raise ValueError("horizon must be nonnegative")
    if tol <= 0.0:
        raise ValueError("merge tolerance must be positive")
    P, B = model.P, model.B
    n_obs = model.Y

    layers = [_freeze(np.asarray(model.pi0, dtype=np.float64).reshape(1, -1))]
    edges = []
    for _ in range(n_steps):
        prev = layers[-1]
        n_prev = prev.shape[0]
        predicted = prev @ P
        numer = predicted[:, None, :] * B.T[None, :, :]
        totals = numer.sum(axis=2)
        valid = (totals > 0.0).ravel()
        cand = numer.reshape(n_prev * n_obs, -1)[valid]
        cand = np.ascontiguousarray(cand / totals.ravel()[valid][:, None])
        parents = np.repeat(np.arange(n_prev, dtype=np.intp), n_obs)[valid]
        obs = np.tile(np.arange(n_obs, dtype=np.intp), n_prev)[valid]

        assign, n_unique = _kernels.dedup_layer(cand, tol)
        assign = np.asarray(assign, dtype=np.intp)
        first = np.empty(n_unique, dtype=np.intp)
        first[assign[::-1]] = np.arange(len(assign) - 1, -1, -1, dtype=np.intp)
        layers.append(_freeze(cand[first]))
        edges.append(
            LayerEdges(parents=_freeze(parents), obs=_freeze(obs), children=_freeze(assign))
        )

    pmfs = [_freeze(policy_pmf_batch(model.policy, layer)) for layer in layers]
    return BeliefGraph(layers=layers, edges=edges, action_pmfs=pmfs, tol=tol)


def inverse_observations(graph, k):
    """Incoming (parent, observation) pairs for every node of layer ``k``.

    Returns a list of length ``n_k`` whose j-th entry lists the 0-based
    ``(parent_index, y)`` pairs with ``T(layer[k-1][parent], y) == layer[k][j]``.
    """
    if not 1 <= k <= graph.horizon:
        raise ValueError(f"layer {k} outside 1..{graph.horizon}")
    e = graph.edges[k - 1]
    incoming = [[] for _ in range(graph.layers[k].shape[0])]
    for parent, y, child in zip(e.parents, e.obs, e.children):
        incoming[int(child)].append((int(parent), int(y)))
    return incoming


def graph_document(graph):
    """JSON-ready dict describing the graph (1-based node and observation ids)."""
    layers = []
    for k, (beliefs, pmfs) in enumerate(zip(graph.layers, graph.action_pmfs)):
        layers.append(
            {
                "k": k,
                "beliefs": [list(map(float, row)) for row in beliefs],
                "action_pmfs": [list(map(float, row)) for row in pmfs],
            }
        )
    edge_rows = []
    for k, e in enumerate(graph.edges):
        for parent, y, child in zip(e.parents, e.obs, e.children):
            edge_rows.append(
                {
                    "from_layer": k,
                    "parent": int(parent) + 1,
                    "y": int(y) + 1,
                    "child": int(child) + 1,
                }
            )
    return {
        "horizon": graph.horizon,
        "tol": graph.tol,
        "layer_sizes": graph.layer_sizes,
        "layers": layers,
        "edges": edge_rows,
    }
