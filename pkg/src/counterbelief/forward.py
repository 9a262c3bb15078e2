"""Posterior over the adversary's current belief, step by step.

Given our realized states ``x_0..x_N`` and the adversary's observed actions
``a_1..a_N``, the posterior over which belief the adversary holds at step k
is a pmf over the nodes of layer k of the reachable-belief graph. It starts
as a point mass on the prior node and is pushed forward one layer at a time:
each node collects mass from its in-edges weighted by the likelihood of the
edge's observation given our state, then the whole layer is reweighted by
the probability each node's belief assigns to the observed action.

The transition matrix never appears here: conditioning on the full state
path makes its contribution a constant that cancels in the per-step
normalization.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InconsistentAction

_UNDERFLOW_FLOOR = 1e-300
_RESCUE_EXPONENT = 600


@dataclass(frozen=True)
class PosteriorPmf:
    """A pmf over the belief nodes of one graph layer.

    ``mass[j]`` is the posterior probability that the adversary's belief at
    step ``layer`` is the j-th node of that layer.
    """

    layer: int
    mass: np.ndarray

    @property
    def support(self):
        """Indices of nodes carrying strictly positive mass."""
        return np.flatnonzero(self.mass > 0.0)


def check_trajectory(graph, x, a, n_states, n_actions):
    """Validate trajectory arrays against the graph horizon and ranges.

    Returns ``(x, a)`` as intp arrays. Raises ValueError on any mismatch.
    """
    x = np.asarray(x, dtype=np.intp)
    a = np.asarray(a, dtype=np.intp)
    n = graph.horizon
    if len(x) != n + 1:
        raise ValueError(f"expected {n + 1} states for horizon {n}, got {len(x)}")
    if len(a) != n:
        raise ValueError(f"expected {n} actions for horizon {n}, got {len(a)}")
    if len(x) and (x.min() < 0 or x.max() >= n_states):
        raise ValueError(f"state indices must lie in 1..{n_states}")
    if len(a) and (a.min() < 0 or a.max() >= n_actions):
        raise ValueError(f"action indices must lie in 1..{n_actions}")
    return x, a


def forward_pass(model, graph, x, a):
    """Run the inverse filter along a trajectory.

    ``x`` has length N+1 (0-based states, ``x[k]`` is our state at step k)
    and ``a`` has length N (0-based actions, ``a[k-1]`` is the adversary's
    action at step k). Returns one :class:`PosteriorPmf` per step 0..N.

    Raises :class:`InconsistentAction` at the first step whose unnormalized
    mass is identically zero, which means the observed action is impossible
    under the model.
    """
    x, a = check_trajectory(graph, x, a, model.X, model.A)
    B = model.B

    mass0 = np.zeros(graph.layers[0].shape[0])
    mass0[0] = 1.0
    out = [PosteriorPmf(layer=0, mass=mass0)]
    for k in range(1, graph.horizon + 1):
        e = graph.edges[k - 1]
        g_col = np.ascontiguousarray(graph.action_pmfs[k][:, a[k - 1]])
        raw = _kernels.forward_step(
            e.parents,
            e.obs,
            e.children,
            B[x[k]],
            g_col,
            out[-1].mass,
            graph.layers[k].shape[0],
        )
        raw = np.asarray(raw)
        total = raw.sum()
        if total <= 0.0:
            raise InconsistentAction(
                k, f"action {int(a[k - 1]) + 1} at step {k} has zero posterior mass"
            )
        if total < _UNDERFLOW_FLOOR:
            raw = np.ldexp(raw, _RESCUE_EXPONENT)
            total = raw.sum()
        out.append(PosteriorPmf(layer=k, mass=raw / total))
    return out


def posterior_mean(pmf, graph):
    """Mean belief under the pmf: the convex combination of the layer's nodes."""
    return pmf.mass @ graph.layers[pmf.layer]


def posterior_document(graph, pmfs, mode):
    """JSON-ready description of a posterior sequence (1-based node ids).

    ``mode`` is ``"filter"`` or ``"smoothed"``; each step lists node ids,
    beliefs, masses and the mean-belief estimate.
    """
    steps = []
    for pmf in pmfs:
        beliefs = graph.layers[pmf.layer]
        steps.append(
            {
                "k": pmf.layer,
                "nodes": [
                    {
                        "id": j + 1,
                        "belief": list(map(float, beliefs[j])),
                        "mass": float(pmf.mass[j]),
                    }
                    for j in range(beliefs.shape[0])
                ],
                "cme": list(map(float, posterior_mean(pmf, graph))),
            }
        )
    return {"mode": mode, "N": graph.horizon, "steps": steps}
