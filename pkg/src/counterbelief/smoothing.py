"""Fixed-interval smoothing over the reachable-belief graph.

The backward variable at layer k scores each belief node by the likelihood
of everything observed after step k: future actions and future states. It
is defined only on the layer's nodes; off-graph beliefs would multiply a
zero forward mass, so they are never stored. Combining backward values with
the forward posterior and renormalizing per layer yields the smoothed
posterior, which conditions every step on the full horizon.

Backward values are products of up to N probabilities and underflow for
long horizons, so each layer is rescaled to unit max-entry by a power of
two and the exponent recorded. The smoothing ratio is scale invariant, so
the exponent never enters the combine step; it is kept for diagnostics and
for reconstructing raw likelihood values.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InconsistentEvidence
from .forward import PosteriorPmf, check_trajectory


@dataclass(frozen=True)
class BackwardValues:
    """Backward likelihood scores for one graph layer.

    The true (unscaled) score of node j is ``values[j] * 2**scale_exp``.
    All entries are nonnegative; an all-zero layer means no future evidence
    path is consistent, which only surfaces as an error when combined with
    the forward posterior.
    """

    layer: int
    values: np.ndarray
    scale_exp: int


def backward_pass(model, graph, x, a):
    """Run the backward recursion from the horizon down to step 0.

    Terminal values are exactly 1 on every node of layer N. Each earlier
    node sums, over its out-edges, the child's action probability for the
    next observed action, the likelihood of the edge's observation at our
    next state, and the child's backward value; the whole layer then picks
    up the constant state-transition factor. Returns the layers in index
    order 0..N.
    """
    x, a = check_trajectory(graph, x, a, model.X, model.A)
    P, B = model.P, model.B
    n = graph.horizon

    terminal = BackwardValues(layer=n, values=np.ones(graph.layers[n].shape[0]), scale_exp=0)
    out = [terminal]
    for k in range(n - 1, -1, -1):
        nxt = out[-1]
        e = graph.edges[k]
        g_col = np.ascontiguousarray(graph.action_pmfs[k + 1][:, a[k]])
        raw = _kernels.backward_step(
            e.parents,
            e.obs,
            e.children,
            B[x[k + 1]],
            g_col,
            nxt.values,
            graph.layers[k].shape[0],
        )
        raw = np.asarray(raw) * P[x[k], x[k + 1]]
        peak = raw.max() if raw.size else 0.0
        if peak > 0.0:
            _, exp = np.frexp(peak)
            exp = int(exp)
            values = np.ldexp(raw, -exp)
            scale_exp = nxt.scale_exp + exp
        else:
            values = raw
            scale_exp = nxt.scale_exp
        out.append(BackwardValues(layer=k, values=values, scale_exp=scale_exp))
    out.reverse()
    return out


def smooth(alpha, beta, graph):
    """Combine forward and backward evidence into smoothed posteriors.

    ``alpha`` and ``beta`` must come from the same graph and trajectory.
    Returns one :class:`PosteriorPmf` per step 0..N. Raises
    :class:`InconsistentEvidence` at the first step whose combined mass is
    identically zero.
    """
    if len(alpha) != len(beta):
        raise ValueError(f"got {len(alpha)} forward layers but {len(beta)} backward layers")
    out = []
    for fwd, bwd in zip(alpha, beta):
        if fwd.layer != bwd.layer:
            raise ValueError(f"layer mismatch: forward {fwd.layer} vs backward {bwd.layer}")
        w = fwd.mass * bwd.values
        total = w.sum()
        if total <= 0.0:
            raise InconsistentEvidence(fwd.layer)
        out.append(PosteriorPmf(layer=fwd.layer, mass=w / total))
    return out


def smoothed_means(gamma, graph):
    """Mean belief per step: an ``(N+1, X)`` array of convex combinations."""
    return np.stack([pmf.mass @ graph.layers[pmf.layer] for pmf in gamma])
