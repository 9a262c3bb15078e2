"""Brute-force ground truth for the filter and smoother posteriors.

Instead of recursing over graph layers, this module enumerates every
observation sequence the adversary could have seen, chains the belief
update along each one, and weighs the sequence by the likelihood of the
recorded states and actions. Summing weights per reachable belief gives
the exact posterior, at a cost exponential in the window length, which is
why it exists only to check the recursive implementations.

The enumeration shares nothing with the layer recursions beyond the node
set itself: beliefs are chained independently and located in the queried
layer by nearest-node search, so a disagreement between this module and
the recursive passes indicates a real defect rather than a shared bug.
"""

import numpy as np

from . import _kernels
from .errors import EnumerationTooLarge, GraphMismatch, InconsistentEvidence
from .forward import PosteriorPmf, check_trajectory
from .graph import expand_belief_graph

DEFAULT_SEQUENCE_CAP = 10**7


def total_variation(p, q):
    """Total-variation distance between two pmf vectors of equal length."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise ValueError(f"shape mismatch: {p.shape} vs {q.shape}")
    return 0.5 * float(np.abs(p - q).sum())


def enumerate_posterior(model, x, a, k, mode="filter", graph=None,
                        max_sequences=DEFAULT_SEQUENCE_CAP):
    """Exact posterior over the adversary's step-k belief, by enumeration.

    ``mode`` selects the conditioning window: ``"filter"`` uses data up to
    step k, ``"smoother"`` uses the whole horizon. Enumerating Y^M
    observation sequences (M = k or N) is refused beyond ``max_sequences``
    with :class:`EnumerationTooLarge`.

    Pass ``graph`` to reuse node numbering from an existing expansion; by
    default the graph is rebuilt from the model. A chained belief that
    lands farther than the graph tolerance from every node of layer k
    raises :class:`GraphMismatch`, which always indicates an internal
    defect. Zero total weight across all sequences raises
    :class:`InconsistentEvidence`.
    """
    if mode not in ("filter", "smoother"):
        raise ValueError(f"mode must be 'filter' or 'smoother', got {mode!r}")
    if graph is None:
        graph = expand_belief_graph(model, len(a))
    x, a = check_trajectory(graph, x, a, model.X, model.A)
    n = graph.horizon
    if not 0 <= k <= n:
        raise ValueError(f"query step {k} outside 0..{n}")
    m = k if mode == "filter" else n
    n_sequences = model.Y**m
    if n_sequences > max_sequences:
        raise EnumerationTooLarge(
            f"{model.Y}^{m} = {n_sequences} observation sequences "
            f"exceeds the cap of {max_sequences}"
        )

    policy = model.policy
    mass, status = _kernels.oracle_enumerate(
        np.ascontiguousarray(model.P.T),
        model.B,
        policy.weights,
        policy.thresholds,
        policy.action_pmfs,
        model.pi0,
        x,
        a,
        k,
        m,
        graph.layers[k],
        graph.tol,
    )
    if status:
        raise GraphMismatch(
            f"a chained belief at step {k} has no graph node within {graph.tol}"
        )
    mass = np.asarray(mass)
    total = mass.sum()
    if total <= 0.0:
        raise InconsistentEvidence(
            m, f"every length-{m} observation sequence has zero weight"
        )
    return PosteriorPmf(layer=k, mass=mass / total)
