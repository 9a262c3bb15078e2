"""Monte Carlo error curves and plot-ready posterior exports.

Reproduces the two headline computations: the average accuracy gap between
the filtered and smoothed mean-belief estimates over many seeded episodes,
and the per-node posterior masses at a single step projected onto the
probability simplex for three-state models.
"""

import csv
from dataclasses import dataclass
from math import sqrt

import numpy as np

from .forward import forward_pass, posterior_mean
from .graph import expand_belief_graph
from .simulate import RngStream, simulate_episode
from .smoothing import backward_pass, smooth, smoothed_means


@dataclass(frozen=True)
class ErrorCurve:
    """Mean Euclidean estimation errors per step, filter vs smoother.

    ``filter_err[k-1]`` and ``smoother_err[k-1]`` are the mean L2 distances
    between each estimator's mean belief at step k and the adversary's true
    belief, averaged over ``runs`` episodes. Step 0 is excluded: both
    estimators start at the known prior with zero error.
    """

    horizon: int
    filter_err: np.ndarray
    smoother_err: np.ndarray
    runs: int
    seed: int


def monte_carlo_errors(model, n_steps, runs, seed):
    """Average estimation errors over ``runs`` seeded episodes.

    Episode r uses the random stream ``(seed, r)``, so curves are exactly
    reproducible and runs could be distributed without changing the result.
    The belief graph is expanded once and shared across episodes.
    """
    if n_steps < 1:
        raise ValueError("horizon must be at least 1")
    if runs < 1:
        raise ValueError("run count must be at least 1")
    graph = expand_belief_graph(model, n_steps)
    filter_sum = np.zeros(n_steps)
    smoother_sum = np.zeros(n_steps)
    for r in range(runs):
        traj = simulate_episode(model, n_steps, RngStream(seed, r))
        alpha = forward_pass(model, graph, traj.x, traj.a)
        beta = backward_pass(model, graph, traj.x, traj.a)
        gamma = smooth(alpha, beta, graph)
        smoothed = smoothed_means(gamma, graph)
        for k in range(1, n_steps + 1):
            truth = traj.pi[k]
            filter_sum[k - 1] += np.linalg.norm(posterior_mean(alpha[k], graph) - truth)
            smoother_sum[k - 1] += np.linalg.norm(smoothed[k] - truth)
    return ErrorCurve(
        horizon=n_steps,
        filter_err=filter_sum / runs,
        smoother_err=smoother_sum / runs,
        runs=runs,
        seed=seed,
    )


def write_error_curve_csv(curve, fh):
    """Write an error curve as CSV rows ``k,filter_err,smoother_err``."""
    writer = csv.writer(fh)
    writer.writerow(["k", "filter_err", "smoother_err"])
    for k in range(1, curve.horizon + 1):
        writer.writerow(
            [k, repr(float(curve.filter_err[k - 1])), repr(float(curve.smoother_err[k - 1]))]
        )


def barycentric_uv(belief):
    """Map a 3-state belief to 2-D coordinates on the unit-side triangle.

    Vertices: (1,0,0) at the origin, (0,1,0) at (1,0), (0,0,1) at the apex
    (0.5, sqrt(3)/2). Affine in the belief, so the centroid maps to the
    triangle centroid.
    """
    belief = np.asarray(belief, dtype=np.float64)
    if belief.shape != (3,):
        raise ValueError("barycentric projection requires exactly 3 states")
    u = belief[1] + 0.5 * belief[2]
    v = (sqrt(3.0) / 2.0) * belief[2]
    return float(u), float(v)


@dataclass(frozen=True)
class SimplexRow:
    """One exported point: a belief node or a derived marker.

    ``flags`` is empty for plain nodes, ``"true-belief"`` for nodes within
    graph tolerance of the adversary's recorded belief, and ``"cme-filter"``
    / ``"cme-smooth"`` for the appended mean-estimate markers (which carry
    zero mass). ``uv`` is None when the model does not have 3 states.
    """

    belief: tuple
    uv: tuple | None
    filter_mass: float
    smooth_mass: float
    flags: str


@dataclass(frozen=True)
class SimplexPmfExport:
    layer: int
    horizon: int
    rows: list


def export_simplex_pmf(model, trajectory, k, n_steps):
    """Posterior masses at step ``k`` with horizon ``n_steps``, plot-ready.

    Runs the filter and smoother on the first ``n_steps`` steps of the
    trajectory and emits one row per belief node of layer k plus marker rows
    for the two mean estimates. Requires ``k <= n_steps <= trajectory
    horizon``. Nodes matching the recorded true belief are flagged when the
    trajectory carries one.
    """
    if not 0 <= k <= n_steps:
        raise ValueError(f"query step {k} outside 0..{n_steps}")
    if trajectory.horizon < n_steps:
        raise ValueError(
            f"trajectory has {trajectory.horizon} steps, need {n_steps}"
        )
    x = trajectory.x[: n_steps + 1]
    a = trajectory.a[:n_steps]
    graph = expand_belief_graph(model, n_steps)
    alpha = forward_pass(model, graph, x, a)
    beta = backward_pass(model, graph, x, a)
    gamma = smooth(alpha, beta, graph)

    project = model.X == 3
    truth = trajectory.pi[k] if trajectory.pi is not None else None
    rows = []
    layer = graph.layers[k]
    for j in range(layer.shape[0]):
        belief = layer[j]
        hit = truth is not None and np.abs(belief - truth).max() < graph.tol
        rows.append(
            SimplexRow(
                belief=tuple(map(float, belief)),
                uv=barycentric_uv(belief) if project else None,
                filter_mass=float(alpha[k].mass[j]),
                smooth_mass=float(gamma[k].mass[j]),
                flags="true-belief" if hit else "",
            )
        )
    for mean, tag in (
        (posterior_mean(alpha[k], graph), "cme-filter"),
        (posterior_mean(gamma[k], graph), "cme-smooth"),
    ):
        rows.append(
            SimplexRow(
                belief=tuple(map(float, mean)),
                uv=barycentric_uv(mean) if project else None,
                filter_mass=0.0,
                smooth_mass=0.0,
                flags=tag,
            )
        )
    return SimplexPmfExport(layer=k, horizon=n_steps, rows=rows)


def write_simplex_csv(export, fh):
    """Write an export as CSV with columns p1..pX,u,v,filter_mass,smooth_mass,flags."""
    n_states = len(export.rows[0].belief) if export.rows else 0
    writer = csv.writer(fh)
    header = [f"p{i + 1}" for i in range(n_states)]
    writer.writerow(header + ["u", "v", "filter_mass", "smooth_mass", "flags"])
    for row in export.rows:
        u, v = (repr(row.uv[0]), repr(row.uv[1])) if row.uv is not None else ("", "")
        writer.writerow(
            [repr(p) for p in row.belief]
            + [u, v, repr(row.filter_mass), repr(row.smooth_mass), row.flags]
        )
