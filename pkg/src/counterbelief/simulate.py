"""Game simulation: our chain, the adversary's sensor, filter and actions.

Randomness contract
-------------------
All sampling is driven by Philox4x64 counter-based generators keyed on a
``(seed, stream)`` pair, so a :class:`RngStream` fully determines every draw,
independently of platform or call history. Categorical draws use a single
uniform and invert the cumulative row; a draw landing exactly on a cumulative
boundary selects the lower index.

Within :func:`simulate_episode` the draw order per step k is: state ``x_k``,
observation ``y_k``, then action ``a_k`` (after the deterministic belief
update), with ``x_0`` drawn first. Changing this order would change seeded
episodes, so it is part of the reproducibility contract.
"""

import json
from dataclasses import dataclass

import numpy as np

from .errors import ImpossibleObservation, ModelFormatError
from .model import model_hash, policy_pmf


@dataclass(frozen=True)
class RngStream:
    """Identifies one reproducible random stream as a (seed, stream) pair."""

    seed: int
    stream: int = 0

    def generator(self):
        key = np.array([self.seed, self.stream], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


def _generator(rng):
    return rng.generator() if isinstance(rng, RngStream) else rng


def _draw_categorical(gen, pmf):
    cum = np.cumsum(pmf)
    idx = int(np.searchsorted(cum, gen.random(), side="left"))
    return min(idx, len(cum) - 1)


def hmm_filter_update(P, B, pi, y):
    """One Bayesian filter step: posterior after observing ``y`` (0-based).

    Computes ``B[:, y] * (P^T pi)`` and renormalizes. Raises
    :class:`ImpossibleObservation` when the normalizer is zero, i.e. the
    observation cannot occur under the predicted belief.
    """
    P = np.asarray(P, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    pi = np.asarray(pi, dtype=np.float64)
    if not 0 <= y < B.shape[1]:
        raise ValueError(f"observation {y + 1} outside 1..{B.shape[1]}")
    numer = B[:, y] * (P.T @ pi)
    total = numer.sum()
    if total <= 0.0:
        raise ImpossibleObservation(
            f"observation {y + 1} has zero likelihood under the predicted belief"
        )
    return numer / total


def sample_chain(P, pi0, n_steps, rng):
    """Sample ``x_0`` from ``pi0`` and ``n_steps`` transitions from ``P``.

    Returns an intp array of length ``n_steps + 1``.
    """
    gen = _generator(rng)
    P = np.asarray(P, dtype=np.float64)
    states = np.empty(n_steps + 1, dtype=np.intp)
    states[0] = _draw_categorical(gen, np.asarray(pi0, dtype=np.float64))
    for k in range(1, n_steps + 1):
        states[k] = _draw_categorical(gen, P[states[k - 1]])
    return states


def sample_observation(B, x, rng):
    """Draw one observation from row ``x`` of the sensor matrix."""
    gen = _generator(rng)
    return _draw_categorical(gen, np.asarray(B, dtype=np.float64)[x])


def sample_action(policy, pi, rng):
    """Draw one action from the policy's pmf at belief ``pi``."""
    gen = _generator(rng)
    return _draw_categorical(gen, policy_pmf(policy, pi))


@dataclass(frozen=True)
class Trajectory:
    """One realized episode.

    ``x`` and ``a`` are what the estimator sees. ``y`` and ``pi`` are the
    adversary's private observations and beliefs; simulation records them so
    experiments can score estimates against the truth, and they may be absent
    on loaded trajectories.
    """

    x: np.ndarray
    a: np.ndarray
    y: np.ndarray | None = None
    pi: np.ndarray | None = None
    model_digest: str | None = None

    @property
    def horizon(self):
        return len(self.a)


def simulate_episode(model, n_steps, rng):
    """Play the game for ``n_steps`` steps and record the full trajectory.

    The adversary's beliefs are chained through the filter from ``pi0``, so
    the recorded beliefs replay exactly under :func:`hmm_filter_update`.
    """
    if n_steps < 1:
        raise ValueError("horizon must be at least 1")
    gen = _generator(rng)
    x = np.empty(n_steps + 1, dtype=np.intp)
    y = np.empty(n_steps, dtype=np.intp)
    a = np.empty(n_steps, dtype=np.intp)
    beliefs = np.empty((n_steps + 1, model.X))

    x[0] = _draw_categorical(gen, model.pi0)
    beliefs[0] = model.pi0
    for k in range(1, n_steps + 1):
        x[k] = _draw_categorical(gen, model.P[x[k - 1]])
        y[k - 1] = _draw_categorical(gen, model.B[x[k]])
        beliefs[k] = hmm_filter_update(model.P, model.B, beliefs[k - 1], y[k - 1])
        a[k - 1] = _draw_categorical(gen, policy_pmf(model.policy, beliefs[k]))
    return Trajectory(x=x, a=a, y=y, pi=beliefs, model_digest=model_hash(model))


def save_trajectory(traj, path):
    """Write a trajectory JSON file (states, observations and actions 1-indexed)."""
    doc = {
        "N": traj.horizon,
        "x": [int(v) + 1 for v in traj.x],
        "a": [int(v) + 1 for v in traj.a],
    }
    if traj.y is not None:
        doc["y"] = [int(v) + 1 for v in traj.y]
    if traj.pi is not None:
        doc["pi"] = [list(map(float, row)) for row in traj.pi]
    if traj.model_digest is not None:
        doc["model_hash"] = traj.model_digest
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)


def load_trajectory(path):
    """Read a trajectory JSON file written by :func:`save_trajectory`."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"invalid trajectory JSON: {exc}") from None
    for field in ("N", "x", "a"):
        if field not in doc:
            raise ModelFormatError(f"missing field {field!r} in trajectory")
    n = doc["N"]
    x = np.asarray(doc["x"], dtype=np.intp) - 1
    a = np.asarray(doc["a"], dtype=np.intp) - 1
    if len(x) != n + 1 or len(a) != n:
        raise ModelFormatError(
            f"trajectory lengths inconsistent with N={n}: |x|={len(x)}, |a|={len(a)}"
        )
    y = np.asarray(doc["y"], dtype=np.intp) - 1 if "y" in doc else None
    pi = np.asarray(doc["pi"], dtype=np.float64) if "pi" in doc else None
    return Trajectory(x=x, a=a, y=y, pi=pi, model_digest=doc.get("model_hash"))
