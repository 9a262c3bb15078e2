"""Shared fixtures: reference models and a seeded random-model factory."""

import itertools
from pathlib import Path

import numpy as np
import pytest

import counterbelief as cb

FIXTURES = Path(__file__).parent / "fixtures"


def make_three_state_model():
    """Three-state chain with a noisy sensor and a deterministic threshold policy."""
    policy = cb.threshold_policy([([1.0, 0.0, 0.0], 0.5, 0)], default_action=1, n_actions=2)
    return cb.CaaModel(
        P=np.array([[0.7, 0.2, 0.1], [0.1, 0.4, 0.5], [0.1, 0.1, 0.8]]),
        B=np.array([[0.3, 0.3, 0.4], [0.1, 0.8, 0.1], [0.1, 0.4, 0.5]]),
        policy=policy,
        pi0=np.array([1.0, 0.0, 0.0]),
    )


def make_two_state_model():
    """Small instance with hand-checkable numbers (see smoother tests)."""
    policy = cb.threshold_policy([([1.0, 0.0], 0.5, 0)], default_action=1, n_actions=2)
    return cb.CaaModel(
        P=np.array([[0.8, 0.2], [0.3, 0.7]]),
        B=np.array([[0.9, 0.1], [0.2, 0.8]]),
        policy=policy,
        pi0=np.array([0.6, 0.4]),
    )


def random_stochastic(gen, rows, cols, sparsity=0.0):
    """Random row-stochastic matrix; ``sparsity`` zeroes entries at that rate."""
    mat = gen.uniform(0.05, 1.0, size=(rows, cols))
    if sparsity:
        mat[gen.uniform(size=mat.shape) < sparsity] = 0.0
    dead = mat.sum(axis=1) == 0.0
    if dead.any():
        mat[dead, gen.integers(0, cols, size=int(dead.sum()))] = 1.0
    return mat / mat.sum(axis=1, keepdims=True)


def random_belief(gen, n_states, dirac=False):
    if dirac:
        pi = np.zeros(n_states)
        pi[gen.integers(0, n_states)] = 1.0
        return pi
    return random_stochastic(gen, 1, n_states)[0]


def _random_regions(gen, n_states, n_rules):
    """Rule geometry crossing the simplex: thresholds hit at a random interior point."""
    rules = []
    for _ in range(n_rules):
        w = gen.normal(size=n_states)
        anchor = random_belief(gen, n_states)
        rules.append((w, float(w @ anchor)))
    return rules


def random_model(n_states, n_obs, n_actions, seed, kind="threshold", sparsity=0.0):
    """Deterministically derive a random model from ``seed``.

    ``kind`` picks the policy flavor; ``"mixed"`` rotates through all three
    by seed. Sparsity above 0 plants exact zeros in P and B to exercise
    pruning paths.
    """
    gen = np.random.Generator(np.random.Philox(key=np.array([seed, 9291], dtype=np.uint64)))
    P = random_stochastic(gen, n_states, n_states, sparsity)
    B = random_stochastic(gen, n_states, n_obs, sparsity)
    if kind == "mixed":
        kind = ("threshold", "tabulated", "composed")[seed % 3]
    n_rules = int(gen.integers(1, 3))
    geometry = _random_regions(gen, n_states, n_rules)
    if kind == "threshold":
        rules = [(w, t, int(gen.integers(0, n_actions))) for w, t in geometry]
        policy = cb.threshold_policy(rules, int(gen.integers(0, n_actions)), n_actions)
    elif kind == "tabulated":
        rules = [(w, t, random_stochastic(gen, 1, n_actions)[0]) for w, t in geometry]
        policy = cb.tabulated_policy(rules, random_stochastic(gen, 1, n_actions)[0])
    elif kind == "composed":
        rules = [(w, t, int(gen.integers(0, n_actions))) for w, t in geometry]
        inner = cb.threshold_policy(rules, int(gen.integers(0, n_actions)), n_actions)
        channel = random_stochastic(gen, n_actions, n_actions)
        policy = cb.compose_policy(inner, channel)
    else:
        raise ValueError(f"unknown policy kind {kind!r}")
    pi0 = random_belief(gen, n_states, dirac=bool(gen.integers(0, 2)))
    return cb.CaaModel(P=P, B=B, policy=policy, pi0=pi0)


def battery(count, kind="threshold", sparsity=0.0):
    """Yield ``count`` (model, horizon) pairs cycling through small dimensions."""
    dims = itertools.cycle(itertools.product((2, 3), (2, 3), (2, 3)))
    for seed in range(count):
        n_states, n_obs, n_actions = next(dims)
        yield random_model(n_states, n_obs, n_actions, seed, kind, sparsity), 3 + seed % 3


@pytest.fixture
def three_state_model():
    return make_three_state_model()


@pytest.fixture
def two_state_model():
    return make_two_state_model()


@pytest.fixture
def three_state_model_path():
    return str(FIXTURES / "three_state_model.json")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
