"""Domain model: beliefs, stochastic kernels, action policies and model files.

A model couples our Markov chain (transition matrix ``P``), the adversary's
sensor (observation matrix ``B``), its action policy and the initial belief
``pi0``. States, observations and actions are 0-indexed throughout the Python
API; file formats and CLI messages use 1-indexing.

Every policy variant is stored in one canonical region form: an ordered list
of linear-threshold regions, each carrying an action pmf. A belief belongs to
the first region ``r`` whose test ``w_r . pi >= t_r`` passes; the final region
is a catch-all (``w = 0``, ``t = -inf``), so evaluation is total.
"""

import hashlib
import json
import os
from dataclasses import dataclass

import numpy as np

from .errors import ModelFormatError, ModelValidationError

# Absolute tolerance on row sums of stochastic inputs. Rows within tolerance
# are renormalized on load; rows outside it are validation failures.
STOCHASTIC_ATOL = 1e-12


def _freeze(arr):
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    arr.flags.writeable = False
    return arr


def validate_belief(pi, atol=STOCHASTIC_ATOL):
    """Return a list of violation messages; empty when ``pi`` is a valid belief."""
    pi = np.asarray(pi, dtype=np.float64)
    problems = []
    if pi.ndim != 1:
        return [f"belief must be a vector, got shape {pi.shape}"]
    if np.any(pi < 0):
        i = int(np.argmin(pi))
        problems.append(f"belief entry {i + 1} is negative ({pi[i]:.12g})")
    s = float(pi.sum())
    if abs(s - 1.0) > atol:
        problems.append(f"belief sums to {s:.12g}")
    return problems


def _check_stochastic(mat, name, n_cols=None):
    """Violation messages for a row-stochastic matrix, 1-indexed locations."""
    problems = []
    mat = np.asarray(mat, dtype=np.float64)
    if mat.ndim != 2:
        return [f"{name} must be a matrix, got shape {mat.shape}"]
    if n_cols is not None and mat.shape[1] != n_cols:
        problems.append(f"{name} has {mat.shape[1]} columns, expected {n_cols}")
    for i, row in enumerate(mat):
        neg = np.where(row < 0)[0]
        if neg.size:
            j = int(neg[0])
            problems.append(f"{name}[{i + 1},{j + 1}] is negative ({row[j]:.12g})")
        big = np.where(row > 1.0 + STOCHASTIC_ATOL)[0]
        if big.size:
            j = int(big[0])
            problems.append(f"{name}[{i + 1},{j + 1}] exceeds 1 ({row[j]:.12g})")
        s = float(row.sum())
        if abs(s - 1.0) > STOCHASTIC_ATOL:
            problems.append(f"row {i + 1} of {name} sums to {s:.12g}")
    return problems


def _renormalize_rows(mat):
    mat = np.array(mat, dtype=np.float64)
    mat /= mat.sum(axis=1, keepdims=True)
    return mat


@dataclass(frozen=True)
class Policy:
    """Region-based action policy in canonical form.

    ``weights`` is (R, X), ``thresholds`` is (R,), ``action_pmfs`` is (R, A).
    Region order is significant: the first region whose threshold test passes
    supplies the action pmf (first-match-wins; the trailing catch-all always
    passes). ``kind`` records the construction variant ("threshold",
    "tabulated" or "composed").
    """

    kind: str
    weights: np.ndarray
    thresholds: np.ndarray
    action_pmfs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "weights", _freeze(self.weights))
        object.__setattr__(self, "thresholds", _freeze(self.thresholds))
        object.__setattr__(self, "action_pmfs", _freeze(self.action_pmfs))

    @property
    def n_actions(self):
        return self.action_pmfs.shape[1]

    @property
    def n_states(self):
        return self.weights.shape[1]

    @property
    def deterministic(self):
        """True when every region puts mass 1 on exactly one action."""
        return bool(np.all(np.isin(self.action_pmfs, (0.0, 1.0))))


def threshold_policy(rules, default_action, n_actions, n_states=None):
    """Deterministic policy from ordered ``(w, t, action)`` rules.

    The first rule with ``w . pi >= t`` fires and emits its action with
    probability one. ``default_action`` is the mandatory catch-all taken when
    no rule fires. Actions are 0-based. ``n_states`` is inferred from the
    first rule and only needs to be given for a rule-free policy.
    """
    rules = list(rules)
    if n_states is None:
        if not rules:
            raise ModelValidationError(["n_states required for a policy with no rules"])
        n_states = len(np.atleast_1d(rules[0][0]))
    weights = []
    thresholds = []
    actions = []
    for w, t, action in rules:
        weights.append(np.asarray(w, dtype=np.float64))
        thresholds.append(float(t))
        actions.append(int(action))
    weights.append(np.zeros(n_states))
    thresholds.append(-np.inf)
    actions.append(int(default_action))
    bad = [a for a in actions if not 0 <= a < n_actions]
    if bad:
        raise ModelValidationError([f"policy action {bad[0] + 1} outside 1..{n_actions}"])
    pmfs = np.zeros((len(actions), n_actions))
    pmfs[np.arange(len(actions)), actions] = 1.0
    return Policy("threshold", np.vstack(weights), np.asarray(thresholds), pmfs)


def tabulated_policy(regions, default_pmf, n_states=None):
    """Stochastic policy from ordered ``(w, t, pmf)`` regions plus a catch-all pmf."""
    regions = list(regions)
    default_pmf = np.asarray(default_pmf, dtype=np.float64)
    n_actions = default_pmf.shape[0]
    if n_states is None:
        if not regions:
            raise ModelValidationError(["n_states required for a policy with no regions"])
        n_states = len(np.atleast_1d(regions[0][0]))
    weights = []
    thresholds = []
    pmfs = []
    for idx, (w, t, pmf) in enumerate(regions):
        pmf = np.asarray(pmf, dtype=np.float64)
        if pmf.shape != (n_actions,):
            raise ModelValidationError(
                [f"region {idx + 1} pmf has length {pmf.shape[0]}, expected {n_actions}"]
            )
        weights.append(np.asarray(w, dtype=np.float64))
        thresholds.append(float(t))
        pmfs.append(pmf)
    weights.append(np.zeros(n_states))
    thresholds.append(-np.inf)
    pmfs.append(default_pmf)
    pmf_mat = np.vstack(pmfs)
    problems = _check_stochastic(pmf_mat, "policy pmf")
    if problems:
        raise ModelValidationError(problems)
    return Policy("tabulated", np.vstack(weights), np.asarray(thresholds), _renormalize_rows(pmf_mat))


def compose_policy(inner, channel):
    """Compose ``inner`` with a row-stochastic action-noise channel.

    The returned policy emits action ``a`` with probability
    ``sum_u channel[u, a] * inner_pmf[u]``, i.e. the inner decision passes
    through the noisy channel. ``channel`` must be (A, A) row-stochastic.
    """
    channel = np.asarray(channel, dtype=np.float64)
    a = inner.n_actions
    if channel.shape != (a, a):
        raise ModelValidationError([f"channel is {channel.shape}, expected ({a}, {a})"])
    problems = _check_stochastic(channel, "channel D")
    if problems:
        raise ModelValidationError(problems)
    channel = _renormalize_rows(channel)
    mixed = _renormalize_rows(inner.action_pmfs @ channel)
    return Policy("composed", inner.weights, inner.thresholds, mixed)


def policy_pmf(policy, pi):
    """Action pmf induced by ``policy`` at belief ``pi`` (length-A vector)."""
    pi = np.asarray(pi, dtype=np.float64)
    scores = (policy.weights * pi).sum(axis=1)
    region = int(np.argmax(scores >= policy.thresholds))
    return policy.action_pmfs[region].copy()


def policy_pmf_batch(policy, beliefs):
    """Action pmfs for a batch of beliefs, shape (n, A)."""
    beliefs = np.asarray(beliefs, dtype=np.float64)
    hits = beliefs @ policy.weights.T >= policy.thresholds
    regions = np.argmax(hits, axis=1)
    return policy.action_pmfs[regions]


@dataclass(frozen=True)
class CaaModel:
    """The full game model: chain ``P``, sensor ``B``, policy and prior belief.

    Instances are immutable; arrays are read-only after construction. The
    constructor does not enforce invariants, so that :func:`validate_model`
    can report every problem of a malformed model at once.
    """

    P: np.ndarray
    B: np.ndarray
    policy: Policy
    pi0: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "P", _freeze(np.atleast_2d(self.P)))
        object.__setattr__(self, "B", _freeze(np.atleast_2d(self.B)))
        object.__setattr__(self, "pi0", _freeze(np.atleast_1d(self.pi0)))

    @property
    def X(self):
        return self.P.shape[0]

    @property
    def Y(self):
        return self.B.shape[1]

    @property
    def A(self):
        return self.policy.n_actions


def validate_model(model):
    """Check every structural invariant, returning a report.

    The report is a list of messages, one per violated invariant, with
    1-indexed locations. An empty report means the model is valid.
    """
    report = []
    x = model.X
    if model.P.shape != (x, x):
        report.append(f"P is {model.P.shape[0]}x{model.P.shape[1]}, expected square")
    report.extend(_check_stochastic(model.P, "P"))
    if model.B.shape[0] != x:
        report.append(f"B has {model.B.shape[0]} rows, expected {x}")
    report.extend(_check_stochastic(model.B, "B"))
    if model.pi0.shape != (x,):
        report.append(f"pi0 has length {model.pi0.shape[0]}, expected {x}")
    else:
        report.extend(f"pi0: {p}" for p in validate_belief(model.pi0))
    if model.policy.n_states != x:
        report.append(
            f"policy weight vectors have length {model.policy.n_states}, expected {x}"
        )
    report.extend(_check_stochastic(model.policy.action_pmfs, "policy pmf"))
    if model.policy.kind == "threshold" and not model.policy.deterministic:
        report.append("threshold policy has a non-deterministic region pmf")
    return report


def _normalized(model):
    """Renormalize stochastic rows that are within tolerance of 1."""
    return CaaModel(
        P=_renormalize_rows(model.P),
        B=_renormalize_rows(model.B),
        policy=Policy(
            model.policy.kind,
            model.policy.weights,
            model.policy.thresholds,
            _renormalize_rows(model.policy.action_pmfs),
        ),
        pi0=np.asarray(model.pi0) / np.asarray(model.pi0).sum(),
    )


def _require(obj, field, where):
    if field not in obj:
        raise ModelFormatError(f"missing field {field!r} in {where}")
    return obj[field]


def _matrix_from_json(value, n_rows, name):
    if not isinstance(value, list) or len(value) != n_rows:
        got = len(value) if isinstance(value, list) else type(value).__name__
        raise ModelFormatError(f"{name} must be an array of {n_rows} rows, got {got}")
    width = None
    for i, row in enumerate(value):
        if not isinstance(row, list) or not all(isinstance(v, (int, float)) for v in row):
            raise ModelFormatError(f"{name} row {i + 1} is not a list of numbers")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ModelFormatError(f"{name} row {i + 1} has length {len(row)}, expected {width}")
    return np.asarray(value, dtype=np.float64)


def _policy_from_json(obj, n_states, n_actions):
    kind = _require(obj, "kind", "policy")
    if kind == "composed":
        inner = _policy_from_json(_require(obj, "inner", "policy"), n_states, n_actions)
        channel = _matrix_from_json(_require(obj, "D", "policy"), n_actions, "D")
        return compose_policy(inner, channel)

    rules = _require(obj, "rules", "policy")
    if not isinstance(rules, list) or not rules:
        raise ModelFormatError("policy rules must be a non-empty list")
    body, catch_all = rules[:-1], rules[-1]
    if "w" in catch_all or "t" in catch_all:
        raise ModelFormatError("last policy rule must be the catch-all (no 'w'/'t')")

    def rule_parts(rule, idx):
        w = _require(rule, "w", f"policy rule {idx + 1}")
        t = _require(rule, "t", f"policy rule {idx + 1}")
        if not isinstance(w, list) or len(w) != n_states:
            raise ModelFormatError(f"policy rule {idx + 1} weight must have length {n_states}")
        return np.asarray(w, dtype=np.float64), float(t)

    if kind == "threshold":
        parsed = []
        for i, rule in enumerate(body):
            w, t = rule_parts(rule, i)
            parsed.append((w, t, int(_require(rule, "action", f"policy rule {i + 1}")) - 1))
        default = int(_require(catch_all, "action", "policy catch-all")) - 1
        return threshold_policy(parsed, default, n_actions)
    if kind == "tabulated":
        parsed = []
        for i, rule in enumerate(body):
            w, t = rule_parts(rule, i)
            parsed.append((w, t, _require(rule, "pmf", f"policy rule {i + 1}")))
        return tabulated_policy(parsed, _require(catch_all, "pmf", "policy catch-all"))
    raise ModelFormatError(f"unknown policy kind {kind!r}")


def parse_model(text):
    """Parse a model JSON document and return a validated :class:`CaaModel`."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise ModelFormatError("model document must be a JSON object")

    dims = {}
    for field in ("X", "Y", "A"):
        value = _require(obj, field, "model")
        if not isinstance(value, int) or value < 1:
            raise ModelFormatError(f"{field} must be a positive integer")
        dims[field] = value

    p = _matrix_from_json(_require(obj, "P", "model"), dims["X"], "P")
    if p.shape[1] != dims["X"]:
        raise ModelFormatError(f"P has {p.shape[1]} columns, expected X={dims['X']}")
    b = _matrix_from_json(_require(obj, "B", "model"), dims["X"], "B")
    if b.shape[1] != dims["Y"]:
        raise ModelFormatError(f"B has {b.shape[1]} columns, expected Y={dims['Y']}")
    pi0 = _require(obj, "pi0", "model")
    if not isinstance(pi0, list) or len(pi0) != dims["X"]:
        raise ModelFormatError(f"pi0 must have length X={dims['X']}")
    policy = _policy_from_json(_require(obj, "policy", "model"), dims["X"], dims["A"])

    model = CaaModel(P=p, B=b, policy=policy, pi0=np.asarray(pi0, dtype=np.float64))
    report = validate_model(model)
    if report:
        raise ModelValidationError(report)
    return _normalized(model)


def load_model(source):
    """Load a model from a file path, or directly from JSON text."""
    if isinstance(source, (str, os.PathLike)):
        if isinstance(source, str) and source.lstrip().startswith("{"):
            return parse_model(source)
        with open(source, "r", encoding="utf-8") as fh:
            return parse_model(fh.read())
    return parse_model(source.read())


def model_hash(model):
    """Stable hex digest of the model contents, for cross-file consistency checks."""
    canonical = {
        "P": model.P.tolist(),
        "B": model.B.tolist(),
        "pi0": model.pi0.tolist(),
        "policy": {
            "weights": model.policy.weights.tolist(),
            "thresholds": [repr(t) for t in model.policy.thresholds.tolist()],
            "pmfs": model.policy.action_pmfs.tolist(),
        },
    }
    payload = json.dumps(canonical, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()
