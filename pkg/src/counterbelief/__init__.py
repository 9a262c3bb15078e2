"""Estimate an adversary's sequence of Bayesian beliefs from its actions.

An adversary runs a Bayesian filter on noisy observations of our state and
acts through a known belief-dependent policy. From our own state sequence
and the adversary's observed actions, this package computes the posterior
over which belief the adversary holds at each step (the inverse filter),
refines every step with hindsight over a fixed horizon (the smoother),
verifies both against a brute-force enumeration oracle, and reproduces the
associated Monte Carlo experiments through a CLI.

The numeric kernels have a compiled backend with a pure numpy fallback;
both produce bitwise-identical results. Set ``COUNTERBELIEF_PURE=1``
before import to force the fallback.
"""

from ._kernels import backend as kernel_backend
from .errors import (
    CounterbeliefError,
    EnumerationTooLarge,
    GraphMismatch,
    ImpossibleObservation,
    InconsistentAction,
    InconsistentEvidence,
    ModelFormatError,
    ModelValidationError,
)
from .experiments import (
    ErrorCurve,
    SimplexPmfExport,
    SimplexRow,
    barycentric_uv,
    export_simplex_pmf,
    monte_carlo_errors,
    write_error_curve_csv,
    write_simplex_csv,
)
from .forward import PosteriorPmf, forward_pass, posterior_document, posterior_mean
from .graph import (
    BeliefGraph,
    LayerEdges,
    expand_belief_graph,
    graph_document,
    inverse_observations,
)
from .model import (
    STOCHASTIC_ATOL,
    CaaModel,
    Policy,
    compose_policy,
    load_model,
    model_hash,
    parse_model,
    policy_pmf,
    policy_pmf_batch,
    tabulated_policy,
    threshold_policy,
    validate_belief,
    validate_model,
)
from .oracle import DEFAULT_SEQUENCE_CAP, enumerate_posterior, total_variation
from .simulate import (
    RngStream,
    Trajectory,
    hmm_filter_update,
    load_trajectory,
    sample_action,
    sample_chain,
    sample_observation,
    save_trajectory,
    simulate_episode,
)
from .smoothing import BackwardValues, backward_pass, smooth, smoothed_means

__version__ = "0.1.0"

__all__ = [
    "BackwardValues",
    "BeliefGraph",
    "CaaModel",
    "CounterbeliefError",
    "DEFAULT_SEQUENCE_CAP",
    "EnumerationTooLarge",
    "ErrorCurve",
    "GraphMismatch",
    "ImpossibleObservation",
    "InconsistentAction",
    "InconsistentEvidence",
    "LayerEdges",
    "ModelFormatError",
    "ModelValidationError",
    "Policy",
    "PosteriorPmf",
    "RngStream",
    "STOCHASTIC_ATOL",
    "SimplexPmfExport",
    "SimplexRow",
    "Trajectory",
    "backward_pass",
    "barycentric_uv",
    "compose_policy",
    "enumerate_posterior",
    "expand_belief_graph",
    "export_simplex_pmf",
    "forward_pass",
    "graph_document",
    "hmm_filter_update",
    "inverse_observations",
    "kernel_backend",
    "load_model",
    "load_trajectory",
    "model_hash",
    "monte_carlo_errors",
    "parse_model",
    "policy_pmf",
    "policy_pmf_batch",
    "posterior_document",
    "posterior_mean",
    "sample_action",
    "sample_chain",
    "sample_observation",
    "save_trajectory",
    "simulate_episode",
    "smooth",
    "smoothed_means",
    "tabulated_policy",
    "threshold_policy",
    "total_variation",
    "validate_belief",
    "validate_model",
    "write_error_curve_csv",
    "write_simplex_csv",
]
