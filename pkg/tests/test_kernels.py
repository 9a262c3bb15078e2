"""Backend parity: the compiled kernels must match the numpy fallback bitwise."""

import subprocess
import sys

import numpy as np
import pytest

import counterbelief as cb
from counterbelief import _kernels
from counterbelief._kernels import _core, _pure

from conftest import battery

needs_compiled = pytest.mark.skipif(_core is None, reason="compiled backend unavailable")


def run_with(impl, fn):
    previous = _kernels._impl
    _kernels.activate(impl)
    try:
        return fn()
    finally:
        _kernels.activate(previous)


def pipeline_outputs(model, n, seed):
    traj = cb.simulate_episode(model, n, cb.RngStream(seed, 0))
    graph = cb.expand_belief_graph(model, n)
    alpha = cb.forward_pass(model, graph, traj.x, traj.a)
    beta = cb.backward_pass(model, graph, traj.x, traj.a)
    gamma = cb.smooth(alpha, beta, graph)
    oracle = cb.enumerate_posterior(model, traj.x, traj.a, n // 2, "smoother", graph=graph)
    return graph, alpha, beta, gamma, oracle


class TestDedupSemantics:
    def test_first_match_wins(self):
        candidates = np.array(
            [[0.5, 0.5], [0.5 + 2e-10, 0.5 - 2e-10], [0.9, 0.1], [0.5, 0.5]]
        )
        assign, n_unique = _kernels.dedup_layer(candidates, 1e-9)
        assert n_unique == 2
        assert list(assign) == [0, 0, 1, 0]

    def test_merge_radius_is_strict(self):
        candidates = np.array([[0.5, 0.5], [0.5 + 1e-9, 0.5 - 1e-9]])
        _, n_loose = _kernels.dedup_layer(candidates, 1e-8)
        _, n_tight = _kernels.dedup_layer(candidates, 1e-12)
        assert n_loose == 1
        assert n_tight == 2

    @needs_compiled
    def test_backends_agree(self):
        gen = np.random.Generator(np.random.Philox(key=np.array([5, 5], dtype=np.uint64)))
        raw = gen.uniform(size=(40, 3))
        candidates = np.ascontiguousarray(raw / raw.sum(axis=1, keepdims=True))
        candidates[10] = candidates[3]
        candidates[25] = candidates[3] + 4e-10
        a_pure, n_pure = _pure.dedup_layer(candidates, 1e-9)
        a_core, n_core = _core.dedup_layer(candidates, 1e-9)
        assert n_pure == n_core
        assert np.array_equal(np.asarray(a_pure), np.asarray(a_core))


@needs_compiled
class TestBackendParity:
    def test_edge_sum_kernels_bitwise_equal(self):
        for model, n in battery(8, kind="mixed", sparsity=0.2):
            graph = cb.expand_belief_graph(model, n)
            traj = cb.simulate_episode(model, n, cb.RngStream(51, 0))
            prev = np.zeros(graph.layer_sizes[0])
            prev[0] = 1.0
            for k in range(1, n + 1):
                e = graph.edges[k - 1]
                b_row = model.B[traj.x[k]]
                g_col = np.ascontiguousarray(graph.action_pmfs[k][:, traj.a[k - 1]])
                n_out = graph.layer_sizes[k]
                out_pure = _pure.forward_step(
                    e.parents, e.obs, e.children, b_row, g_col, prev, n_out
                )
                out_core = _core.forward_step(
                    e.parents, e.obs, e.children, b_row, g_col, prev, n_out
                )
                assert np.array_equal(out_pure, np.asarray(out_core))
                nxt = np.ascontiguousarray(out_pure / out_pure.sum())
                n_in = graph.layer_sizes[k - 1]
                back_pure = _pure.backward_step(
                    e.parents, e.obs, e.children, b_row, g_col, nxt, n_in
                )
                back_core = _core.backward_step(
                    e.parents, e.obs, e.children, b_row, g_col, nxt, n_in
                )
                assert np.array_equal(back_pure, np.asarray(back_core))
                prev = nxt

    def test_full_pipeline_bitwise_equal(self):
        for model, n in battery(6, kind="mixed", sparsity=0.15):
            g_pure, a_pure, b_pure, s_pure, o_pure = run_with(
                _pure, lambda: pipeline_outputs(model, n, 52)
            )
            g_core, a_core, b_core, s_core, o_core = run_with(
                _core, lambda: pipeline_outputs(model, n, 52)
            )
            for la, lb in zip(g_pure.layers, g_core.layers):
                assert np.array_equal(la, lb)
            for pa, pb in zip(a_pure, a_core):
                assert np.array_equal(pa.mass, pb.mass)
            for va, vb in zip(b_pure, b_core):
                assert np.array_equal(va.values, vb.values)
                assert va.scale_exp == vb.scale_exp
            for sa, sb in zip(s_pure, s_core):
                assert np.array_equal(sa.mass, sb.mass)
            assert np.array_equal(o_pure.mass, o_core.mass)

    def test_oracle_status_codes_agree(self, three_state_model):
        other = cb.CaaModel(
            P=three_state_model.P,
            B=three_state_model.B,
            policy=three_state_model.policy,
            pi0=np.array([0.2, 0.5, 0.3]),
        )
        foreign = cb.expand_belief_graph(other, 2)
        traj = cb.simulate_episode(three_state_model, 2, cb.RngStream(53, 0))
        x = np.asarray(traj.x, dtype=np.intp)
        a = np.asarray(traj.a, dtype=np.intp)
        args = (
            np.ascontiguousarray(three_state_model.P.T),
            three_state_model.B,
            three_state_model.policy.weights,
            three_state_model.policy.thresholds,
            three_state_model.policy.action_pmfs,
            three_state_model.pi0,
            x,
            a,
            1,
            1,
            foreign.layers[1],
            foreign.tol,
        )
        _, status_pure = _pure.oracle_enumerate(*args)
        _, status_core = _core.oracle_enumerate(*args)
        assert status_pure == status_core == 1


class TestSelection:
    def test_backend_name_reported(self):
        assert cb.kernel_backend() in ("compiled", "pure")

    def test_environment_variable_forces_fallback(self):
        code = "import counterbelief; print(counterbelief.kernel_backend())"
        out = subprocess.run(
            [sys.executable, "-c", code],
            capture_output=True,
            text=True,
            env={"PATH": "/usr/bin:/bin", "COUNTERBELIEF_PURE": "1"},
        )
        assert out.stdout.strip() == "pure"

    @needs_compiled
    def test_compiled_is_default_here(self):
        code = "import counterbelief; print(counterbelief.kernel_backend())"
        out = subprocess.run(
            [sys.executable, "-c", code],
            capture_output=True,
            text=True,
            env={"PATH": "/usr/bin:/bin"},
        )
        assert out.stdout.strip() == "compiled"
