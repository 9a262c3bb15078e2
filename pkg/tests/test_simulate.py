"""Belief updates, seeded sampling and trajectory files."""

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import counterbelief as cb
from counterbelief.errors import ImpossibleObservation, ModelFormatError

from conftest import random_model


class FixedUniform:
    """Stand-in generator emitting a scripted sequence of uniforms."""

    def __init__(self, values):
        self.values = list(values)

    def random(self):
        return self.values.pop(0)


class TestFilterUpdate:
    def test_known_value(self, three_state_model):
        out = cb.hmm_filter_update(
            three_state_model.P, three_state_model.B, [1.0, 0.0, 0.0], 1
        )
        expected = np.array([0.21, 0.16, 0.04]) / 0.41
        assert np.abs(out - expected).max() < 1e-12

    def test_uniform_sensor_row_keeps_prediction(self):
        P = np.array([[0.5, 0.5], [0.5, 0.5]])
        B = np.array([[0.5, 0.5], [0.5, 0.5]])
        out = cb.hmm_filter_update(P, B, [0.3, 0.7], 0)
        assert np.allclose(out, [0.5, 0.5])

    def test_impossible_observation_raises(self):
        P = np.eye(2)
        B = np.array([[1.0, 0.0], [1.0, 0.0]])
        with pytest.raises(ImpossibleObservation):
            cb.hmm_filter_update(P, B, [0.5, 0.5], 1)

    def test_observation_out_of_range(self, three_state_model):
        with pytest.raises(ValueError):
            cb.hmm_filter_update(three_state_model.P, three_state_model.B, [1.0, 0, 0], 3)

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(0, 10**6))
    def test_output_is_valid_belief(self, seed):
        model = random_model(3, 3, 2, seed, kind="mixed", sparsity=0.2)
        traj = cb.simulate_episode(model, 5, cb.RngStream(seed, 0))
        pi = model.pi0
        for y in traj.y:
            pi = cb.hmm_filter_update(model.P, model.B, pi, int(y))
            assert cb.validate_belief(pi, atol=1e-12) == []


class TestSampling:
    def test_streams_are_reproducible(self, three_state_model):
        a = cb.simulate_episode(three_state_model, 6, cb.RngStream(7, 3))
        b = cb.simulate_episode(three_state_model, 6, cb.RngStream(7, 3))
        assert np.array_equal(a.x, b.x)
        assert np.array_equal(a.y, b.y)
        assert np.array_equal(a.a, b.a)
        assert np.array_equal(a.pi, b.pi)

    def test_streams_are_distinct(self, three_state_model):
        runs = [cb.simulate_episode(three_state_model, 10, cb.RngStream(7, s)) for s in range(4)]
        paths = {tuple(map(int, r.y)) for r in runs}
        assert len(paths) > 1

    def test_boundary_draw_takes_lower_index(self):
        B = np.array([[0.5, 0.5]])
        assert cb.sample_observation(B, 0, FixedUniform([0.5])) == 0
        assert cb.sample_observation(B, 0, FixedUniform([0.5 + 1e-12])) == 1

    def test_zero_mass_categories_never_drawn(self):
        B = np.array([[0.0, 1.0, 0.0]])
        gen = cb.RngStream(3, 0).generator()
        draws = {cb.sample_observation(B, 0, gen) for _ in range(64)}
        assert draws == {1}

    def test_chain_frequencies_match_kernel(self):
        P = np.array([[0.9, 0.1], [0.4, 0.6]])
        states = cb.sample_chain(P, [1.0, 0.0], 20000, cb.RngStream(11, 0))
        stays = np.mean(states[1:][states[:-1] == 0] == 0)
        assert abs(stays - 0.9) < 0.02

    def test_action_sampling_follows_policy(self, three_state_model):
        pi = np.array([0.9, 0.05, 0.05])
        gen = cb.RngStream(5, 0).generator()
        draws = {cb.sample_action(three_state_model.policy, pi, gen) for _ in range(16)}
        assert draws == {0}


class TestEpisodes:
    def test_shapes_and_ranges(self, three_state_model):
        traj = cb.simulate_episode(three_state_model, 6, cb.RngStream(1, 0))
        assert traj.horizon == 6
        assert traj.x.shape == (7,) and traj.a.shape == (6,) and traj.y.shape == (6,)
        assert traj.pi.shape == (7, 3)
        assert traj.x.min() >= 0 and traj.x.max() < 3
        assert traj.a.min() >= 0 and traj.a.max() < 2

    def test_recorded_beliefs_replay_exactly(self, three_state_model):
        traj = cb.simulate_episode(three_state_model, 6, cb.RngStream(2, 5))
        pi = three_state_model.pi0
        for k in range(6):
            pi = cb.hmm_filter_update(three_state_model.P, three_state_model.B, pi, int(traj.y[k]))
            assert np.array_equal(pi, traj.pi[k + 1])

    def test_actions_consistent_with_deterministic_policy(self, three_state_model):
        traj = cb.simulate_episode(three_state_model, 20, cb.RngStream(3, 1))
        for k in range(20):
            pmf = cb.policy_pmf(three_state_model.policy, traj.pi[k + 1])
            assert pmf[traj.a[k]] == 1.0

    def test_horizon_must_be_positive(self, three_state_model):
        with pytest.raises(ValueError):
            cb.simulate_episode(three_state_model, 0, cb.RngStream(0, 0))


class TestTrajectoryFiles:
    def test_round_trip(self, three_state_model, tmp_path):
        traj = cb.simulate_episode(three_state_model, 5, cb.RngStream(9, 0))
        path = tmp_path / "traj.json"
        cb.save_trajectory(traj, path)
        back = cb.load_trajectory(path)
        assert np.array_equal(back.x, traj.x)
        assert np.array_equal(back.a, traj.a)
        assert np.array_equal(back.y, traj.y)
        assert np.allclose(back.pi, traj.pi, atol=0)
        assert back.model_digest == cb.model_hash(three_state_model)

    def test_file_indices_are_one_based(self, three_state_model, tmp_path):
        traj = cb.simulate_episode(three_state_model, 4, cb.RngStream(9, 1))
        path = tmp_path / "traj.json"
        cb.save_trajectory(traj, path)
        doc = json.loads(path.read_text())
        assert min(doc["x"]) >= 1 and max(doc["x"]) <= 3
        assert min(doc["a"]) >= 1 and max(doc["a"]) <= 2
        assert doc["x"] == [int(v) + 1 for v in traj.x]

    def test_optional_fields_may_be_absent(self, tmp_path):
        path = tmp_path / "traj.json"
        path.write_text(json.dumps({"N": 2, "x": [1, 2, 1], "a": [2, 1]}))
        traj = cb.load_trajectory(path)
        assert traj.y is None and traj.pi is None and traj.model_digest is None
        assert np.array_equal(traj.x, [0, 1, 0])
        assert np.array_equal(traj.a, [1, 0])

    def test_missing_field_is_format_error(self, tmp_path):
        path = tmp_path / "traj.json"
        path.write_text(json.dumps({"N": 2, "x": [1, 2, 1]}))
        with pytest.raises(ModelFormatError, match="'a'"):
            cb.load_trajectory(path)

    def test_inconsistent_lengths_rejected(self, tmp_path):
        path = tmp_path / "traj.json"
        path.write_text(json.dumps({"N": 3, "x": [1, 2, 1], "a": [2, 1]}))
        with pytest.raises(ModelFormatError, match="N=3"):
            cb.load_trajectory(path)
