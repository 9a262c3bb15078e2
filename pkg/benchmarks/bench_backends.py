"""Benchmark the compiled kernel backend against the pure numpy fallback.

Times three workloads on a three-state model: belief-graph expansion
(dedup-dominated), repeated forward/backward/smooth passes over seeded
episodes (edge-sum dominated), and one brute-force oracle enumeration
(DFS dominated). Run as a script:

    python3 benchmarks/bench_backends.py --graph-horizon 7 --episodes 50
"""

import argparse
import time

import numpy as np

import counterbelief as cb
from counterbelief import _kernels
from counterbelief._kernels import _core, _pure


def three_state_model():
    policy = cb.threshold_policy([([1.0, 0.0, 0.0], 0.5, 0)], default_action=1, n_actions=2)
    return cb.CaaModel(
        P=np.array([[0.7, 0.2, 0.1], [0.1, 0.4, 0.5], [0.1, 0.1, 0.8]]),
        B=np.array([[0.3, 0.3, 0.4], [0.1, 0.8, 0.1], [0.1, 0.4, 0.5]]),
        policy=policy,
        pi0=np.array([1.0, 0.0, 0.0]),
    )


def best_of(fn, repeats):
    fn()
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def run_workloads(model, graph_horizon, episodes, oracle_horizon, repeats):
    def expand():
        cb.expand_belief_graph(model, graph_horizon)

    graph = cb.expand_belief_graph(model, graph_horizon)
    trajs = [
        cb.simulate_episode(model, graph_horizon, cb.RngStream(0, r)) for r in range(episodes)
    ]

    def passes():
        for traj in trajs:
            alpha = cb.forward_pass(model, graph, traj.x, traj.a)
            beta = cb.backward_pass(model, graph, traj.x, traj.a)
            cb.smooth(alpha, beta, graph)

    oracle_graph = cb.expand_belief_graph(model, oracle_horizon)
    oracle_traj = cb.simulate_episode(model, oracle_horizon, cb.RngStream(0, 0))

    def oracle():
        cb.enumerate_posterior(
            model,
            oracle_traj.x,
            oracle_traj.a,
            oracle_horizon // 2,
            "smoother",
            graph=oracle_graph,
        )

    return {
        f"expand graph (N={graph_horizon})": best_of(expand, repeats),
        f"filter+smooth ({episodes} episodes)": best_of(passes, repeats),
        f"oracle (3^{oracle_horizon} sequences)": best_of(oracle, repeats),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--graph-horizon", type=int, default=7)
    parser.add_argument("--episodes", type=int, default=50)
    parser.add_argument("--oracle-horizon", type=int, default=9)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    model = three_state_model()
    backends = [("pure", _pure)]
    if _core is not None:
        backends.append(("compiled", _core))
    else:
        print("compiled backend unavailable; timing the fallback only")

    original = _kernels._impl
    results = {}
    try:
        for name, impl in backends:
            _kernels.activate(impl)
            results[name] = run_workloads(
                model, args.graph_horizon, args.episodes, args.oracle_horizon, args.repeats
            )
    finally:
        _kernels.activate(original)

    tasks = list(next(iter(results.values())))
    width = max(map(len, tasks))
    header = f"{'task':<{width}}  {'pure':>10}"
    if "compiled" in results:
        header += f"  {'compiled':>10}  {'speedup':>8}"
    print(header)
    for task in tasks:
        line = f"{task:<{width}}  {results['pure'][task] * 1e3:>8.2f}ms"
        if "compiled" in results:
            fast = results["compiled"][task]
            line += f"  {fast * 1e3:>8.2f}ms  {results['pure'][task] / fast:>7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
