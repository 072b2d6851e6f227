"""Random MBQC instances and trace invariants shared by several test modules."""
import networkx as nx
import numpy as np

from clusterpeierls import mbqc
from clusterpeierls.graphgen import Graph
from clusterpeierls.mbqc import MeasurementPattern, MeasurementStep


def random_instance(rng, max_n=10):
    """Random connected graph with a random adaptive pattern on it."""
    n = int(rng.integers(2, max_n + 1))
    while True:
        g = nx.gnp_random_graph(n, float(rng.uniform(0.2, 0.7)), seed=int(rng.integers(2**31)))
        if nx.is_connected(g):
            break
    graph = Graph.from_edges(n, g.edges())
    order = rng.permutation(n).tolist()
    n_out = int(rng.integers(1, n))
    outputs = order[-n_out:]
    steps = []
    for q in order[:-n_out]:
        k = len(steps)
        deps = [j for j in range(k) if rng.random() < 0.3]
        xdeps = {j for j in deps if rng.random() < 0.5}
        steps.append(MeasurementStep(q, float(rng.uniform(0, 2 * np.pi)), xdeps, set(deps) - xdeps))
    if rng.random() < 0.5:
        steps += [MeasurementStep(q, kind=mbqc.Z) for q in outputs]
    return graph, MeasurementPattern(tuple(steps), set(outputs))


def check_trace(tr):
    t = tr.column("t")
    E = tr.column("E")
    I = tr.column("I")
    assert all(b > a for a, b in zip(t, t[1:]))
    assert all(b <= a for a, b in zip(E, E[1:]))
    assert all(b >= a for a, b in zip(I, I[1:]))
    assert all(0 <= i <= tr.I_max for i in I)
    for r in tr.records:
        if r.t >= 1:
            assert r.P == r.E - r.C / r.t
