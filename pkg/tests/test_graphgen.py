import itertools
import json

import numpy as np
import pytest

from clusterpeierls import qsim
from clusterpeierls.errors import InvalidEdgeError, ParameterError, SizeError
from clusterpeierls.graphgen import (
    Graph,
    LatticeSpec,
    build_lattice,
    build_long_range,
    build_path,
    build_ring,
    edge_count,
    expected_long_range_degree,
    prepare_cluster,
)


def nn_pairs_bruteforce(sides, periodic):
    coords = list(itertools.product(*(range(s) for s in sides)))
    index = {c: k for k, c in enumerate(coords)}
    pairs = set()
    for a, b in itertools.combinations(coords, 2):
        diffs = [abs(x - y) for x, y in zip(a, b)]
        if periodic:
            diffs = [min(d, s - d) for d, s in zip(diffs, sides)]
        if sum(diffs) == 1:
            pairs.add(tuple(sorted((index[a], index[b]))))
    return pairs


class TestLattice:
    def test_path_of_four(self):
        g = build_lattice(LatticeSpec((4,)))
        assert g.edges == ((0, 1), (1, 2), (2, 3))

    def test_four_by_four(self):
        g = build_lattice(LatticeSpec((4, 4)))
        assert g.n_vertices == 16 and edge_count(g) == 24

    @pytest.mark.parametrize("L", range(2, 7))
    def test_square_edge_count(self, L):
        assert edge_count(build_lattice(LatticeSpec((L, L)))) == 2 * L * (L - 1)

    @pytest.mark.parametrize(
        "sides,periodic",
        [((3, 4), False), ((3, 4), True), ((2, 3, 3), False), ((4, 3, 3), True), ((5,), True), ((2, 2), True)],
    )
    def test_edges_match_bruteforce(self, sides, periodic):
        g = build_lattice(LatticeSpec(sides, "periodic" if periodic else "open"))
        assert set(g.edges) == nn_pairs_bruteforce(sides, periodic)

    @pytest.mark.parametrize("sides", [(4,), (3, 5), (3, 3, 3), (2, 2, 2, 2)])
    def test_degree_bound(self, sides):
        for bc in ("open", "periodic"):
            g = build_lattice(LatticeSpec(sides, bc))
            assert max(g.degree(v) for v in range(g.n_vertices)) <= 2 * len(sides)

    def test_row_major_coords(self):
        g = build_lattice(LatticeSpec((2, 3)))
        assert g.coords[4] == (1, 1)
        assert LatticeSpec((2, 3)).index((1, 1)) == 4

    def test_zero_side(self):
        with pytest.raises(SizeError):
            LatticeSpec((3, 0))


class TestGraph:
    def test_self_loop(self):
        with pytest.raises(InvalidEdgeError):
            Graph.from_edges(3, [(1, 1)])

    def test_duplicate(self):
        with pytest.raises(InvalidEdgeError):
            Graph.from_edges(3, [(0, 1), (1, 0)])

    def test_json_roundtrip(self):
        g = build_lattice(LatticeSpec((2, 3)))
        d = json.loads(g.to_json())
        assert set(d) == {"n", "edges", "coords"}
        assert Graph.from_json(g.to_json()) == g


class TestRing:
    def test_box(self):
        assert edge_count(build_ring(4)) == 4

    def test_triangle(self):
        assert build_ring(3).edges == ((0, 1), (0, 2), (1, 2))

    def test_ring_eight(self):
        g = build_ring(8)
        assert edge_count(g) == 8 and all(g.degree(v) == 2 for v in range(8))

    def test_too_small(self):
        with pytest.raises(SizeError):
            build_ring(2)


class TestLongRange:
    def test_steep_decay_is_path(self):
        g = build_long_range(10, 50.0, 1.0, seed=1)
        assert all(j - i == 1 for i, j in g.edges)
        assert edge_count(g) == 9

    def test_alpha_zero_complete(self):
        g = build_long_range(7, 0.0, 1.0, seed=0)
        assert edge_count(g) == 21

    def test_reproducible(self):
        a = build_long_range(60, 1.5, 0.7, seed=42)
        b = build_long_range(60, 1.5, 0.7, seed=42)
        assert a == b

    @pytest.mark.parametrize("bad", [dict(alpha=-1, p0=0.5), dict(alpha=1, p0=0), dict(alpha=1, p0=1.5)])
    def test_bad_params(self, bad):
        with pytest.raises(ParameterError):
            build_long_range(5, seed=0, **bad)

    def test_mean_extra_degree(self):
        n, alpha, p0 = 200, 2.0, 1.0
        extra = []
        for seed in range(40):
            g = build_long_range(n, alpha, p0, seed)
            extra.append(2 * sum(1 for i, j in g.edges if j - i >= 2) / n)
        extra = np.array(extra)
        se = extra.std(ddof=1) / np.sqrt(extra.size)
        # exact finite-line expectation, summed independently of the library helper
        expect = sum(2 * (n - r) * r ** -alpha for r in range(2, n)) / n
        assert expect == pytest.approx(expected_long_range_degree(n, alpha, p0), rel=1e-12)
        assert abs(extra.mean() - expect) < 3 * se
        # boundary-free partial sum 2 p0 sum r^-alpha is the large-n limit; differs by O(ln n / n)
        zeta_like = 2 * p0 * sum(r ** -alpha for r in range(2, n))
        assert abs(expect - zeta_like) < 2 * np.log(n) / n + 1e-12


class TestPrepareCluster:
    def test_pair(self):
        s = prepare_cluster(build_path(2))
        sq = 1 / np.sqrt(2)
        expected = (np.kron(qsim.KET_PLUS, qsim.KET0) + np.kron(qsim.KET_MINUS, qsim.KET1)) * sq
        np.testing.assert_allclose(s.amplitudes, expected, atol=1e-15)

    def test_box_matches_closed_form(self):
        s = prepare_cluster(build_ring(4))
        idx = np.arange(16)
        z = [(idx >> k) & 1 for k in range(4)]
        want = 0.25 * (-1.0) ** ((z[0] + z[2]) * (z[1] + z[3]))
        assert abs(np.vdot(want, s.amplitudes)) == pytest.approx(1, abs=1e-12)

    def test_no_edges(self):
        s = prepare_cluster(Graph(3, ()))
        np.testing.assert_array_equal(s.amplitudes, qsim.new_plus_state(3).amplitudes)

    def test_order_independent(self, rng):
        g = build_long_range(8, 1.0, 0.8, seed=5)
        ref = prepare_cluster(g)
        for _ in range(5):
            edges = list(g.edges)
            rng.shuffle(edges)
            s = qsim.new_plus_state(8)
            for e in edges:
                s = qsim.apply_cz(s, *e)
            assert np.array_equal(s.amplitudes, ref.amplitudes)

    def test_cap(self):
        with pytest.raises(SizeError):
            prepare_cluster(Graph(qsim.MAX_QUBITS + 1, ()))

    def test_input_injection(self, rng):
        psi = rng.normal(size=2) + 1j * rng.normal(size=2)
        psi /= np.linalg.norm(psi)
        s = prepare_cluster(build_path(2), {0: psi})
        want = qsim.apply_cz(qsim.Statevector.product(psi, qsim.KET_PLUS), 0, 1)
        np.testing.assert_allclose(s.amplitudes, want.amplitudes, atol=1e-15)
