import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clusterpeierls import mbqc, qsim
from clusterpeierls.errors import DomainError, ImpossibleOutcomeError, PatternError
from clusterpeierls.graphgen import Graph, build_path, build_ring, prepare_cluster
from clusterpeierls.mbqc import MeasurementPattern, MeasurementStep, PauliFrame
from clusterpeierls.qsim import H, X, Z

from conftest import random_qubit

BITS3 = list(itertools.product((0, 1), repeat=3))


def overlap(u, v):
    return abs(np.vdot(u, v)) / (np.linalg.norm(u) * np.linalg.norm(v))


def su2_output(psi, pattern, m):
    state = prepare_cluster(build_path(4), {0: psi})
    return mbqc.run(state, pattern, list(m))


class TestSchedule:
    def test_independent_steps(self):
        p = MeasurementPattern(tuple(MeasurementStep(q, 0.1 * q) for q in range(5)))
        assert mbqc.schedule(p) == [[0, 1, 2, 3, 4]]

    def test_su2_chain(self):
        assert mbqc.schedule(mbqc.compile_su2_pattern(0.1, 0.2, 0.3)) == [[0], [1], [2]]

    def test_two_interleaved_chains(self):
        steps = (
            MeasurementStep(0, 0.1),
            MeasurementStep(4, 0.1),
            MeasurementStep(1, 0.2, {0}),
            MeasurementStep(5, 0.2, {1}),
            MeasurementStep(2, 0.3, {2}),
            MeasurementStep(6, 0.3, {3}),
        )
        sets = mbqc.schedule(MeasurementPattern(steps, {3, 7}))
        assert sets == [[0, 1], [2, 3], [4, 5]]

    def test_readouts_last(self):
        sets = mbqc.schedule(mbqc.teleport_pattern(readout=True))
        assert sets == [[0], [1]]

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_length_is_longest_chain(self, data):
        k = data.draw(st.integers(1, 10))
        deps = [set(data.draw(st.sets(st.integers(0, i - 1), max_size=3))) if i else set() for i in range(k)]
        steps = tuple(MeasurementStep(i, 0.0, d) for i, d in enumerate(deps))
        sets = mbqc.schedule(MeasurementPattern(steps))

        # brute force: longest path over all chains of step indices
        best = 0
        for mask in range(1, 1 << k):
            chain = [i for i in range(k) if mask >> i & 1]
            if all(chain[j] in deps[chain[j + 1]] for j in range(len(chain) - 1)):
                best = max(best, len(chain))
        assert len(sets) == best
        level = {s: t for t, q in enumerate(sets) for s in q}
        assert all(level[d] < level[i] for i in range(k) for d in deps[i])


class TestPatternValidation:
    def test_forward_dependency(self):
        with pytest.raises(PatternError):
            MeasurementPattern((MeasurementStep(0, 0, {1}), MeasurementStep(1)))

    def test_qubit_twice(self):
        with pytest.raises(PatternError):
            MeasurementPattern((MeasurementStep(0), MeasurementStep(0)))

    def test_output_as_computational(self):
        with pytest.raises(PatternError):
            MeasurementPattern((MeasurementStep(1),), {1})

    def test_json_roundtrip(self):
        p = mbqc.compile_su2_pattern(0.3, -0.2, 1.1)
        d = p.to_dict()
        assert set(d["steps"][1]) == {"q", "angle", "xdep", "zdep", "kind"}
        assert MeasurementPattern.from_json(p.to_json()) == p

    def test_json_unknown_key(self):
        with pytest.raises(PatternError):
            MeasurementPattern.from_dict({"steps": [{"q": 0, "angel": 1.0}], "outputs": []})


class TestTeleport:
    @pytest.mark.parametrize("m", [0, 1])
    def test_forced(self, rng, m):
        psi = random_qubit(rng)
        state = prepare_cluster(build_path(2), {0: psi})
        tr = mbqc.run(state, mbqc.teleport_pattern(), [m])
        assert tr.frame.x_power(1) == m and tr.frame.z_power(1) == 0
        got = qsim.single_qubit_state(tr.state, 1)
        assert overlap(got, np.linalg.matrix_power(X, m) @ H @ psi) > 1 - 1e-12

    def test_fresh_cluster_probabilities(self):
        rng = np.random.default_rng(9)
        p = mbqc.compile_su2_pattern(*rng.uniform(-3, 3, 3))
        for _ in range(20):
            tr = mbqc.run(prepare_cluster(build_path(4)), p, rng)
            assert abs(tr.records[0].probability - 0.5) < 1e-12

    def test_impossible_forced_readout(self):
        # a lone |0> cannot be read out as 1
        p = MeasurementPattern((MeasurementStep(0, kind=mbqc.Z),), frozenset())
        with pytest.raises(ImpossibleOutcomeError):
            mbqc.run(qsim.Statevector.basis(1), p, [1])


class TestPredictedUnitary:
    def test_identity_angles(self):
        np.testing.assert_allclose(mbqc.predicted_unitary(0, 0, 0, 0, 0, 0), H, atol=1e-15)

    def test_alpha_only(self):
        a = 0.83
        np.testing.assert_allclose(mbqc.predicted_unitary(a, 0, 0, 0, 0, 0), H @ qsim.rz(a), atol=1e-15)

    def test_m1_flips_beta(self):
        b = 1.37
        np.testing.assert_allclose(mbqc.predicted_unitary(0, b, 0, 1, 0, 0), X @ H @ qsim.rx(-b), atol=1e-15)

    def test_unitary(self, rng):
        for m in BITS3:
            u = mbqc.predicted_unitary(*rng.uniform(-4, 4, 3), *m)
            np.testing.assert_allclose(u.conj().T @ u, np.eye(2), atol=1e-12)

    def test_matrix_form(self):
        # independent closed forms of the factors
        a, b, g = 0.4, -1.2, 2.2
        rz = lambda t: np.diag([np.exp(-0.5j * t), np.exp(0.5j * t)])
        rx = lambda t: np.cos(t / 2) * np.eye(2) - 1j * np.sin(t / 2) * np.array([[0, 1], [1, 0]])
        for m1, m2, m3 in BITS3:
            want = (
                np.linalg.matrix_power(X, m3) @ np.linalg.matrix_power(Z, m2) @ np.linalg.matrix_power(X, m1)
                @ H @ rz((-1) ** m2 * g) @ rx((-1) ** m1 * b) @ rz(a)
            )
            np.testing.assert_allclose(mbqc.predicted_unitary(a, b, g, m1, m2, m3), want, atol=1e-14)


class TestSU2Pattern:
    def test_zero_angles_give_h(self, rng):
        psi = random_qubit(rng)
        tr = su2_output(psi, mbqc.compile_su2_pattern(0, 0, 0), (0, 0, 0))
        assert overlap(qsim.single_qubit_state(tr.state, 3), H @ psi) > 1 - 1e-12

    def test_zero_outcomes_generic_angles(self, rng):
        a, b, g = rng.uniform(-3, 3, 3)
        psi = random_qubit(rng)
        tr = su2_output(psi, mbqc.compile_su2_pattern(a, b, g), (0, 0, 0))
        want = H @ qsim.rz(g) @ qsim.rx(b) @ qsim.rz(a) @ psi
        assert overlap(qsim.single_qubit_state(tr.state, 3), want) > 1 - 1e-12

    def test_all_outcomes_random_angles(self, rng):
        for _ in range(50):
            a, b, g = rng.uniform(-np.pi, np.pi, 3)
            psi = random_qubit(rng)
            p = mbqc.compile_su2_pattern(a, b, g)
            want = mbqc.predicted_unitary(a, b, g, 0, 0, 0) @ psi
            for m in BITS3:
                tr = su2_output(psi, p, m)
                got = qsim.single_qubit_state(mbqc.corrected_state(tr), 3)
                assert overlap(got, want) >= 1 - 1e-10

    def test_static_pattern_is_outcome_dependent_form(self, rng):
        a, b, g = rng.uniform(-np.pi, np.pi, 3)
        psi = random_qubit(rng)
        p = mbqc.compile_su2_pattern_static(a, b, g)
        for m in BITS3:
            tr = su2_output(psi, p, m)
            got = qsim.single_qubit_state(tr.state, 3)
            assert overlap(got, mbqc.predicted_unitary(a, b, g, *m) @ psi) >= 1 - 1e-10

    def test_effective_angles_follow_outcomes(self):
        p = mbqc.compile_su2_pattern(0.1, 0.2, 0.3)
        tr = su2_output(qsim.KET_PLUS, p, (1, 0, 1))
        angles = [r.angle for r in tr.records]
        assert angles == pytest.approx([-0.1, 0.2, -0.3])
        assert tr.frame.powers[3] == (0, 0)  # x = m1 xor m3, z = m2

    def test_corrected_output_independent_of_outcomes(self, rng):
        a, b, g = rng.uniform(-np.pi, np.pi, 3)
        psi = random_qubit(rng)
        p = mbqc.compile_su2_pattern(a, b, g)
        outs = [qsim.single_qubit_state(mbqc.corrected_state(su2_output(psi, p, m)), 3) for m in BITS3]
        for v in outs[1:]:
            assert overlap(v, outs[0]) >= 1 - 1e-10


class TestZDependency:
    def test_pi_shift_relabels_outcome(self, rng):
        # measuring at phi + pi with outcome m equals measuring at phi with outcome 1-m
        psi = random_qubit(rng)
        state = prepare_cluster(build_path(3), {0: psi})
        base = MeasurementPattern((MeasurementStep(0, 0.4), MeasurementStep(1, 0.9)), {2})
        shifted = MeasurementPattern((MeasurementStep(0, 0.4), MeasurementStep(1, 0.9, z_dependencies={0})), {2})
        for m0, m1 in itertools.product((0, 1), repeat=2):
            a = mbqc.run(state, shifted, [m0, m1])
            b = mbqc.run(state, base, [m0, m1 ^ m0])
            assert qsim.equal_up_to_phase(a.state, b.state)
            assert a.records[1].angle == pytest.approx(0.9 + np.pi * m0)


class TestByproduct:
    def test_identity(self):
        np.testing.assert_array_equal(mbqc.byproduct_correction(PauliFrame({3: (0, 0)}), 3), np.eye(2))

    def test_x(self):
        np.testing.assert_array_equal(mbqc.byproduct_correction(PauliFrame({3: (1, 0)}), 3), X)

    def test_xz(self):
        c = mbqc.byproduct_correction(PauliFrame({3: (1, 1)}), 3)
        np.testing.assert_allclose(c.conj().T @ c, np.eye(2), atol=1e-15)
        np.testing.assert_allclose(c @ c, -np.eye(2), atol=1e-15)  # self-inverse up to phase -1

    def test_not_output(self):
        with pytest.raises(DomainError):
            mbqc.byproduct_correction(PauliFrame({3: (0, 0)}), 1)


class TestDeterministicQubits:
    def test_fresh_cluster(self):
        s = prepare_cluster(build_ring(5))
        assert mbqc.deterministic_qubits(s, range(5)) == set()

    def test_product(self):
        s = qsim.Statevector.product(qsim.KET0, qsim.KET_PLUS)
        assert mbqc.deterministic_qubits(s, {0, 1}) == {(0, 0)}

    @pytest.mark.parametrize("m", [0, 1])
    def test_teleported_basis_state(self, m):
        # |+> input, angle 0: output X^m H |+> = |m>
        tr = mbqc.run(prepare_cluster(build_path(2)), mbqc.teleport_pattern(), [m])
        assert mbqc.deterministic_qubits(tr.state, {1}) == {(1, m)}

    def test_monotone_under_other_measurements(self, rng):
        g = Graph.from_edges(5, [(0, 1), (2, 3), (3, 4)])
        p = MeasurementPattern(
            (MeasurementStep(0, 0.0), MeasurementStep(2, 0.7), MeasurementStep(3, -1.3, {1})), {1, 4}
        )
        for _ in range(10):
            tr = mbqc.run(prepare_cluster(g), p, rng, keep_states=True)
            prev = set()
            for st_ in tr.states:
                now = mbqc.deterministic_qubits(st_, {1, 4})
                assert prev <= now
                prev = now
            assert (1, tr.records[0].bit) in prev
