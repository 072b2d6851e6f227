"""Dense statevector simulator.

Basis ordering: qubit 0 is the least-significant bit of the amplitude
index, so ``amplitudes[i]`` is the coefficient of the basis state whose
qubit ``q`` holds ``(i >> q) & 1``.

All operations return a new :class:`Statevector`; the input is never
mutated.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from ._backend import kernels
from .errors import (
    ImpossibleOutcomeError,
    InvalidEdgeError,
    NonUnitaryGateError,
    SizeError,
)

MAX_QUBITS = 26
PHASE_TOL = 1e-10
IMPOSSIBLE_TOL = 1e-12
UNITARY_TOL = 1e-12

OutcomeSource = Union[int, np.random.Generator]


@dataclass(frozen=True)
class MeasurementOutcome:
    bit: int
    probability: float


@dataclass(eq=False)
class Statevector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise SizeError(
                f"{self.n_qubits} qubits need {1 << self.n_qubits} amplitudes, "
                f"got shape {self.amplitudes.shape}"
            )

    @classmethod
    def from_amplitudes(cls, amps, normalize=True) -> "Statevector":
        amps = np.asarray(amps, dtype=np.complex128).ravel()
        n = int(amps.size).bit_length() - 1
        if n < 1 or amps.size != 1 << n:
            raise SizeError(f"amplitude count {amps.size} is not a power of two >= 2")
        _check_cap(n)
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise SizeError("zero vector cannot be normalised")
            amps = amps / norm
        return cls(n, amps.copy())

    @classmethod
    def basis(cls, n: int, index: int = 0) -> "Statevector":
        _check_cap(n)
        amps = np.zeros(1 << n, dtype=np.complex128)
        amps[index] = 1.0
        return cls(n, amps)

    @classmethod
    def product(cls, *qubits) -> "Statevector":
        """Tensor product of single-qubit vectors; ``qubits[0]`` becomes qubit 0."""
        _check_cap(len(qubits))
        amps = np.ones(1, dtype=np.complex128)
        for v in qubits:
            v = np.asarray(v, dtype=np.complex128)
            amps = np.kron(v / np.linalg.norm(v), amps)
        return cls(len(qubits), amps)

    def copy(self) -> "Statevector":
        return Statevector(self.n_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def check_qubit(self, q: int) -> None:
        if not 0 <= q < self.n_qubits:
            raise IndexError(f"qubit {q} out of range for {self.n_qubits} qubits")

    def __repr__(self):
        return f"Statevector(n_qubits={self.n_qubits})"


def _check_cap(n: int) -> None:
    if n < 1 or n > MAX_QUBITS:
        raise SizeError(f"qubit count must be in [1, {MAX_QUBITS}], got {n}")


# --- gates ----------------------------------------------------------------

SQRT1_2 = 1 / np.sqrt(2)
I2 = np.eye(2, dtype=np.complex128)
H = np.array([[1, 1], [1, -1]], dtype=np.complex128) * SQRT1_2
X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)

KET0 = np.array([1, 0], dtype=np.complex128)
KET1 = np.array([0, 1], dtype=np.complex128)
KET_PLUS = np.array([1, 1], dtype=np.complex128) * SQRT1_2
KET_MINUS = np.array([1, -1], dtype=np.complex128) * SQRT1_2


def rz(theta: float) -> np.ndarray:
    """exp(-i theta Z / 2)."""
    return np.array(
        [[np.exp(-0.5j * theta), 0], [0, np.exp(0.5j * theta)]], dtype=np.complex128
    )


def rx(theta: float) -> np.ndarray:
    """exp(-i theta X / 2)."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)


def xy_basis(phi: float) -> np.ndarray:
    """Columns are (|0> + e^{i phi}|1>)/sqrt2 and (|0> - e^{i phi}|1>)/sqrt2."""
    e = np.exp(1j * phi)
    return np.array([[1, 1], [e, -e]], dtype=np.complex128) * SQRT1_2


def check_unitary(g, tol: float = UNITARY_TOL) -> np.ndarray:
    g = np.asarray(g, dtype=np.complex128)
    if g.shape != (2, 2):
        raise SizeError(f"expected a 2x2 gate, got shape {g.shape}")
    if not np.allclose(g.conj().T @ g, I2, rtol=0, atol=tol):
        raise NonUnitaryGateError("gate is not unitary within tolerance")
    return g


# --- operations -----------------------------------------------------------

def new_plus_state(n: int) -> Statevector:
    _check_cap(n)
    return Statevector(n, np.full(1 << n, 2.0 ** (-n / 2), dtype=np.complex128))


def _apply_1q_inplace(amps, q, g):
    kernels.apply_1q(amps, q, g[0, 0], g[0, 1], g[1, 0], g[1, 1])


def apply_1q(state: Statevector, q: int, g) -> Statevector:
    state.check_qubit(q)
    g = check_unitary(g)
    out = state.copy()
    _apply_1q_inplace(out.amplitudes, q, g)
    return out


def apply_cz(state: Statevector, a: int, b: int) -> Statevector:
    state.check_qubit(a)
    state.check_qubit(b)
    if a == b:
        raise InvalidEdgeError(f"CZ needs two distinct qubits, got ({a}, {b})")
    out = state.copy()
    kernels.apply_cz(out.amplitudes, a, b)
    return out


def _draw(p1: float, source: OutcomeSource) -> int:
    if isinstance(source, np.random.Generator):
        return int(source.random() < p1)
    bit = int(source)
    if bit not in (0, 1):
        raise ValueError(f"forced outcome must be 0 or 1, got {source!r}")
    return bit


def _measure_z_inplace(amps: np.ndarray, q: int, source: OutcomeSource) -> MeasurementOutcome:
    p1 = min(max(kernels.prob_one(amps, q), 0.0), 1.0)
    bit = _draw(p1, source)
    p = p1 if bit else 1.0 - p1
    if p < IMPOSSIBLE_TOL:
        raise ImpossibleOutcomeError(f"outcome {bit} on qubit {q} has probability {p:.3g}")
    kernels.collapse_z(amps, q, bit, 1.0 / np.sqrt(p))
    return MeasurementOutcome(bit, p)


def _measure_xy_inplace(amps, q, phi, source) -> MeasurementOutcome:
    v = xy_basis(phi)
    _apply_1q_inplace(amps, q, v.conj().T)
    outcome = _measure_z_inplace(amps, q, source)
    _apply_1q_inplace(amps, q, v)
    return outcome


def measure_z(state: Statevector, q: int, source: OutcomeSource):
    """Projective Z measurement of qubit ``q``.

    ``source`` is either a ``numpy.random.Generator`` (outcome sampled from
    the Born rule) or a forced bit. Returns ``(MeasurementOutcome, state)``
    with the post-measurement state renormalised; the measured qubit stays
    in the register in its collapsed basis state.
    """
    state.check_qubit(q)
    out = state.copy()
    outcome = _measure_z_inplace(out.amplitudes, q, source)
    return outcome, out


def measure_xy(state: Statevector, q: int, phi: float, source: OutcomeSource):
    """Measure qubit ``q`` in the basis (|0> + (-1)^bit e^{i phi}|1>)/sqrt2."""
    state.check_qubit(q)
    out = state.copy()
    outcome = _measure_xy_inplace(out.amplitudes, q, phi, source)
    return outcome, out


def reduced_density(state: Statevector, q: int) -> np.ndarray:
    state.check_qubit(q)
    v = state.amplitudes.reshape(-1, 2, 1 << q)
    return np.einsum("iaj,ibj->ab", v, v.conj())


def equal_up_to_phase(s1: Statevector, s2: Statevector, tol: float = PHASE_TOL) -> bool:
    if s1.n_qubits != s2.n_qubits:
        raise SizeError(f"cannot compare {s1.n_qubits}- and {s2.n_qubits}-qubit states")
    return bool(abs(np.vdot(s1.amplitudes, s2.amplitudes)) >= 1 - tol)


def single_qubit_state(state: Statevector, q: int, tol: float = 1e-10) -> np.ndarray:
    """Pure state vector of qubit ``q`` when it is unentangled with the rest.

    Raises ``ValueError`` if the reduced state is mixed beyond ``tol``.
    """
    rho = reduced_density(state, q)
    w, vecs = np.linalg.eigh(rho)
    if w[-1] < 1 - tol:
        raise ValueError(f"qubit {q} is entangled (largest eigenvalue {w[-1]:.6g})")
    return vecs[:, -1]
