"""Entanglement accounting. All entropies are in bits (log base 2)."""
from __future__ import annotations

from typing import Iterable

import numpy as np

from .errors import PartitionError, SizeError
from .graphgen import Graph
from .qsim import Statevector

EIG_FLOOR = 1e-14
SUPPORT_TOL = 1e-10


def _as_density(m) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise SizeError(f"density matrix must be square, got shape {m.shape}")
    return m


def projector(state: Statevector) -> np.ndarray:
    v = state.amplitudes
    return np.outer(v, v.conj())


def uniform_diagonal(n_qubits: int) -> np.ndarray:
    dim = 1 << n_qubits
    return np.eye(dim, dtype=np.complex128) / dim


def _neg_entropy(rho) -> float:
    w = np.linalg.eigvalsh(rho)
    w = w[w > EIG_FLOOR]
    return float(np.sum(w * np.log2(w)))


def relative_entropy(rho, sigma) -> float:
    """Quantum relative entropy S(rho || sigma) = tr[rho log rho - rho log sigma], in bits.

    Returns ``inf`` when rho has weight outside the support of sigma.
    Eigenvalues of sigma below ``EIG_FLOOR`` define its kernel.
    """
    rho = _as_density(rho)
    sigma = _as_density(sigma)
    if rho.shape != sigma.shape:
        raise SizeError(f"dimension mismatch {rho.shape} vs {sigma.shape}")
    w, v = np.linalg.eigh(sigma)
    # rho expressed in sigma's eigenbasis; only the diagonal enters tr[rho log sigma]
    diag = np.real(np.einsum("ji,jk,ki->i", v.conj(), rho, v))
    support = w > EIG_FLOOR
    if np.any(diag[~support] > SUPPORT_TOL):
        return float("inf")
    cross = float(np.sum(diag[support] * np.log2(w[support])))
    return max(_neg_entropy(rho) - cross, 0.0)


def er_with_reference(state: Statevector, sigma) -> float:
    """S(|psi><psi| || sigma): an upper bound on the relative entropy of entanglement
    when sigma is separable."""
    sigma = _as_density(sigma)
    if sigma.shape[0] != state.amplitudes.size:
        raise SizeError("sigma dimension does not match the state")
    return relative_entropy(projector(state), sigma)


def remaining_entanglement(g: Graph, measured: Iterable[int]) -> int:
    """Edges with both endpoints unmeasured (entanglement units)."""
    measured = set(measured)
    if any(not 0 <= q < g.n_vertices for q in measured):
        raise IndexError("measured qubit outside the graph")
    return sum(1 for a, b in g.edges if a not in measured and b not in measured)


def reduced_state(state: Statevector, part: Iterable[int]) -> np.ndarray:
    """Density matrix of ``part``; the first listed qubit is the most significant index bit."""
    part = list(part)
    n = state.n_qubits
    # tensor axis k holds qubit n-1-k
    psi = state.amplitudes.reshape((2,) * n)
    axes = [n - 1 - q for q in part]
    rest = [a for a in range(n) if a not in axes]
    m = np.transpose(psi, axes + rest).reshape(1 << len(part), -1)
    return m @ m.conj().T


def bipartite_entropy(state: Statevector, part_a: Iterable[int]) -> float:
    """Von Neumann entropy (bits) of the reduced state on ``part_a``."""
    part_a = sorted(set(part_a))
    n = state.n_qubits
    if not part_a or len(part_a) >= n:
        raise PartitionError("part_a must be a non-empty proper subset of the qubits")
    if any(not 0 <= q < n for q in part_a):
        raise IndexError("partition qubit out of range")
    psi = state.amplitudes.reshape((2,) * n)
    axes = [n - 1 - q for q in part_a]
    rest = [a for a in range(n) if a not in axes]
    m = np.transpose(psi, axes + rest).reshape(1 << len(part_a), -1)
    s = np.linalg.svd(m, compute_uv=False) ** 2
    s = s[s > EIG_FLOOR]
    return float(-np.sum(s * np.log2(s)))
