"""Connectivity graphs and cluster-state preparation.

Lattice vertices are indexed row-major from their coordinates: the last
coordinate varies fastest.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from . import qsim
from ._backend import kernels
from .errors import InvalidEdgeError, ParameterError, SizeError


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph. ``edges`` holds sorted ``(i, j)`` pairs, ``i < j``."""

    n_vertices: int
    edges: tuple
    coords: Optional[tuple] = None

    def __post_init__(self):
        if self.n_vertices < 0:
            raise SizeError("vertex count must be non-negative")
        seen = set()
        for i, j in self.edges:
            if i == j:
                raise InvalidEdgeError(f"self-loop at vertex {i}")
            if not (0 <= i < self.n_vertices and 0 <= j < self.n_vertices):
                raise InvalidEdgeError(f"edge ({i}, {j}) out of range")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise InvalidEdgeError(f"duplicate edge {key}")
            seen.add(key)
        object.__setattr__(self, "edges", tuple(sorted(seen)))
        if self.coords is not None and len(self.coords) != self.n_vertices:
            raise SizeError("coords must give one coordinate tuple per vertex")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], coords=None) -> "Graph":
        edges = tuple((int(i), int(j)) for i, j in edges)
        if coords is not None:
            coords = tuple(tuple(int(x) for x in c) for c in coords)
        return cls(int(n), edges, coords)

    def neighbors(self, v: int) -> list:
        return [j if i == v else i for i, j in self.edges if v in (i, j)]

    def degree(self, v: int) -> int:
        return sum(v in e for e in self.edges)

    def adjacency(self) -> list:
        adj = [[] for _ in range(self.n_vertices)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def is_connected(self) -> bool:
        if self.n_vertices <= 1:
            return True
        adj = self.adjacency()
        seen = {0}
        stack = [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n_vertices

    # JSON: {"n": int, "edges": [[i, j], ...], "coords": [[...], ...]}
    def to_dict(self) -> dict:
        d = {"n": self.n_vertices, "edges": [list(e) for e in self.edges]}
        if self.coords is not None:
            d["coords"] = [list(c) for c in self.coords]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: Mapping) -> "Graph":
        unknown = set(d) - {"n", "edges", "coords"}
        if unknown:
            raise ValueError(f"unknown graph keys: {sorted(unknown)}")
        return cls.from_edges(d["n"], d.get("edges", []), d.get("coords"))

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class LatticeSpec:
    sides: tuple
    boundary: str = "open"

    def __post_init__(self):
        object.__setattr__(self, "sides", tuple(int(s) for s in self.sides))
        if len(self.sides) < 1:
            raise SizeError("lattice dimension must be >= 1")
        if any(s < 1 for s in self.sides):
            raise SizeError(f"lattice sides must be >= 1, got {self.sides}")
        if self.boundary not in ("open", "periodic"):
            raise ParameterError(f"boundary must be 'open' or 'periodic', got {self.boundary!r}")

    @property
    def dimension(self) -> int:
        return len(self.sides)

    @property
    def n_sites(self) -> int:
        return int(np.prod(self.sides))

    def coordinates(self):
        return list(itertools.product(*(range(s) for s in self.sides)))

    def index(self, coord) -> int:
        return int(np.ravel_multi_index(tuple(coord), self.sides))


def lattice_bonds(spec: LatticeSpec):
    """Forward bonds ``(site, site + e_k)`` for every site and axis.

    Periodic wrap bonds are included even when they duplicate an existing
    pair (side 2) or close on the site itself (side 1); the Ising engine
    counts bonds with this multiplicity. :func:`build_lattice` deduplicates.
    """
    idx = np.arange(spec.n_sites).reshape(spec.sides)
    bonds = []
    for axis, side in enumerate(spec.sides):
        if spec.boundary == "periodic":
            a, b = idx, np.roll(idx, -1, axis=axis)
        else:
            sl = [slice(None)] * spec.dimension
            sl[axis] = slice(0, side - 1)
            a = idx[tuple(sl)]
            sl[axis] = slice(1, side)
            b = idx[tuple(sl)]
        bonds.append(np.stack([a.ravel(), b.ravel()], axis=1))
    return np.concatenate(bonds, axis=0) if bonds else np.empty((0, 2), dtype=int)


def build_lattice(spec: LatticeSpec) -> Graph:
    edges = set()
    for a, b in lattice_bonds(spec):
        a, b = int(a), int(b)
        if a != b:
            edges.add((min(a, b), max(a, b)))
    return Graph(spec.n_sites, tuple(edges), tuple(spec.coordinates()))


def build_path(n: int) -> Graph:
    return build_lattice(LatticeSpec((n,)))


def build_ring(n: int) -> Graph:
    if n < 3:
        raise SizeError(f"a ring needs at least 3 vertices, got {n}")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def build_long_range(n: int, alpha: float, p0: float, seed) -> Graph:
    """Random 1D graph with power-law decaying long-range edges.

    Every pair at distance ``r >= 2`` gets an edge independently with
    probability ``min(1, p0 * r**-alpha)``; nearest neighbours are always
    joined. Pairs are drawn in ``numpy.triu_indices`` order, so a given
    seed always yields the same graph.
    """
    if n < 2:
        raise SizeError(f"need at least 2 vertices, got {n}")
    if not (alpha >= 0 and np.isfinite(alpha)):
        raise ParameterError(f"alpha must be finite and >= 0, got {alpha}")
    if not 0 < p0 <= 1:
        raise ParameterError(f"p0 must lie in (0, 1], got {p0}")
    rng = np.random.default_rng(seed)
    i, j = np.triu_indices(n, k=1)
    r = (j - i).astype(float)
    prob = np.minimum(1.0, p0 * r ** (-alpha))
    prob[r == 1] = 1.0
    keep = rng.random(i.size) < prob
    edges = tuple(zip(i[keep].tolist(), j[keep].tolist()))
    return Graph(n, edges, tuple((k,) for k in range(n)))


def expected_long_range_degree(n: int, alpha: float, p0: float) -> float:
    """Exact mean number of distance->=2 neighbours per vertex for :func:`build_long_range`."""
    r = np.arange(2, n, dtype=float)
    return float(2.0 / n * np.sum((n - r) * np.minimum(1.0, p0 * r ** (-alpha))))


def edge_count(g: Graph) -> int:
    return len(g.edges)


def prepare_cluster(g: Graph, inputs: Optional[Mapping[int, Sequence[complex]]] = None) -> qsim.Statevector:
    """Graph state of ``g``: |+> on every vertex, then CZ on every edge.

    ``inputs`` optionally replaces |+> on selected vertices by an arbitrary
    single-qubit state before the CZ layer (input injection).
    """
    n = g.n_vertices
    qsim._check_cap(n)
    if inputs:
        vecs = [qsim.KET_PLUS] * n
        for q, v in inputs.items():
            if not 0 <= q < n:
                raise IndexError(f"input qubit {q} out of range")
            vecs[q] = np.asarray(v, dtype=np.complex128)
        state = qsim.Statevector.product(*vecs)
    else:
        state = qsim.new_plus_state(n)
    for a, b in g.edges:
        kernels.apply_cz(state.amplitudes, a, b)
    return state
