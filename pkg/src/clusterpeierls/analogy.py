"""Thermodynamic bookkeeping for the one-way computer.

Units per quantity:

* ``E`` entanglement units, one per unconsumed CZ edge
* ``C`` computational capacity, natural log of a count
* ``I`` bits of deterministically available output
* ``P`` computational potential ``E - C / t`` (entanglement units)
* ``t`` index of the equal-time measurement set, starting at 1

Proportionality constants in the potential and in the critical-time law are
set to 1. Capacity counts choices of *which* unmeasured qubit to measure
next, never choices of angle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional


from . import mbqc
from .entanglement import remaining_entanglement
from .errors import DomainError, SizeError
from .graphgen import Graph, prepare_cluster
from .mbqc import MeasurementPattern
from .qsim import Statevector

CAPACITY_ENUM_LIMIT = 20


@dataclass(frozen=True)
class CapacityQuery:
    graph: Graph
    measured: frozenset = frozenset()
    delta_e: Optional[int] = None  # None: any entanglement drop qualifies

    def __post_init__(self):
        object.__setattr__(self, "measured", frozenset(self.measured))
        if self.delta_e is not None and self.delta_e < 0:
            raise DomainError("delta_e must be >= 0")


@dataclass(frozen=True)
class TraceRecord:
    t: int
    E: int
    C: Optional[float]
    I: int
    P: Optional[float]


@dataclass
class AnalogyTrace:
    records: list
    t_crit: Optional[int]
    t_end: int
    I_max: int
    run: Optional[mbqc.RunTrace] = None

    def column(self, name: str) -> list:
        return [getattr(r, name) for r in self.records]


def computational_potential(E: float, C: float, t: float) -> float:
    if t < 1:
        raise DomainError(f"t must be >= 1, got {t}")
    return E - C / t


def measurement_choices(q: CapacityQuery) -> list:
    """Unmeasured vertices whose measurement would consume ``delta_e`` edges."""
    unmeasured = [v for v in range(q.graph.n_vertices) if v not in q.measured]
    if len(unmeasured) > CAPACITY_ENUM_LIMIT:
        raise SizeError(
            f"{len(unmeasured)} unmeasured vertices exceed the enumeration bound {CAPACITY_ENUM_LIMIT}"
        )
    before = remaining_entanglement(q.graph, q.measured)
    out = []
    for v in unmeasured:
        drop = before - remaining_entanglement(q.graph, q.measured | {v})
        if q.delta_e is None or drop == q.delta_e:
            out.append(v)
    return out


def capacity_bruteforce(q: CapacityQuery) -> float:
    """ln(number of qualifying single-qubit measurement choices); ``-inf`` if none."""
    count = len(measurement_choices(q))
    return math.log(count) if count else float("-inf")


class FinalStepOrigins(NamedTuple):
    open_chain: int
    ring: int
    headline: int


def final_step_origins_1d(N: int) -> FinalStepOrigins:
    """Ways to leave exactly one entangled adjacent pair in a chain of ``N`` qubits.

    Exact counts are ``N - 1`` (open) and ``N`` (ring); the headline value
    ``N`` is the large-N figure, exact for the ring.
    """
    if N < 2:
        raise DomainError(f"N must be >= 2, got {N}")
    ring = N if N >= 3 else 1
    return FinalStepOrigins(N - 1, ring, N)


def delta_p_1d(N: float, t: float) -> float:
    """Potential change 1 - ln(N)/t for the last-pair perturbation of a chain."""
    if N < 2:
        raise DomainError(f"N must be >= 2, got {N}")
    if t < 1:
        raise DomainError(f"t must be >= 1, got {t}")
    return 1.0 - math.log(N) / t


def t_crit_dim(d: int) -> float:
    """(ln d)/d. Note (ln 2)/2 < (ln 3)/3: the law only decreases from d = 3 on."""
    if d < 2:
        raise DomainError(f"dimension must be >= 2, got {d}")
    return math.log(d) / d


def information_bits(state: Statevector, unmeasured: Iterable[int], already_read: int = 0) -> int:
    return already_read + len(mbqc.deterministic_qubits(state, unmeasured))


def _trace_capacity(g: Graph, measured: set) -> float:
    c = capacity_bruteforce(CapacityQuery(g, frozenset(measured)))
    # nothing left to measure: the single terminal configuration, ln 1
    return 0.0 if c == float("-inf") else c


def trace_run(
    g: Graph,
    p: MeasurementPattern,
    outcomes=None,
    track_capacity: bool = True,
    inputs=None,
) -> AnalogyTrace:
    """Run ``p`` on the cluster state of ``g`` and record E, C, I, P per equal-time set.

    The t = 0 record is the fresh cluster with ``P`` undefined. ``C`` is the
    capacity of the remaining resource: ln of the number of unmeasured
    qubits (0 once everything is measured). ``I`` counts output qubits that
    were read out or sit in a Z eigenstate. ``t_crit`` is the first t with
    ``I > 0``.
    """
    state = prepare_cluster(g, inputs)
    run = mbqc.run(state, p, outcomes, keep_states=True)
    outputs = set(p.output_qubits)
    by_t = {}
    for r in run.records:
        by_t.setdefault(r.t, []).append(r)

    measured = set()
    records = []

    def record(t, st):
        E = remaining_entanglement(g, measured)
        read = sum(1 for q in measured if q in outputs)
        I = information_bits(st, sorted(outputs - measured), read)
        C = _trace_capacity(g, measured) if track_capacity else None
        P = computational_potential(E, C, t) if (C is not None and t >= 1) else None
        records.append(TraceRecord(t, E, C, I, P))

    record(0, run.states[0])
    for t in range(1, run.t_end + 1):
        measured.update(r.qubit for r in by_t.get(t, []))
        record(t, run.states[t])
    t_crit = next((r.t for r in records if r.I > 0), None)
    return AnalogyTrace(records, t_crit, run.t_end, len(outputs), run)
