"""One-way computation engine: adaptive patterns, scheduling, Pauli frames.

Sign convention. Measuring a chain qubit in the x-y plane at angle ``phi``
with outcome ``m`` teleports its state to the next qubit as
``X^m H Rz(-phi)``, with ``Rz(t) = exp(-i t Z / 2)``. A pattern that should
apply ``Rz(a)`` therefore measures at ``-a``.

Outcomes are consumed in pattern-step order when forced (a sequence of
bits indexed by step); a ``numpy.random.Generator`` samples them instead.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from . import qsim
from .errors import DomainError, PatternError
from .qsim import Statevector

XY = "xy"
Z = "z"


@dataclass(frozen=True)
class MeasurementStep:
    qubit: int
    base_angle: float = 0.0
    x_dependencies: frozenset = frozenset()
    z_dependencies: frozenset = frozenset()
    kind: str = XY

    def __post_init__(self):
        object.__setattr__(self, "x_dependencies", frozenset(self.x_dependencies))
        object.__setattr__(self, "z_dependencies", frozenset(self.z_dependencies))
        if self.kind not in (XY, Z):
            raise PatternError(f"unknown measurement kind {self.kind!r}")

    @property
    def dependencies(self) -> frozenset:
        return self.x_dependencies | self.z_dependencies


@dataclass(frozen=True)
class MeasurementPattern:
    """Ordered adaptive measurements plus the output Pauli-frame wiring.

    ``x_corrections[q]`` / ``z_corrections[q]`` list the steps whose outcome
    parity gives the X / Z power of the byproduct on output qubit ``q``.
    """

    steps: tuple
    output_qubits: frozenset = frozenset()
    x_corrections: Mapping = field(default_factory=dict)
    z_corrections: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        object.__setattr__(self, "output_qubits", frozenset(self.output_qubits))
        xc = {int(q): frozenset(v) for q, v in dict(self.x_corrections).items()}
        zc = {int(q): frozenset(v) for q, v in dict(self.z_corrections).items()}
        object.__setattr__(self, "x_corrections", xc)
        object.__setattr__(self, "z_corrections", zc)
        self.validate()

    def validate(self) -> None:
        seen = set()
        n = len(self.steps)
        for k, s in enumerate(self.steps):
            if s.qubit in seen:
                raise PatternError(f"qubit {s.qubit} measured twice")
            seen.add(s.qubit)
            if any(not 0 <= d < k for d in s.dependencies):
                raise PatternError(f"step {k} depends on a step that does not precede it")
            if s.kind == XY and s.qubit in self.output_qubits:
                raise PatternError(f"output qubit {s.qubit} used as a computational step")
        for table in (self.x_corrections, self.z_corrections):
            for q, deps in table.items():
                if q not in self.output_qubits:
                    raise PatternError(f"correction on non-output qubit {q}")
                if any(not 0 <= d < n for d in deps):
                    raise PatternError(f"correction of qubit {q} refers to a missing step")

    @property
    def qubits(self) -> set:
        return {s.qubit for s in self.steps} | set(self.output_qubits)

    # JSON: {"steps": [{"q", "angle", "xdep", "zdep", "kind"}], "outputs": [...],
    #        optional "xcorr"/"zcorr": {"<qubit>": [step, ...]}}
    def to_dict(self) -> dict:
        d = {
            "steps": [
                {
                    "q": s.qubit,
                    "angle": float(s.base_angle),
                    "xdep": sorted(s.x_dependencies),
                    "zdep": sorted(s.z_dependencies),
                    "kind": s.kind,
                }
                for s in self.steps
            ],
            "outputs": sorted(self.output_qubits),
        }
        if any(self.x_corrections.values()):
            d["xcorr"] = {str(q): sorted(v) for q, v in sorted(self.x_corrections.items())}
        if any(self.z_corrections.values()):
            d["zcorr"] = {str(q): sorted(v) for q, v in sorted(self.z_corrections.items())}
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: Mapping) -> "MeasurementPattern":
        unknown = set(d) - {"steps", "outputs", "xcorr", "zcorr"}
        if unknown:
            raise PatternError(f"unknown pattern keys: {sorted(unknown)}")
        steps = []
        for k, s in enumerate(d.get("steps", [])):
            bad = set(s) - {"q", "angle", "xdep", "zdep", "kind"}
            if bad:
                raise PatternError(f"steps[{k}]: unknown keys {sorted(bad)}")
            if "q" not in s:
                raise PatternError(f"steps[{k}]: missing 'q'")
            steps.append(
                MeasurementStep(
                    int(s["q"]),
                    float(s.get("angle", 0.0)),
                    frozenset(int(x) for x in s.get("xdep", [])),
                    frozenset(int(x) for x in s.get("zdep", [])),
                    s.get("kind", XY),
                )
            )
        return cls(
            tuple(steps),
            frozenset(int(q) for q in d.get("outputs", [])),
            {int(q): v for q, v in d.get("xcorr", {}).items()},
            {int(q): v for q, v in d.get("zcorr", {}).items()},
        )

    @classmethod
    def from_json(cls, text: str) -> "MeasurementPattern":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class PauliFrame:
    """Byproduct ``X^x Z^z`` per output qubit, as ``{qubit: (x, z)}``."""

    powers: Mapping

    def x_power(self, q: int) -> int:
        return self.powers[q][0]

    def z_power(self, q: int) -> int:
        return self.powers[q][1]


@dataclass(frozen=True)
class StepRecord:
    t: int
    step: int
    qubit: int
    kind: str
    angle: float
    bit: int
    probability: float


@dataclass
class RunTrace:
    records: list
    frame: PauliFrame
    state: Statevector
    # state after each equal-time set; states[0] is the input
    states: list = field(default_factory=list, repr=False)

    def outcomes(self) -> list:
        by_step = sorted(self.records, key=lambda r: r.step)
        return [r.bit for r in by_step]

    @property
    def t_end(self) -> int:
        return max((r.t for r in self.records), default=0)


def schedule(p: MeasurementPattern, readout_last: bool = True) -> list:
    """Partition step indices into equal-time sets Q_1..Q_T.

    Each step lands in the earliest set after all of its dependencies, so T
    is the longest dependency chain. With ``readout_last`` every Z readout
    step is deferred to one final set after all computational steps.
    """
    level = []
    for s in p.steps:
        level.append(1 + max((level[d] for d in s.dependencies), default=0))
    if readout_last:
        comp = [lv for lv, s in zip(level, p.steps) if s.kind == XY]
        last = max(comp, default=0) + 1
        for k, s in enumerate(p.steps):
            if s.kind == Z:
                level[k] = max(level[k], last)
    if not level:
        return []
    sets = [[] for _ in range(max(level))]
    for k, lv in enumerate(level):
        sets[lv - 1].append(k)
    return [q for q in sets if q]


def effective_angle(step: MeasurementStep, outcomes: Mapping[int, int]) -> float:
    sx = sum(outcomes[d] for d in step.x_dependencies) & 1
    sz = sum(outcomes[d] for d in step.z_dependencies) & 1
    return (-1) ** sx * step.base_angle + np.pi * sz


def _frame(p: MeasurementPattern, outcomes: Mapping[int, int]) -> PauliFrame:
    powers = {}
    for q in sorted(p.output_qubits):
        x = sum(outcomes[d] for d in p.x_corrections.get(q, ())) & 1
        z = sum(outcomes[d] for d in p.z_corrections.get(q, ())) & 1
        powers[q] = (x, z)
    return PauliFrame(powers)


def run(state: Statevector, p: MeasurementPattern, outcomes=None, keep_states: bool = False) -> RunTrace:
    """Execute ``p`` on ``state`` one equal-time set at a time.

    Parameters
    ----------
    state : Statevector
        Prepared resource state; not modified.
    p : MeasurementPattern
    outcomes : numpy.random.Generator or sequence of int, optional
        Outcome source. A sequence forces ``outcomes[k]`` for step ``k``.
        ``None`` uses a fresh unseeded generator.
    keep_states : bool
        Record a copy of the state after every equal-time set.

    Returns
    -------
    RunTrace
    """
    for q in p.qubits:
        state.check_qubit(q)
    if outcomes is None:
        outcomes = np.random.default_rng()
    if not isinstance(outcomes, np.random.Generator) and len(outcomes) != len(p.steps):
        raise PatternError(f"need {len(p.steps)} forced outcomes, got {len(outcomes)}")
    work = state.copy()
    amps = work.amplitudes
    results = {}
    records = []
    states = [state.copy()] if keep_states else []
    for t, qset in enumerate(schedule(p), start=1):
        for k in qset:
            step = p.steps[k]
            src = outcomes if isinstance(outcomes, np.random.Generator) else outcomes[k]
            if step.kind == XY:
                phi = effective_angle(step, results)
                res = qsim._measure_xy_inplace(amps, step.qubit, phi, src)
            else:
                phi = 0.0
                res = qsim._measure_z_inplace(amps, step.qubit, src)
            results[k] = res.bit
            records.append(StepRecord(t, k, step.qubit, step.kind, phi, res.bit, res.probability))
        if keep_states:
            states.append(work.copy())
    return RunTrace(records, _frame(p, results), work, states)


def compile_su2_pattern(alpha: float, beta: float, gamma: float) -> MeasurementPattern:
    """Four-qubit chain pattern for ``Rz(gamma) Rx(beta) Rz(alpha)``.

    Qubit 0 carries the input and qubit 3 the output. After byproduct
    correction the output holds ``H Rz(gamma) Rx(beta) Rz(alpha) |psi>``
    for every outcome string; the leading H is fixed by the chain length.
    """
    steps = (
        MeasurementStep(0, -alpha),
        MeasurementStep(1, -beta, x_dependencies={0}),
        MeasurementStep(2, -gamma, x_dependencies={1}),
    )
    return MeasurementPattern(steps, {3}, x_corrections={3: {0, 2}}, z_corrections={3: {1}})


def compile_su2_pattern_static(alpha: float, beta: float, gamma: float) -> MeasurementPattern:
    """Same chain without feedforward: the outcome-dependent map of :func:`predicted_unitary`."""
    steps = tuple(MeasurementStep(q, -a) for q, a in enumerate((alpha, beta, gamma)))
    return MeasurementPattern(steps, {3}, x_corrections={3: {0, 2}}, z_corrections={3: {1}})


def teleport_pattern(readout: bool = False) -> MeasurementPattern:
    """Two-qubit chain: measure qubit 0 at angle 0, output on qubit 1."""
    steps = [MeasurementStep(0, 0.0)]
    if readout:
        steps.append(MeasurementStep(1, kind=Z))
    return MeasurementPattern(tuple(steps), {1}, x_corrections={1: {0}})


def predicted_unitary(alpha, beta, gamma, m1: int, m2: int, m3: int) -> np.ndarray:
    """X^m3 Z^m2 X^m1 H Rz((-1)^m2 gamma) Rx((-1)^m1 beta) Rz(alpha)."""
    for m in (m1, m2, m3):
        if m not in (0, 1):
            raise ValueError(f"outcome bits must be 0 or 1, got {m}")
    X, Z = qsim.X, qsim.Z
    byproduct = np.linalg.matrix_power(X, m3) @ np.linalg.matrix_power(Z, m2) @ np.linalg.matrix_power(X, m1)
    return (
        byproduct
        @ qsim.H
        @ qsim.rz((-1) ** m2 * gamma)
        @ qsim.rx((-1) ** m1 * beta)
        @ qsim.rz(alpha)
    )


def byproduct_correction(frame: PauliFrame, q: int) -> np.ndarray:
    """``X^x Z^z`` for output ``q``; applying it again undoes the byproduct up to phase."""
    if q not in frame.powers:
        raise DomainError(f"qubit {q} is not an output of this frame")
    x, z = frame.powers[q]
    return np.linalg.matrix_power(qsim.X, x) @ np.linalg.matrix_power(qsim.Z, z)


def corrected_state(trace: RunTrace) -> Statevector:
    """Final state with every output's byproduct undone."""
    out = trace.state
    for q in sorted(trace.frame.powers):
        out = qsim.apply_1q(out, q, byproduct_correction(trace.frame, q))
    return out


def deterministic_qubits(state: Statevector, unmeasured: Iterable[int], tol: float = 1e-10) -> set:
    """``{(qubit, bit)}`` for unmeasured qubits sitting in a Z eigenstate."""
    found = set()
    for q in unmeasured:
        rho = qsim.reduced_density(state, q)
        if rho[0, 0].real >= 1 - tol:
            found.add((q, 0))
        elif rho[1, 1].real >= 1 - tol:
            found.add((q, 1))
    return found
