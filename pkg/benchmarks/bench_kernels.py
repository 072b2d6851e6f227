"""Compiled vs pure-numpy kernels on the two hot paths.

    python3 benchmarks/bench_kernels.py [--qubits 20] [--lattice 32] [--sweeps 200]

Times are best-of-``--repeat`` wall clock; the first numba call is made
before timing so compilation is excluded.
"""
import argparse
import time

import numpy as np

from clusterpeierls import _kernels_numba, _kernels_numpy, ising
from clusterpeierls.graphgen import LatticeSpec
from clusterpeierls.qsim import H

BACKENDS = {"numba": _kernels_numba, "numpy": _kernels_numpy}


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def statevector_layer(kern, n):
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[0] = 1.0

    def go():
        for q in range(n):
            kern.apply_1q(amps, q, H[0, 0], H[0, 1], H[1, 0], H[1, 1])
        for q in range(n - 1):
            kern.apply_cz(amps, q, q + 1)
        kern.prob_one(amps, n // 2)

    return go


def metropolis(name, L, sweeps):
    lat = LatticeSpec((L, L), "periodic")
    return lambda: ising.simulate(lat, 1.0, 2.3, sweeps, 0, seed=0, backend=name)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--qubits", type=int, default=20)
    ap.add_argument("--lattice", type=int, default=32)
    ap.add_argument("--sweeps", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    # warm-up compiles every numba kernel
    statevector_layer(_kernels_numba, 3)()
    metropolis("numba", 4, 2)()

    rows = []
    for label, make in (
        (f"H + CZ layer, {args.qubits} qubits", lambda name: statevector_layer(BACKENDS[name], args.qubits)),
        (f"Metropolis {args.lattice}x{args.lattice}, {args.sweeps} sweeps", lambda name: metropolis(name, args.lattice, args.sweeps)),
    ):
        t = {name: best_of(make(name), args.repeat) for name in BACKENDS}
        rows.append((label, t["numba"], t["numpy"], t["numpy"] / t["numba"]))

    print(f"{'workload':<40} {'numba s':>10} {'numpy s':>10} {'speedup':>9}")
    for label, tn, tp, s in rows:
        print(f"{label:<40} {tn:>10.4f} {tp:>10.4f} {s:>8.1f}x")


if __name__ == "__main__":
    main()
