"""Compiled hot loops (numba). Mirrors ``_kernels_numpy`` function by function.

Qubit 0 is the least-significant bit of the amplitude index.
"""
from numba import njit

NAME = "numba"


@njit(cache=True, nogil=True)
def apply_1q(amps, q, g00, g01, g10, g11):
    stride = 1 << q
    low = stride - 1
    for i in range(amps.shape[0] >> 1):
        i0 = ((i >> q) << (q + 1)) | (i & low)
        i1 = i0 | stride
        a0 = amps[i0]
        a1 = amps[i1]
        amps[i0] = g00 * a0 + g01 * a1
        amps[i1] = g10 * a0 + g11 * a1


@njit(cache=True, nogil=True)
def apply_cz(amps, a, b):
    mask = (1 << a) | (1 << b)
    for i in range(amps.shape[0]):
        if i & mask == mask:
            amps[i] = -amps[i]


@njit(cache=True, nogil=True)
def prob_one(amps, q):
    stride = 1 << q
    low = stride - 1
    total = 0.0
    for i in range(amps.shape[0] >> 1):
        i1 = ((i >> q) << (q + 1)) | (i & low) | stride
        a = amps[i1]
        total += a.real * a.real + a.imag * a.imag
    return total


@njit(cache=True, nogil=True)
def collapse_z(amps, q, bit, scale):
    for i in range(amps.shape[0]):
        if ((i >> q) & 1) == bit:
            amps[i] = amps[i] * scale
        else:
            amps[i] = 0.0


@njit(cache=True, nogil=True)
def metropolis_sweeps(spins, neighbors, sites, table, uniforms, bond_sum, mag_out, bond_out, acc_out):
    """Run ``sites.shape[0]`` sweeps in place.

    Proposal ``k`` of sweep ``s`` targets ``sites[s, k]`` and is accepted when
    ``uniforms[s, k] < table[s_i*h + zmax]``, the acceptance probability of
    flipping a spin with value ``s_i`` and local field ``h``. ``spins``
    carries a trailing sentinel 0 used as padding in ``neighbors``. Per-sweep
    magnetisation, bond sum and accepted-flip count go to the ``*_out``
    arrays. Returns the updated bond sum.
    """
    n = neighbors.shape[0]
    z = neighbors.shape[1]
    zmax = (table.shape[0] - 1) // 2
    for sweep in range(sites.shape[0]):
        acc = 0
        for k in range(sites.shape[1]):
            i = sites[sweep, k]
            h = 0
            for j in range(z):
                h += spins[neighbors[i, j]]
            x = spins[i] * h
            if uniforms[sweep, k] < table[x + zmax]:
                spins[i] = -spins[i]
                bond_sum -= 2 * x
                acc += 1
        m = 0
        for i in range(n):
            m += spins[i]
        mag_out[sweep] = m
        bond_out[sweep] = bond_sum
        acc_out[sweep] = acc
    return bond_sum
