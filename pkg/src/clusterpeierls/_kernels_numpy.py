"""Pure-numpy versions of the hot loops in ``_kernels_numba``.

Same signatures and in-place semantics. The Metropolis kernel consumes the
same pre-drawn sites and uniforms as the compiled one and so reproduces its
spin trajectory bit for bit; it loops in Python and is much slower.
"""
import numpy as np

NAME = "numpy"


def _view(amps, q):
    return amps.reshape(-1, 2, 1 << q)


def apply_1q(amps, q, g00, g01, g10, g11):
    v = _view(amps, q)
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :].copy()
    v[:, 0, :] = g00 * a0 + g01 * a1
    v[:, 1, :] = g10 * a0 + g11 * a1


def apply_cz(amps, a, b):
    idx = np.arange(amps.shape[0])
    mask = (1 << a) | (1 << b)
    sel = (idx & mask) == mask
    amps[sel] = np.negative(amps[sel])


def prob_one(amps, q):
    a = _view(amps, q)[:, 1, :]
    return float(np.sum(a.real * a.real + a.imag * a.imag))


def collapse_z(amps, q, bit, scale):
    v = _view(amps, q)
    v[:, 1 - bit, :] = 0.0
    v[:, bit, :] *= scale


def metropolis_sweeps(spins, neighbors, sites, table, uniforms, bond_sum, mag_out, bond_out, acc_out):
    n = neighbors.shape[0]
    zmax = (table.shape[0] - 1) // 2
    acc_p = table.tolist()
    nbrs = [[int(j) for j in row] for row in neighbors]
    s = spins.tolist()
    for sweep in range(sites.shape[0]):
        acc = 0
        for i, u in zip(sites[sweep].tolist(), uniforms[sweep].tolist()):
            x = s[i] * sum(s[j] for j in nbrs[i])
            if u < acc_p[x + zmax]:
                s[i] = -s[i]
                bond_sum -= 2 * x
                acc += 1
        mag_out[sweep] = sum(s[:n])
        bond_out[sweep] = bond_sum
        acc_out[sweep] = acc
    spins[:] = s
    return bond_sum
