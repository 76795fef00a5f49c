"""Brute-force reference computations, independent of the package internals.

Nothing here imports gaussbound: each oracle takes a different route to the
quantity it checks (raw series, Laplace expansion, general eigensolvers).
"""

import math
from itertools import permutations

import numpy as np


def omega(n):
    out = np.zeros((2 * n, 2 * n))
    for k in range(n):
        out[2 * k, 2 * k + 1] = 1.0
        out[2 * k + 1, 2 * k] = -1.0
    return out


def symplectic_eigenvalues(V):
    """Moduli of the eigenvalues of Omega V from a general (non-symmetric) eigensolver."""
    n = V.shape[0] // 2
    ev = np.linalg.eigvals(omega(n) @ V)
    return np.sort(np.abs(ev.imag))[::-1][::2]


def cofactor_det(M):
    M = [list(map(float, row)) for row in np.asarray(M)]
    if len(M) == 1:
        return M[0][0]
    total = 0.0
    for j in range(len(M)):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        total += (-1) ** j * M[0][j] * cofactor_det(minor)
    return total


def leibniz_det(M):
    M = np.asarray(M, dtype=float)
    m = M.shape[0]
    total = 0.0
    for perm in permutations(range(m)):
        inv = sum(1 for i in range(m) for j in range(i + 1, m) if perm[i] > perm[j])
        total += (-1) ** inv * math.prod(M[i, perm[i]] for i in range(m))
    return total


def cofactor_inverse(M):
    M = np.asarray(M, dtype=float)
    m = M.shape[0]
    det = cofactor_det(M)
    adj = np.empty_like(M)
    for i in range(m):
        for j in range(m):
            minor = np.delete(np.delete(M, i, axis=0), j, axis=1)
            adj[j, i] = (-1) ** (i + j) * (cofactor_det(minor) if m > 1 else 1.0)
    return adj / det


def thermal_populations(nu, terms=4000):
    eta = (nu - 1.0) / (nu + 1.0)
    j = np.arange(terms)
    if eta == 0:
        return (j == 0).astype(float)
    return (1.0 - eta) * eta ** j


def thermal_trace_power(nu, p, terms=4000):
    """``sum_j [(1 - eta) eta^j]^p`` summed directly."""
    pops = thermal_populations(nu, terms)
    pops = pops[pops > 0]
    return float(np.sum(pops ** p))


def thermal_power_eigenvalue(nu, p, terms=4000):
    """Symplectic eigenvalue of the normalised power, from its mean photon number.

    A single-mode state diagonal in the number basis with populations
    ``q_j`` is thermal with eigenvalue ``2 <n> + 1``.
    """
    pops = thermal_populations(nu, terms)
    pops = np.where(pops > 0, pops, 0.0) ** p
    pops = pops / pops.sum()
    return float(2.0 * np.sum(np.arange(pops.size) * pops) + 1.0)


def thermal_pair_qs(nu_a, nu_b, s, terms=4000):
    a = thermal_populations(nu_a, terms)
    b = thermal_populations(nu_b, terms)
    with np.errstate(divide="ignore"):
        pa = np.where(a > 0, a ** s, 0.0) if s > 0 else (a > 0).astype(float)
        pb = np.where(b > 0, b ** (1 - s), 0.0) if s < 1 else (b > 0).astype(float)
    return float(np.sum(pa * pb))


def coherent_amplitudes(alpha, terms=200):
    """Number-basis amplitudes built by the recursion ``c_j = c_{j-1} alpha / sqrt(j)``."""
    c = np.empty(terms, dtype=complex)
    c[0] = np.exp(-0.5 * abs(alpha) ** 2)
    for j in range(1, terms):
        c[j] = c[j - 1] * alpha / np.sqrt(j)
    return c


def coherent_overlap_sq(alpha, beta, terms=200):
    return float(abs(np.vdot(coherent_amplitudes(alpha, terms), coherent_amplitudes(beta, terms))) ** 2)


def vacuum_thermal_helstrom(nu, terms=4000):
    """``(1 - ||sigma - |0><0| ||_1 / 2) / 2`` from the diagonal entries."""
    gamma = thermal_populations(nu, terms).copy()
    gamma[0] -= 1.0
    return 0.5 * (1.0 - 0.5 * float(np.sum(np.abs(gamma))))


def golden_free_minimum(f, lo=0.0, hi=1.0, points=200001):
    """Dense-grid minimum, for checking a refined search."""
    s = np.linspace(lo, hi, points)
    vals = np.array([f(x) for x in s])
    i = int(np.argmin(vals))
    return s[i], vals[i]
