"""Truncated Fock-space oracle for single-mode states.

Brute-force density matrices in the number basis, used to check the Gaussian
closed forms: exact Helstrom error, trace norms and ``Tr(rho^s sigma^(1-s))``.
Only centred thermal states and coherent states are representable here.
Matrices are never renormalised after truncation; the discarded probability
is carried in ``tail_mass``.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, InvalidArgumentError, TailMassError, UnsupportedPairError

MAX_DIM = 512
DEFAULT_TAIL_CAP = 1e-12
PSD_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class FockMatrix:
    """Hermitian matrix in a truncated number basis."""

    entries: np.ndarray
    tail_mass: float = 0.0

    @property
    def dim(self):
        return self.entries.shape[0]

    @property
    def trace(self):
        return float(np.trace(self.entries).real)

    def padded(self, dim):
        """Copy embedded in a larger basis, zeros in the new rows and columns."""
        if dim < self.dim:
            raise InvalidArgumentError(f"cannot pad dimension {self.dim} down to {dim}")
        out = np.zeros((dim, dim), dtype=complex)
        out[: self.dim, : self.dim] = self.entries
        return FockMatrix(out, self.tail_mass)


def _is_diagonal(a):
    return not np.any(a - np.diag(np.diag(a)))


def bose_ratio(nu):
    """``eta = (nu - 1) / (nu + 1)``, the ratio of successive thermal populations."""
    if nu < 1:
        raise DomainError(f"symplectic eigenvalue must be >= 1, got {nu}")
    return (nu - 1.0) / (nu + 1.0)


def thermal_dim(nu, tail_cap=DEFAULT_TAIL_CAP):
    """Smallest ``D`` with thermal tail ``eta^D < tail_cap``."""
    eta = bose_ratio(nu)
    if eta == 0:
        return 1
    return int(np.floor(np.log(tail_cap) / np.log(eta))) + 1


def thermal_fock(nu, tail_cap=DEFAULT_TAIL_CAP, dim=None):
    """Thermal state ``diag((1 - eta) eta^j)`` truncated to tail mass below ``tail_cap``.

    Args:
        nu (float): symplectic eigenvalue, ``>= 1``
        tail_cap (float): bound on the discarded probability, in ``(0, 1e-6]``
        dim (int): use at least this many levels (populations continue, not zeros)

    Returns:
        FockMatrix
    """
    if not 0 < tail_cap <= 1e-6:
        raise InvalidArgumentError(f"tail_cap must lie in (0, 1e-6], got {tail_cap}")
    eta = bose_ratio(nu)
    D = max(thermal_dim(nu, tail_cap), dim or 0)
    if D > MAX_DIM:
        raise TailMassError(
            f"thermal nu={nu} needs {D} levels for tail {tail_cap:g}; cap is {MAX_DIM}"
        )
    j = np.arange(D)
    if eta == 0:
        pops = (j == 0).astype(float)
    else:
        pops = (1.0 - eta) * np.exp(j * np.log(eta))
    return FockMatrix(np.diag(pops).astype(complex), float(eta**D))


def _coherent_vector(alpha, D):
    j = np.arange(D)
    if alpha == 0:
        return (j == 0).astype(complex)
    r, theta = abs(alpha), np.angle(alpha)
    mag = np.exp(-0.5 * r * r + j * np.log(r) - 0.5 * gammaln(j + 1))
    return mag * np.exp(1j * j * theta)


def coherent_dim(alpha, tail_cap=DEFAULT_TAIL_CAP):
    """Smallest ``D`` whose Poisson tail for ``|alpha|^2`` is below ``tail_cap``."""
    c = _coherent_vector(alpha, MAX_DIM + 1)
    # tail after D levels, summed from the small end to keep precision
    tails = np.cumsum((np.abs(c) ** 2)[::-1])[::-1]
    ok = np.flatnonzero(tails < tail_cap)
    if ok.size == 0:
        raise TailMassError(f"coherent |alpha|={abs(alpha):g} does not fit in {MAX_DIM} levels")
    return max(int(ok[0]), 1)


def coherent_fock(mean, dim=None, tail_cap=DEFAULT_TAIL_CAP):
    """Projector onto the coherent state with quadrature mean ``(2 Re a, 2 Im a)``.

    Raises :class:`TailMassError` if ``dim`` is too small to hold the state.
    """
    mean = np.ravel(np.asarray(mean, dtype=float))
    if mean.shape != (2,):
        raise InvalidArgumentError(f"single-mode mean must have length 2, got {mean.shape}")
    alpha = complex(mean[0], mean[1]) / 2.0
    need = coherent_dim(alpha, tail_cap)
    if dim is None:
        dim = need
    elif dim < need:
        raise TailMassError(f"dimension {dim} is below the {need} levels needed for |alpha|={abs(alpha):g}")
    if dim > MAX_DIM:
        raise TailMassError(f"dimension {dim} exceeds the cap {MAX_DIM}")
    c = _coherent_vector(alpha, dim)
    tail = max(0.0, 1.0 - float(np.sum(np.abs(c) ** 2)))
    return FockMatrix(np.outer(c, c.conj()), tail)


def _eigh(M):
    a = M.entries
    if _is_diagonal(a):
        return np.diag(a).real.copy(), None
    w, U = np.linalg.eigh(a)
    return w, U


def matrix_power(M, p):
    """``M^p`` for a positive semidefinite ``M`` with ``0^p = 0``.

    Eigenvalues within round-off of zero are treated as exact zeros.
    """
    if p <= 0:
        raise DomainError(f"exponent must be > 0, got {p}")
    w, U = _eigh(M)
    scale = max(1.0, float(np.max(np.abs(w))))
    if np.min(w) < -PSD_TOL * scale:
        raise DomainError(f"matrix is not positive semidefinite: eigenvalue {np.min(w):.3e}")
    if U is None:
        wp = np.where(w > 0, np.abs(w) ** p, 0.0)
        return FockMatrix(np.diag(wp).astype(complex), M.tail_mass)
    # eigenvalues below eigensolver round-off are zeros of the exact matrix
    zero = M.dim * np.finfo(float).eps * scale
    wp = np.where(w > zero, np.abs(w) ** p, 0.0)
    out = (U * wp) @ U.conj().T
    return FockMatrix(0.5 * (out + out.conj().T), M.tail_mass)


def trace_norm(M):
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    w, _ = _eigh(M)
    return float(np.sum(np.abs(w)))


def _common(a, b):
    D = max(a.dim, b.dim)
    return a.padded(D), b.padded(D)


def helstrom_error(rho_a, rho_b):
    """Minimal error probability ``(1 - ||rho_b - rho_a||_1 / 2) / 2`` for equal priors."""
    for m in (rho_a, rho_b):
        if abs(m.trace - 1.0) > 1e-9:
            raise InvalidArgumentError(f"density matrix trace {m.trace!r} is not 1")
    rho_a, rho_b = _common(rho_a, rho_b)
    gamma = FockMatrix(rho_b.entries - rho_a.entries)
    return 0.5 * (1.0 - 0.5 * trace_norm(gamma))


def q_s_fock(rho_a, rho_b, s):
    """``Tr(rho_a^s rho_b^(1-s))`` by brute force; endpoints need the exponent-0 side pure."""
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"s must lie in [0, 1], got {s}")
    rho_a, rho_b = _common(rho_a, rho_b)
    a = _support_power(rho_a, s)
    b = _support_power(rho_b, 1.0 - s)
    return float(np.sum(a * b.T).real)


def _support_power(M, p):
    if p > 0:
        return matrix_power(M, p).entries
    # rho^0 is the support projector; only a rank-one state is meaningful here
    w, U = _eigh(M)
    support = w > M.dim * np.finfo(float).eps * max(1.0, float(np.max(np.abs(w))))
    if np.count_nonzero(support) != 1:
        raise DomainError("exponent 0 is only admissible for a pure state")
    if U is None:
        return np.diag(support.astype(complex))
    u = U[:, support]
    return u @ u.conj().T


def _classify(state):
    """``('thermal', nu)`` or ``('coherent', mean)`` for oracle-representable states."""
    if state.n != 1:
        raise UnsupportedPairError(f"Fock oracle is single-mode only; state has {state.n} modes")
    V, x = state.cov, state.mean
    is_scalar = abs(V[0, 1]) < 1e-12 and abs(V[0, 0] - V[1, 1]) < 1e-12 * max(1.0, V[0, 0])
    if is_scalar and np.allclose(V, np.eye(2), rtol=0, atol=1e-12):
        return "coherent", x
    if is_scalar and not np.any(x):
        return "thermal", float(V[0, 0])
    raise UnsupportedPairError(
        "Fock oracle supports centred thermal and coherent states only "
        "(not squeezed, rotated or displaced thermal states)"
    )


def fock_state(state, dim=None, tail_cap=DEFAULT_TAIL_CAP):
    kind, param = _classify(state)
    if kind == "thermal":
        return thermal_fock(param, tail_cap, dim=dim)
    return coherent_fock(param, dim=dim, tail_cap=tail_cap)


def fock_pair(state_a, state_b, tail_cap=DEFAULT_TAIL_CAP):
    """Both states in one common truncation, each holding its own tail below ``tail_cap``."""
    dims = []
    for st in (state_a, state_b):
        kind, param = _classify(st)
        if kind == "thermal":
            dims.append(thermal_dim(param, tail_cap))
        else:
            dims.append(coherent_dim(complex(param[0], param[1]) / 2.0, tail_cap))
    D = max(dims)
    return fock_state(state_a, D, tail_cap), fock_state(state_b, D, tail_cap)


def is_representable(state):
    try:
        _classify(state)
    except UnsupportedPairError:
        return False
    return True
