"""Symplectic linear algebra on real quadrature phase space.

Modes are ordered ``(x_1, p_1, x_2, p_2, ...)`` so the symplectic form is
block diagonal. Covariance matrices use vacuum-normalised units: the vacuum
has covariance ``I`` and every symplectic eigenvalue of a physical state is
at least one.
"""

from typing import NamedTuple

import numpy as np
from scipy.linalg import expm
from scipy.linalg.lapack import dpotrf, dpotrs

from .errors import (
    DecompositionError,
    InvalidArgumentError,
    NotPositiveDefiniteError,
    NumericalDegeneracyError,
)

TOL_PHYSICAL = 1e-9
"""Slack on ``nu >= 1``; eigenvalues within this of one count as pure."""

PAIRING_RTOL = 1e-8
# decomposition failure threshold; healthy inputs land near 1e-14
RECONSTRUCTION_RTOL = 1e-8


class WilliamsonDecomposition(NamedTuple):
    """``V = S @ diag(nu_1, nu_1, ..., nu_n, nu_n) @ S.T`` with ``S`` symplectic."""

    S: np.ndarray
    spectrum: np.ndarray

    @property
    def diagonal(self):
        """The Williamson normal form as a dense ``2n x 2n`` matrix."""
        return np.diag(np.repeat(self.spectrum, 2))


def build_omega(n):
    """Return the ``2n x 2n`` symplectic form, ``n`` copies of ``[[0, 1], [-1, 0]]``.

    Args:
        n (int): number of modes

    Returns:
        array: real antisymmetric matrix with ``omega @ omega == -I``
    """
    if int(n) != n or n < 1:
        raise InvalidArgumentError(f"mode count must be a positive integer, got {n!r}")
    return np.kron(np.eye(int(n)), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def mode_count(M):
    """Number of modes of a square ``2n x 2n`` matrix; raises on bad shapes."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2 or M.shape[0] == 0:
        raise InvalidArgumentError(f"expected a 2n x 2n matrix, got shape {M.shape}")
    return M.shape[0] // 2


def sym_sqrt(M):
    """Principal square root of a symmetric positive definite matrix.

    Uses the symmetric eigendecomposition, so the result is exactly symmetric.
    """
    M = np.asarray(M, dtype=float)
    w, U = np.linalg.eigh(M)
    if w[0] <= 0:
        raise NotPositiveDefiniteError(
            f"matrix has non-positive eigenvalue {w[0]:.3e}", pivot=None
        )
    R = (U * np.sqrt(w)) @ U.T
    return 0.5 * (R + R.T)


def cholesky_lower(M):
    """Lower Cholesky factor; the error names the first failing pivot."""
    M = np.asarray(M, dtype=float)
    if not np.all(np.isfinite(M)):
        raise NumericalDegeneracyError("matrix has non-finite entries")
    c, info = dpotrf(M, lower=1, clean=1, overwrite_a=0)
    if info > 0:
        raise NotPositiveDefiniteError(
            f"matrix is not positive definite: Cholesky pivot {info - 1} failed",
            pivot=info - 1,
        )
    if info < 0:
        raise InvalidArgumentError(f"LAPACK dpotrf rejected argument {-info}")
    return c


def spd_logdet_and_solve(M, b):
    """Log-determinant of ``M`` and the solution of ``M x = b`` via Cholesky.

    Args:
        M (array): symmetric positive definite matrix
        b (array): right-hand side vector

    Returns:
        tuple[float, array]: ``(log det M, x)``
    """
    c = cholesky_lower(M)
    logdet = 2.0 * float(np.sum(np.log(np.diag(c))))
    b = np.asarray(b, dtype=float)
    x, info = dpotrs(c, b, lower=1)
    if info != 0:
        raise InvalidArgumentError(f"LAPACK dpotrs rejected argument {-info}")
    return logdet, x


def _canonical_modes(V):
    """Symmetric square root of ``V`` and the spectrum of ``i R Omega R``."""
    n = mode_count(V)
    V = np.asarray(V, dtype=float)
    cholesky_lower(V)
    R = sym_sqrt(V)
    A = R @ build_omega(n) @ R
    A = 0.5 * (A - A.T)
    w, U = np.linalg.eigh(1j * A)
    # w ascending: the n negative partners mirror the n positive values
    pos = w[n:][::-1]
    neg = -w[:n]
    scale = np.maximum(pos, np.finfo(float).tiny)
    mismatch = np.abs(pos - neg) / scale
    if np.any(pos <= 0) or np.any(mismatch > PAIRING_RTOL):
        raise NumericalDegeneracyError(
            "eigenvalues of Omega V do not pair as +/- i nu "
            f"(worst relative mismatch {float(np.max(mismatch)):.3e})"
        )
    return R, A, pos, U[:, n:][:, ::-1]


def symplectic_spectrum(V):
    """Symplectic eigenvalues of a covariance matrix, sorted descending.

    These are the moduli of the eigenvalues of ``Omega V``, which come in
    ``+/- i nu`` pairs.

    Args:
        V (array): ``2n x 2n`` symmetric positive definite matrix

    Returns:
        array: the ``n`` symplectic eigenvalues, largest first
    """
    _, _, nu, _ = _canonical_modes(V)
    return nu


def williamson(V):
    """Williamson decomposition ``V = S D S^T`` of a covariance matrix.

    With ``R = sqrt(V)``, the antisymmetric matrix ``R Omega R`` is brought to
    the canonical form ``(+) nu_k [[0, 1], [-1, 0]]`` by an orthogonal ``O``
    read off the eigenvectors of the Hermitian matrix ``i R Omega R``. Then
    ``S = R O D^{-1/2}``.

    Args:
        V (array): ``2n x 2n`` symmetric positive definite matrix

    Returns:
        WilliamsonDecomposition: symplectic ``S`` and spectrum (descending)
    """
    V = np.asarray(V, dtype=float)
    n = mode_count(V)
    R, A, nu, U = _canonical_modes(V)
    O = np.empty((2 * n, 2 * n))
    for k in range(n):
        u = U[:, k] * np.sqrt(2.0)
        # A Re(u) = nu Im(u), A Im(u) = -nu Re(u)
        O[:, 2 * k] = u.imag
        O[:, 2 * k + 1] = u.real
    S = (R @ O) / np.sqrt(np.repeat(nu, 2))

    omega = build_omega(n)
    scale = max(1.0, float(np.max(np.abs(V))))
    rec = float(np.max(np.abs(S @ np.diag(np.repeat(nu, 2)) @ S.T - V))) / scale
    symp = float(np.max(np.abs(S @ omega @ S.T - omega)))
    if rec > RECONSTRUCTION_RTOL or symp > RECONSTRUCTION_RTOL:
        raise DecompositionError(
            f"Williamson residuals too large: reconstruction {rec:.3e}, "
            f"symplectic {symp:.3e}"
        )
    return WilliamsonDecomposition(S, nu)


def random_symplectic(seed, n, intensity=1.0):
    """Random symplectic matrix ``exp(Omega H)`` for a random symmetric ``H``.

    ``H`` has standard normal entries (symmetrised) scaled by ``intensity``;
    ``intensity=0`` gives the identity.
    """
    if intensity < 0:
        raise InvalidArgumentError(f"intensity must be >= 0, got {intensity}")
    omega = build_omega(n)
    rng = np.random.default_rng(seed)
    H = rng.standard_normal((2 * n, 2 * n))
    H = 0.5 * (H + H.T) * intensity
    return expm(omega @ H)
