"""Gaussian states, their powers, and the scalar functions of a symplectic eigenvalue.

Every scalar function here depends on an eigenvalue ``x >= 1`` through
``eta = (x - 1) / (x + 1)``, the Bose ratio of the corresponding thermal mode:

    Phi_p^(+/-)(x) = (x + 1)^p (1 +/- eta^p)

The powers ``eta^p`` follow the support convention ``0^p = 0`` for every
``p >= 0``, so pure modes (``x = 1``) give ``Phi_p^(+/-)(1) = 2^p`` at all
``p``, including ``p = 0``.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import BonaFideError, DomainError, InvalidArgumentError, NotPositiveDefiniteError
from .symplectic import (
    TOL_PHYSICAL,
    WilliamsonDecomposition,
    build_omega,
    mode_count,
    spd_logdet_and_solve,
    symplectic_spectrum,
    williamson,
)

LN2 = float(np.log(2.0))
SYMMETRY_RTOL = 1e-10


# -- scalar functions of a symplectic eigenvalue -------------------------------


def _check_p(p):
    """Exponent(s) as a float array; rejects negative or non-finite entries."""
    arr = np.asarray(p, dtype=float)
    if not np.all(np.isfinite(arr) & (arr >= 0)):
        bad = arr.ravel()[np.flatnonzero(~(np.isfinite(arr) & (arr >= 0)))[0]]
        raise DomainError(f"exponent must be finite and >= 0, got {float(bad)}")
    return arr if arr.ndim else float(arr)


def _as_eigenvalues(x):
    """Validate ``x >= 1`` (up to ``TOL_PHYSICAL``) and snap near-pure values to 1."""
    x = np.asarray(x, dtype=float)
    bad = ~np.isfinite(x) | (x < 1.0 - TOL_PHYSICAL)
    if np.any(bad):
        k = int(np.flatnonzero(bad.ravel())[0])
        raise DomainError(
            f"symplectic eigenvalue must be >= 1, got {x.ravel()[k]!r} (mode {k})", mode=k
        )
    return np.where(x < 1.0 + TOL_PHYSICAL, 1.0, x)


def _log_eta_pow(p, x):
    """``log eta^p`` with ``0^p = 0``; broadcasts ``p`` against ``x``."""
    pure = x == 1.0
    with np.errstate(divide="ignore"):
        le = np.log(np.where(pure, 2.0, x) - 1.0) - np.log(np.where(pure, 2.0, x) + 1.0)
    return np.where(pure, -np.inf, p * le)


def _log_phi(p, x, sign):
    lp = _log_eta_pow(p, x)
    with np.errstate(divide="ignore"):
        tail = np.log(-np.expm1(lp)) if sign < 0 else np.log1p(np.exp(lp))
    return p * np.log(x + 1.0) + tail


def log_phi_plus(p, x):
    return _log_phi(_check_p(p), _as_eigenvalues(x), +1)


def log_phi_minus(p, x):
    """``log Phi_p^-``; ``-inf`` where it vanishes (``p = 0`` on a mixed mode)."""
    return _log_phi(_check_p(p), _as_eigenvalues(x), -1)


def _raise_if_divergent(log_vals, p, x, what):
    log_vals = np.atleast_1d(log_vals)
    bad = ~np.isfinite(log_vals)
    if np.any(bad):
        idx = np.unravel_index(int(np.flatnonzero(bad)[0]), log_vals.shape)
        k = int(idx[-1])
        xk = float(np.broadcast_to(x, log_vals.shape)[idx])
        raise DomainError(
            f"{what} diverges at exponent {p} for mixed mode {k} (nu = {xk!r}); "
            "exponent 0 is only admissible for pure modes",
            mode=k,
        )


def phi_plus(p, x):
    """``(x + 1)^p + (x - 1)^p`` for ``x >= 1``, ``p >= 0``."""
    return float(np.exp(log_phi_plus(p, x)))


def phi_minus(p, x):
    """``(x + 1)^p - (x - 1)^p`` for ``x >= 1``, ``p >= 0``."""
    return float(np.exp(log_phi_minus(p, x)))


def log_g(p, x):
    """Vectorised ``log G_p(x)``; raises if ``p = 0`` on a mixed mode."""
    lm = log_phi_minus(p, x)
    _raise_if_divergent(lm, p, x, "G_p")
    return _check_p(p) * LN2 - lm


def log_lambda(p, x):
    lm = log_phi_minus(p, x)
    _raise_if_divergent(lm, p, x, "Lambda_p")
    return log_phi_plus(p, x) - lm


def log_gamma(p, x):
    """Vectorised ``log Gamma_p(x) = -1/2 log[(x+1)^{2p} - (x-1)^{2p}]``."""
    lm = log_phi_minus(2.0 * _check_p(p), x)
    _raise_if_divergent(lm, p, x, "Gamma_p")
    return -0.5 * lm


def g_func(p, x):
    """Trace of the ``p``-th power of a single-mode thermal state with eigenvalue ``x``.

    ``G_p(x) = 2^p / ((x + 1)^p - (x - 1)^p)``. ``G_1 = 1`` and ``G_p(1) = 1``.
    """
    return float(np.exp(log_g(p, x)))


def lambda_func(p, x):
    """Symplectic eigenvalue of the normalised ``p``-th power of a thermal mode.

    ``Lambda_p(x) = Phi_p^+(x) / Phi_p^-(x)``; ``Lambda_1(x) = x``, ``Lambda_p(1) = 1``.
    """
    return float(np.exp(log_lambda(p, x)))


def gamma_func(p, x):
    """``[(x + 1)^{2p} - (x - 1)^{2p}]^{-1/2}``, equal to ``[Phi_p^+ Phi_p^-]^{-1/2}``."""
    return float(np.exp(log_gamma(p, x)))


def psi_func(p, x, y, n):
    """``[Phi_p^+(x) Phi_{1-p}^-(y)]^{1/n}`` for ``0 <= p <= 1``.

    Args:
        p (float): exponent in ``[0, 1]``
        x (float): eigenvalue entering through ``Phi^+``
        y (float): eigenvalue entering through ``Phi^-``
        n (int): number of modes (root order)

    Returns:
        float: strictly positive value
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"exponent must lie in [0, 1], got {p}")
    if int(n) != n or n < 1:
        raise InvalidArgumentError(f"mode count must be a positive integer, got {n!r}")
    lm = log_phi_minus(1.0 - p, y)
    _raise_if_divergent(lm, 1.0 - p, y, "Psi_p")
    return float(np.exp((log_phi_plus(p, x) + lm) / n))


# -- covariance validation -------------------------------------------------------


def covariance_diagnostics(V):
    """List every violated covariance-matrix invariant; empty when ``V`` is bona fide.

    Checks shape, finiteness, symmetry, positive definiteness and the
    uncertainty principle ``nu_k >= 1``.
    """
    V = np.asarray(V, dtype=float)
    if V.ndim != 2 or V.shape[0] != V.shape[1] or V.shape[0] % 2 or V.shape[0] == 0:
        return [f"shape: covariance must be 2n x 2n, got {V.shape}"]
    if not np.all(np.isfinite(V)):
        return ["finite: covariance has non-finite entries"]
    diags = []
    asym = np.abs(V - V.T)
    limit = SYMMETRY_RTOL * np.maximum(1.0, np.abs(V))
    if np.any(asym > limit):
        i, j = np.unravel_index(int(np.argmax(asym - limit)), V.shape)
        diags.append(
            f"symmetry: V[{i}][{j}] = {float(V[i, j])!r} differs from V[{j}][{i}] = {float(V[j, i])!r}"
        )
    Vs = 0.5 * (V + V.T)
    lam_min = float(np.linalg.eigvalsh(Vs)[0])
    if lam_min <= 0:
        diags.append(f"positivity: smallest eigenvalue {lam_min!r} is not > 0")
        return diags
    try:
        nu = symplectic_spectrum(Vs)
    except NotPositiveDefiniteError as exc:
        diags.append(f"positivity: {exc}")
        return diags
    for k, v in enumerate(nu):
        if v < 1.0 - TOL_PHYSICAL:
            diags.append(
                f"uncertainty: symplectic eigenvalue nu_{k} = {v:.9g} < 1"
            )
    return diags


def check_covariance(V):
    """Return ``V`` as a float array, raising :class:`BonaFideError` if unphysical."""
    diags = covariance_diagnostics(V)
    if diags:
        raise BonaFideError(diags)
    return np.asarray(V, dtype=float)


# -- states ------------------------------------------------------------------------


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GaussianState:
    """A Gaussian state given by its quadrature mean and covariance matrix."""

    mean: np.ndarray
    cov: np.ndarray = field(repr=False)

    def __post_init__(self):
        cov = check_covariance(self.cov)
        cov = _frozen(0.5 * (cov + cov.T))
        mean = _frozen(np.ravel(self.mean))
        if mean.shape[0] != cov.shape[0]:
            raise InvalidArgumentError(
                f"mean has length {mean.shape[0]}, covariance is {cov.shape[0]} x {cov.shape[0]}"
            )
        if not np.all(np.isfinite(mean)):
            raise InvalidArgumentError("mean has non-finite entries")
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "mean", mean)

    @property
    def n(self):
        return self.cov.shape[0] // 2

    @cached_property
    def decomposition(self) -> WilliamsonDecomposition:
        return williamson(self.cov)

    @property
    def spectrum(self):
        return self.decomposition.spectrum

    @property
    def normal_modes(self):
        return NormalModeForm(self.mean, self.decomposition)

    def is_pure(self, tol=TOL_PHYSICAL):
        return bool(np.all(self.spectrum < 1.0 + tol))

    def allclose(self, other, rtol=1e-10, atol=1e-10):
        """Equality up to the usual state tolerances (mean absolute, cov relative)."""
        return (
            self.n == other.n
            and np.allclose(self.mean, other.mean, rtol=0, atol=atol)
            and np.allclose(self.cov, other.cov, rtol=rtol, atol=rtol)
        )


class NormalModeForm(NamedTuple):
    mean: np.ndarray
    decomposition: WilliamsonDecomposition


class PowerTrace(NamedTuple):
    p: float
    log_trace: float

    @property
    def value(self):
        return float(np.exp(self.log_trace))


def power_cm(V, p, decomposition=None):
    """Covariance matrix of the normalised power ``rho^p / Tr rho^p``.

    The power keeps the symplectic matrix of ``V`` and maps each symplectic
    eigenvalue ``nu`` to ``Lambda_p(nu)``.

    Args:
        V (array): covariance matrix
        p (float): exponent, ``> 0`` (or ``0`` if every mode is pure)
        decomposition (WilliamsonDecomposition): reuse a precomputed decomposition

    Returns:
        array: covariance matrix of the same size
    """
    if decomposition is None:
        decomposition = williamson(check_covariance(V))
    S, nu = decomposition
    lam = np.exp(log_lambda(p, nu))
    return (S * np.repeat(lam, 2)) @ S.T


def log_trace_power(V, p, spectrum=None):
    """``log Tr rho^p``, a sum over modes of ``log G_p(nu_k)``."""
    p = float(p)
    if p <= 0:
        raise DomainError(f"exponent must be > 0, got {p}")
    if spectrum is None:
        spectrum = symplectic_spectrum(check_covariance(V))
    return PowerTrace(p, float(np.sum(log_g(p, spectrum))))


def log_overlap(rho, sigma):
    """``log Tr(rho sigma)`` for two Gaussian states."""
    if rho.n != sigma.n:
        raise InvalidArgumentError(f"mode counts differ: {rho.n} vs {sigma.n}")
    d = rho.mean - sigma.mean
    logdet, x = spd_logdet_and_solve(rho.cov + sigma.cov, d)
    return rho.n * LN2 - 0.5 * logdet - 0.5 * float(d @ x)


def overlap(rho, sigma):
    """Hilbert-Schmidt overlap ``Tr(rho sigma)``.

    Equals ``2^n exp(-d^T (V + V')^{-1} d / 2) / sqrt(det(V + V'))`` with
    ``d`` the difference of the means.
    """
    return float(np.exp(log_overlap(rho, sigma)))


# -- builders ----------------------------------------------------------------------


def vacuum(n=1):
    return GaussianState(np.zeros(2 * n), np.eye(2 * n))


def thermal(n, nu):
    """Product of thermal modes; ``nu`` is a scalar (all modes) or one value per mode."""
    nu = np.broadcast_to(np.asarray(nu, dtype=float), (n,))
    if np.any(nu < 1.0):
        k = int(np.flatnonzero(nu < 1.0)[0])
        raise BonaFideError([f"uncertainty: thermal eigenvalue nu_{k} = {nu[k]!r} < 1"])
    return GaussianState(np.zeros(2 * n), np.diag(np.repeat(nu, 2)))


def coherent(mean):
    """Coherent state with the given quadrature mean; ``mean = 2 (Re a, Im a)`` per mode."""
    mean = np.ravel(np.asarray(mean, dtype=float))
    if mean.size == 0 or mean.size % 2:
        raise InvalidArgumentError(f"mean must have even length, got {mean.size}")
    return GaussianState(mean, np.eye(mean.size))


def amplitude_to_mean(alpha):
    """Quadrature mean of coherent amplitudes ``alpha`` (complex, one per mode)."""
    alpha = np.atleast_1d(np.asarray(alpha, dtype=complex))
    return np.column_stack([2.0 * alpha.real, 2.0 * alpha.imag]).ravel()


def squeezed(r):
    """Single-mode squeezed vacuum, covariance ``diag(e^{2r}, e^{-2r})``."""
    return GaussianState(np.zeros(2), np.diag([np.exp(2 * r), np.exp(-2 * r)]))


def two_mode_squeezed(r):
    c, s = np.cosh(2 * r), np.sinh(2 * r)
    Z = np.diag([1.0, -1.0])
    cov = np.block([[c * np.eye(2), s * Z], [s * Z, c * np.eye(2)]])
    return GaussianState(np.zeros(4), cov)


def displaced(state, shift):
    shift = np.ravel(np.asarray(shift, dtype=float))
    return GaussianState(state.mean + shift, state.cov)


def symplectic_transform(state, S):
    """Apply a Gaussian unitary with symplectic matrix ``S``: ``V -> S V S^T``, ``x -> S x``."""
    S = np.asarray(S, dtype=float)
    if mode_count(S) != state.n:
        raise InvalidArgumentError(f"symplectic matrix is {S.shape}, state has {state.n} modes")
    omega = build_omega(state.n)
    if np.max(np.abs(S @ omega @ S.T - omega)) > 1e-8 * max(1.0, float(np.max(np.abs(S))) ** 2):
        raise InvalidArgumentError("matrix is not symplectic")
    cov = S @ state.cov @ S.T
    return GaussianState(S @ state.mean, 0.5 * (cov + cov.T))
