"""Error-probability bounds for discriminating two Gaussian states.

``Q_s = Tr(rho_a^s rho_b^(1-s))`` is evaluated in closed form from the two
normal-mode decompositions. ``M_s`` (Minkowski) and ``Y_s`` (Young) are
upper bounds on ``Q_s`` that depend on the symplectic spectra alone, with

    Q_s <= Qbar_s <= M_s <= Y_s

for every ``s``. Each N-copy bound is ``(inf_s X_s)^N / 2``. All quantities are
carried as natural logarithms and exponentiated at the edge.
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from . import fock
from .errors import (
    DomainError,
    GaussboundError,
    InvalidArgumentError,
    InvariantViolationError,
    NumericalDegeneracyError,
    ReportError,
    UnsupportedPairError,
)
from .states import (
    LN2,
    _as_eigenvalues,
    _log_phi,
)
from .symplectic import TOL_PHYSICAL, spd_logdet_and_solve

INVARIANT_TOL = 1e-9
TIE_ATOL = 1e-12
BOUND_NAMES = ("qc", "bhatta", "mink", "young", "fid")

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class SPoint(NamedTuple):
    """A bound quantity evaluated at one value of ``s``."""

    s: float
    log_value: float

    @property
    def value(self):
        return math.exp(self.log_value)


@dataclass(frozen=True)
class SGridConfig:
    """How the infimum over ``s`` is searched.

    A uniform grid of ``grid_points`` on ``[eps, 1 - eps]`` locates the best
    bracket, then golden-section search refines it to ``refine_tolerance``.
    """

    grid_points: int = 201
    endpoint_epsilon: float = 1e-6
    refine_tolerance: float = 1e-10

    def __post_init__(self):
        if int(self.grid_points) != self.grid_points or self.grid_points < 3:
            raise InvalidArgumentError(f"grid_points must be an integer >= 3, got {self.grid_points!r}")
        if not 0 < self.endpoint_epsilon < 0.5:
            raise InvalidArgumentError(
                f"endpoint_epsilon must lie in (0, 0.5), got {self.endpoint_epsilon!r}"
            )
        if not self.refine_tolerance > 0:
            raise InvalidArgumentError(f"refine_tolerance must be > 0, got {self.refine_tolerance!r}")


class SMinimum(NamedTuple):
    s: float
    value: float
    clamped: bool


def golden_section(f, a, b, tol):
    """Minimise a unimodal ``f`` on ``[a, b]`` to an interval narrower than ``tol``."""
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def _finite(f, s):
    v = float(f(s))
    if not math.isfinite(v):
        raise NumericalDegeneracyError(f"bound evaluated to {v} at s = {s!r}")
    return v


def minimize_over_s(f, config=None, endpoints=(False, False), f_grid=None):
    """Infimum of ``f`` over ``s`` in ``[0, 1]``.

    Args:
        f (callable): ``s -> float``; evaluated on ``[eps, 1 - eps]`` and at
            the admissible endpoints only
        config (SGridConfig): grid and refinement settings
        endpoints (tuple[bool, bool]): whether ``s = 0`` and ``s = 1`` may be
            evaluated exactly; otherwise the grid edges stand in for them
        f_grid (callable): optional batched ``f`` taking an array of interior
            ``s`` values, used for the coarse grid

    Returns:
        SMinimum: minimiser, minimum and whether the minimiser sits on a
        clamped grid edge. Ties within ``TIE_ATOL`` go to the smallest ``s``.
    """
    cfg = config or SGridConfig()
    eps = cfg.endpoint_epsilon
    grid = np.linspace(eps, 1.0 - eps, int(cfg.grid_points))
    if f_grid is None:
        vals = np.array([_finite(f, s) for s in grid])
    else:
        vals = np.asarray(f_grid(grid), dtype=float)
        bad = np.flatnonzero(~np.isfinite(vals))
        if bad.size:
            raise NumericalDegeneracyError(f"bound evaluated to {vals[bad[0]]} at s = {grid[bad[0]]!r}")
    i = int(np.flatnonzero(vals <= vals.min() + TIE_ATOL)[0])

    candidates = [(float(grid[i]), float(vals[i]))]
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    s_ref, v_ref = golden_section(lambda s: _finite(f, s), lo, hi, cfg.refine_tolerance)
    if v_ref < vals[i] - TIE_ATOL:
        candidates.append((float(s_ref), float(v_ref)))
    if endpoints[0]:
        candidates.append((0.0, _finite(f, 0.0)))
    if endpoints[1]:
        candidates.append((1.0, _finite(f, 1.0)))

    best = min(v for _, v in candidates)
    s_star, v_star = min((c for c in candidates if c[1] <= best + TIE_ATOL), key=lambda c: c[0])
    clamped = (s_star == grid[0] and not endpoints[0]) or (s_star == grid[-1] and not endpoints[1])
    return SMinimum(s_star, v_star, bool(clamped))


# -- pointwise quantities -----------------------------------------------------------


def _spectra(spec_a, spec_b):
    a = _as_eigenvalues(np.ravel(spec_a))
    b = _as_eigenvalues(np.ravel(spec_b))
    if a.shape != b.shape or a.size == 0:
        raise InvalidArgumentError(f"spectra have different mode counts: {a.size} vs {b.size}")
    return a, b


def _check_s(s, a, b):
    """``s`` in ``(0, 1)``, or an endpoint whose exponent-0 state is pure."""
    s = float(s)
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"s must lie in [0, 1], got {s}")
    for edge, spec, label in ((0.0, a, "A"), (1.0, b, "B")):
        if s == edge:
            mixed = np.flatnonzero(spec > 1.0)
            if mixed.size:
                k = int(mixed[0])
                raise DomainError(
                    f"s = {edge:g} requires state {label} to be pure; "
                    f"mode {k} has nu = {float(spec[k]):.12g}",
                    mode=k,
                )
    return s


def endpoint_admissibility(spec_a, spec_b):
    """Which of ``s = 0`` and ``s = 1`` may be evaluated exactly."""
    a, b = _spectra(spec_a, spec_b)
    return bool(np.all(a == 1.0)), bool(np.all(b == 1.0))


class ChernoffTerms:
    """Precomputed normal-mode data for evaluating ``Q_s`` at many ``s``."""

    def __init__(self, rho_a, rho_b):
        if rho_a.n != rho_b.n:
            raise InvalidArgumentError(f"mode counts differ: {rho_a.n} vs {rho_b.n}")
        self.n = rho_a.n
        self.S_a, alpha = rho_a.decomposition
        self.S_b, beta = rho_b.decomposition
        self.alpha, self.beta = _spectra(alpha, beta)
        self.d = rho_a.mean - rho_b.mean

    @property
    def endpoints(self):
        return bool(np.all(self.alpha == 1.0)), bool(np.all(self.beta == 1.0))

    def log_terms(self, s):
        """``(log Qbar_s, log of the displacement factor)``."""
        s = _check_s(s, self.alpha, self.beta)
        t = 1.0 - s
        # _check_s has excluded exponent 0 on mixed modes, so every Phi^- is finite
        lm_a, lm_b = _log_phi(s, self.alpha, -1), _log_phi(t, self.beta, -1)
        log_norm = self.n * LN2 - float(np.sum(lm_a) + np.sum(lm_b))
        lam_a = np.exp(_log_phi(s, self.alpha, +1) - lm_a)
        lam_b = np.exp(_log_phi(t, self.beta, +1) - lm_b)
        va = (self.S_a * np.repeat(lam_a, 2)) @ self.S_a.T
        vb = (self.S_b * np.repeat(lam_b, 2)) @ self.S_b.T
        total = va + vb
        logdet, x = spd_logdet_and_solve(0.5 * (total + total.T), self.d)
        log_qbar = self.n * LN2 + log_norm - 0.5 * logdet
        return log_qbar, -0.5 * float(self.d @ x)

    def log_q_grid(self, s):
        """``log Q_s`` at an array of interior ``s`` values in one batch."""
        s = np.asarray(s, dtype=float)
        sc, tc = s[:, None], 1.0 - s[:, None]
        log_norm = np.sum(_log_g_unchecked(sc, self.alpha) + _log_g_unchecked(tc, self.beta), axis=-1)
        la = np.repeat(np.exp(_log_lambda_unchecked(sc, self.alpha)), 2, axis=-1)
        lb = np.repeat(np.exp(_log_lambda_unchecked(tc, self.beta)), 2, axis=-1)
        total = (self.S_a * la[:, None, :]) @ self.S_a.T + (self.S_b * lb[:, None, :]) @ self.S_b.T
        total = 0.5 * (total + np.swapaxes(total, 1, 2))
        try:
            chol = np.linalg.cholesky(total)
        except np.linalg.LinAlgError:
            # let the scalar path name the failing point
            return np.array([self.log_q(x) for x in s])
        logdet = 2.0 * np.sum(np.log(np.diagonal(chol, axis1=1, axis2=2)), axis=-1)
        x = np.linalg.solve(total, np.broadcast_to(self.d, s.shape + self.d.shape)[..., None])[..., 0]
        return self.n * LN2 + log_norm - 0.5 * logdet - 0.5 * (x @ self.d)

    def log_q(self, s):
        log_qbar, log_disp = self.log_terms(s)
        return log_qbar + log_disp

    def log_qbar(self, s):
        return self.log_terms(s)[0]


def q_s(rho_a, rho_b, s):
    """Chernoff quantity ``Tr(rho_a^s rho_b^(1-s))`` of two Gaussian states."""
    return SPoint(float(s), ChernoffTerms(rho_a, rho_b).log_q(s))


def q_bar_s(rho_a, rho_b, s):
    """``Q_s`` without its displacement factor; ``q_s <= q_bar_s``."""
    return SPoint(float(s), ChernoffTerms(rho_a, rho_b).log_qbar(s))


def _log_g_unchecked(p, x):
    # callers have validated x and excluded p = 0 on mixed modes
    return p * LN2 - _log_phi(p, x, -1)


def _log_lambda_unchecked(p, x):
    return _log_phi(p, x, +1) - _log_phi(p, x, -1)


def _log_m(a, b, s):
    """``log M_s``; ``s`` may be a scalar or an array of values."""
    n = a.size
    s = np.asarray(s, dtype=float)[..., None]
    t = 1.0 - s
    first = np.sum(_log_phi(s, a, +1) + _log_phi(t, b, -1), axis=-1) / n
    second = np.sum(_log_phi(t, b, +1) + _log_phi(s, a, -1), axis=-1) / n
    out = n * 2.0 * LN2 - n * np.logaddexp(first, second)
    return float(out) if out.ndim == 0 else out


def _log_y(a, b, s):
    s = np.asarray(s, dtype=float)[..., None]
    out = a.size * LN2 - 0.5 * np.sum(_log_phi(2.0 * s, a, -1) + _log_phi(2.0 * (1.0 - s), b, -1), axis=-1)
    return float(out) if out.ndim == 0 else out


def m_s(spec_a, spec_b, s):
    """Minkowski quantity ``4^n [prod Psi_s(a_k, b_k) + prod Psi_{1-s}(b_k, a_k)]^(-n)``.

    Depends on the two symplectic spectra only.
    """
    a, b = _spectra(spec_a, spec_b)
    s = _check_s(s, a, b)
    return SPoint(s, _log_m(a, b, s))


def y_s(spec_a, spec_b, s):
    """Young quantity ``2^n prod Gamma_s(a_k) Gamma_{1-s}(b_k)``."""
    a, b = _spectra(spec_a, spec_b)
    s = _check_s(s, a, b)
    return SPoint(s, _log_y(a, b, s))


# -- N-copy bounds ------------------------------------------------------------------


@dataclass(frozen=True)
class Bound:
    """An N-copy bound ``(inf_s X_s)^N / 2`` and where the infimum was found."""

    copies: int
    s_star: float
    log_infimum: float
    clamped: bool = False

    @property
    def log_value(self):
        return -LN2 + self.copies * self.log_infimum

    @property
    def value(self):
        return math.exp(self.log_value)

    @property
    def single_copy(self):
        """The same bound at ``N = 1``."""
        return 0.5 * math.exp(self.log_infimum)

    @property
    def kappa(self):
        """Error exponent ``-log inf_s X_s``."""
        return -self.log_infimum


def _check_copies(N):
    if int(N) != N or N < 1:
        raise InvalidArgumentError(f"copies must be a positive integer, got {N!r}")
    return int(N)


def chernoff_bound(rho_a, rho_b, N=1, config=None):
    """Quantum Chernoff bound ``P_QC^(N) = (inf_s Q_s)^N / 2``."""
    N = _check_copies(N)
    terms = ChernoffTerms(rho_a, rho_b)
    m = minimize_over_s(terms.log_q, config, terms.endpoints, f_grid=terms.log_q_grid)
    return Bound(N, m.s, m.value, m.clamped)


def bhattacharyya_bound(rho_a, rho_b, N=1):
    """``Q_{1/2}^N / 2``, never below the Chernoff bound."""
    return _bhattacharyya(rho_a, rho_b, N).value


def _bhattacharyya(rho_a, rho_b, N):
    N = _check_copies(N)
    return Bound(N, 0.5, ChernoffTerms(rho_a, rho_b).log_q(0.5))


def _spectral_bound(log_fn, spec_a, spec_b, N, config):
    N = _check_copies(N)
    a, b = _spectra(spec_a, spec_b)
    fn = lambda s: log_fn(a, b, s)
    m = minimize_over_s(fn, config, endpoint_admissibility(a, b), f_grid=fn)
    return Bound(N, m.s, m.value, m.clamped)


def minkowski_bound(rho_a, rho_b, N=1, config=None):
    """Spectrum-only bound ``M^(N) = (inf_s M_s)^N / 2 >= P_QC^(N)``."""
    _same_modes(rho_a, rho_b)
    return _spectral_bound(_log_m, rho_a.spectrum, rho_b.spectrum, N, config)


def young_bound(rho_a, rho_b, N=1, config=None):
    """Product-form bound ``Y^(N) = (inf_s Y_s)^N / 2 >= M^(N)``."""
    _same_modes(rho_a, rho_b)
    return _spectral_bound(_log_y, rho_a.spectrum, rho_b.spectrum, N, config)


def _same_modes(rho_a, rho_b):
    if rho_a.n != rho_b.n:
        raise InvalidArgumentError(f"mode counts differ: {rho_a.n} vs {rho_b.n}")


# -- fidelity -----------------------------------------------------------------------


def fidelity_one_mode(rho_a, rho_b):
    """Fidelity of two single-mode Gaussian states.

    ``F = 2 exp(-d^T (V_a + V_b)^{-1} d / 2) / (sqrt(D + delta) - sqrt(delta))``
    with ``D = det(V_a + V_b)`` and ``delta = (det V_a - 1)(det V_b - 1)``.
    """
    if rho_a.n != 1 or rho_b.n != 1:
        raise UnsupportedPairError(
            f"fidelity is implemented for single-mode states only (got {rho_a.n} and {rho_b.n} modes)"
        )
    d = rho_a.mean - rho_b.mean
    _, x = spd_logdet_and_solve(rho_a.cov + rho_b.cov, d)
    big = _det2(rho_a.cov + rho_b.cov)
    small = max(0.0, _det2(rho_a.cov) - 1.0) * max(0.0, _det2(rho_b.cov) - 1.0)
    # sqrt(D + delta) - sqrt(delta) without cancellation
    denom = big / (math.sqrt(big + small) + math.sqrt(small))
    return min(1.0, 2.0 * math.exp(-0.5 * float(d @ x)) / denom)


def _det2(M):
    return float(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])


class FidelityBounds(NamedTuple):
    f_minus: float
    f_plus: float


def fidelity_bounds(F):
    """``F_- = (1 - sqrt(1 - F)) / 2`` and ``F_+ = sqrt(F) / 2``."""
    if not 0.0 <= F <= 1.0:
        raise DomainError(f"fidelity must lie in [0, 1], got {F!r}")
    return FidelityBounds(0.5 * (1.0 - math.sqrt(1.0 - F)), 0.5 * math.sqrt(F))


def pure_case_chernoff(rho_pure, rho_b):
    """Single-copy Chernoff bound ``F / 2`` when the first state is pure."""
    if not rho_pure.is_pure(TOL_PHYSICAL):
        raise DomainError(
            f"first state must be pure; symplectic spectrum is {rho_pure.spectrum.tolist()}"
        )
    return 0.5 * fidelity_one_mode(rho_pure, rho_b)


# -- report -------------------------------------------------------------------------


class FidelityReport(NamedTuple):
    f: float
    f_minus: float
    f_plus: float


@dataclass
class BoundReport:
    """Every requested bound for one pair of states and copy number.

    ``fidelity`` and ``helstrom`` are single-copy quantities; ``helstrom`` is
    the exact error from the Fock oracle.
    """

    copies: int
    n: int
    chernoff: Optional[Bound] = None
    bhattacharyya: Optional[Bound] = None
    minkowski: Optional[Bound] = None
    young: Optional[Bound] = None
    fidelity: Optional[FidelityReport] = None
    helstrom: Optional[float] = None
    notes: list = field(default_factory=list)

    def violations(self, tol=INVARIANT_TOL):
        """Ordering checks that fail by more than ``tol``."""
        out = []

        def need(lhs, rhs, what):
            if lhs is not None and rhs is not None and lhs > rhs + tol:
                out.append(f"{what}: {lhs!r} > {rhs!r}")

        qc = self.chernoff.value if self.chernoff else None
        qc1 = self.chernoff.single_copy if self.chernoff else None
        need(qc, self.bhattacharyya and self.bhattacharyya.value, "P_QC <= P_B")
        need(qc, self.minkowski and self.minkowski.value, "P_QC <= M")
        need(self.minkowski and self.minkowski.value, self.young and self.young.value, "M <= Y")
        for name, b in self._bounds():
            need(b.value, 0.5, f"{name} <= 1/2")
        if self.fidelity:
            need(self.fidelity.f_minus, self.fidelity.f_plus, "F- <= F+")
            need(self.fidelity.f_minus, qc1, "F- <= P_QC^(1)")
            need(qc1, self.fidelity.f_plus, "P_QC^(1) <= F+")
            need(self.fidelity.f_minus, self.helstrom, "F- <= P^(1)")
        need(self.helstrom, qc1, "P^(1) <= P_QC^(1)")
        return out

    def _bounds(self):
        for name in ("chernoff", "bhattacharyya", "minkowski", "young"):
            b = getattr(self, name)
            if b is not None:
                yield name, b

    def check(self, tol=INVARIANT_TOL):
        bad = self.violations(tol)
        if bad:
            raise InvariantViolationError("bound ordering violated: " + "; ".join(bad))
        return self

    def to_dict(self):
        """Plain-data form used for JSON output."""
        out = {"copies": self.copies, "n": self.n}
        if self.chernoff:
            c = self.chernoff
            out["chernoff"] = {
                "s_star": c.s_star,
                "value": c.value,
                "log_value": c.log_value,
                "kappa": c.kappa,
                "clamped": c.clamped,
            }
        if self.bhattacharyya:
            out["bhattacharyya"] = self.bhattacharyya.value
        for name in ("minkowski", "young"):
            b = getattr(self, name)
            if b:
                out[name] = {
                    "s_star": b.s_star,
                    "value": b.value,
                    "log_value": b.log_value,
                    "clamped": b.clamped,
                }
        if self.fidelity:
            out["fidelity"] = {
                "f": self.fidelity.f,
                "f_minus": self.fidelity.f_minus,
                "f_plus": self.fidelity.f_plus,
            }
        if self.helstrom is not None:
            out["helstrom"] = self.helstrom
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def parse_bound_names(names):
    """Normalise a bound selector (iterable or comma-separated string)."""
    if names is None:
        return set(BOUND_NAMES)
    if isinstance(names, str):
        names = [x for x in names.split(",") if x.strip()]
    chosen = {x.strip() for x in names}
    unknown = chosen - set(BOUND_NAMES)
    if unknown:
        raise InvalidArgumentError(
            f"unknown bound(s) {sorted(unknown)}; choose from {', '.join(BOUND_NAMES)}"
        )
    return chosen


def oracle_helstrom(rho_a, rho_b, tail_cap=fock.DEFAULT_TAIL_CAP):
    """Exact single-copy error from the Fock oracle; single-mode thermal/coherent pairs only."""
    fa, fb = fock.fock_pair(rho_a, rho_b, tail_cap)
    return fock.helstrom_error(fa, fb)


def full_report(rho_a, rho_b, N=1, config=None, include_oracle=False, bounds=None):
    """Compute the selected bounds for a pair and check their ordering.

    Args:
        rho_a, rho_b (GaussianState): the two hypotheses, same mode count
        N (int): number of copies
        config (SGridConfig): infimum search settings
        include_oracle (bool): add the exact Helstrom error (single-mode
            thermal or coherent states only; otherwise raises
            :class:`UnsupportedPairError`)
        bounds: subset of ``qc, bhatta, mink, young, fid``; default all.
            ``fid`` is skipped for multimode pairs.

    Returns:
        BoundReport
    """
    _same_modes(rho_a, rho_b)
    N = _check_copies(N)
    chosen = parse_bound_names(bounds)
    report = BoundReport(copies=N, n=rho_a.n)
    failures = {}

    def attempt(name, fn):
        try:
            return fn()
        except GaussboundError as exc:
            failures[name] = exc
            return None

    if "qc" in chosen:
        report.chernoff = attempt("chernoff", lambda: chernoff_bound(rho_a, rho_b, N, config))
    if "bhatta" in chosen:
        report.bhattacharyya = attempt("bhattacharyya", lambda: _bhattacharyya(rho_a, rho_b, N))
    if "mink" in chosen:
        report.minkowski = attempt("minkowski", lambda: minkowski_bound(rho_a, rho_b, N, config))
    if "young" in chosen:
        report.young = attempt("young", lambda: young_bound(rho_a, rho_b, N, config))
    if "fid" in chosen and rho_a.n == 1:
        def fid():
            F = fidelity_one_mode(rho_a, rho_b)
            return FidelityReport(F, *fidelity_bounds(F))

        report.fidelity = attempt("fidelity", fid)
    if include_oracle:
        if not (fock.is_representable(rho_a) and fock.is_representable(rho_b)):
            raise UnsupportedPairError(
                "unsupported pair: the Helstrom oracle needs single-mode centred thermal or coherent states"
            )
        report.helstrom = attempt("helstrom", lambda: oracle_helstrom(rho_a, rho_b))
    if failures:
        raise ReportError(failures)
    for name, b in report._bounds():
        if b.clamped:
            report.notes.append(f"{name}: minimiser at clamped edge s = {b.s_star!r}")
    return report.check()
