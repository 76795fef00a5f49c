import numpy as np
import pytest

from gaussbound.errors import DomainError, TailMassError, UnsupportedPairError
from gaussbound.fock import (
    FockMatrix,
    coherent_fock,
    fock_pair,
    helstrom_error,
    matrix_power,
    q_s_fock,
    thermal_dim,
    thermal_fock,
    trace_norm,
)
from gaussbound.states import coherent, squeezed, thermal, vacuum

from oracles import coherent_overlap_sq, thermal_pair_qs, vacuum_thermal_helstrom


def test_thermal_vacuum_is_projector():
    m = thermal_fock(1.0)
    assert m.dim == 1
    assert m.entries[0, 0] == 1.0
    assert m.padded(4).trace == 1.0


def test_thermal_populations():
    m = thermal_fock(3.0)
    np.testing.assert_allclose(np.diag(m.entries).real[:4], [0.5, 0.25, 0.125, 0.0625], rtol=1e-15)
    assert abs(m.trace - 1.0) < 1e-12
    assert m.tail_mass < 1e-12
    assert 0.5 ** (m.dim - 1) >= 1e-12  # minimal truncation


def test_thermal_dim_cap():
    with pytest.raises(TailMassError):
        thermal_fock(200.0)


def test_coherent_vacuum_projector():
    np.testing.assert_array_equal(coherent_fock([0.0, 0.0]).padded(3).entries, np.diag([1, 0, 0]))


def test_coherent_normalised_and_overlap_with_vacuum():
    mean = [1.0, -2.0]
    m = coherent_fock(mean)
    assert abs(m.trace - 1.0) < 1e-12
    alpha = complex(*mean) / 2
    # |c_0|^2 = exp(-|alpha|^2); the Gaussian trace rule gives exp(-|d|^2 / 4) with d = 2 alpha
    assert m.entries[0, 0].real == pytest.approx(np.exp(-abs(alpha) ** 2), rel=1e-14)
    assert m.entries[0, 0].real == pytest.approx(np.exp(-5.0 / 4.0), rel=1e-14)


def test_coherent_insufficient_dimension():
    with pytest.raises(TailMassError):
        coherent_fock([6.0, 0.0], dim=5)


def test_matrix_power_identity_exponent():
    m = thermal_fock(2.0)
    np.testing.assert_allclose(matrix_power(m, 1.0).entries, m.entries, rtol=1e-15)


def test_matrix_power_half_trace():
    # sum_j sqrt((1 - eta) eta^j), eta = 1/2, needs eta^(D/2) negligible
    m = thermal_fock(3.0, dim=120)
    assert matrix_power(m, 0.5).trace == pytest.approx(1.0 + np.sqrt(2.0), rel=1e-14)


@pytest.mark.parametrize("p", [0.3, 1.0, 2.7])
def test_matrix_power_of_projector(p):
    m = coherent_fock([1.0, 0.5])
    np.testing.assert_allclose(matrix_power(m, p).entries, m.entries, atol=1e-13)


def test_matrix_power_rejects_non_psd():
    with pytest.raises(DomainError):
        matrix_power(FockMatrix(np.diag([1.0, -0.5]).astype(complex)), 0.5)


def test_trace_norm_examples():
    assert trace_norm(thermal_fock(2.0)) == pytest.approx(thermal_fock(2.0).trace, rel=1e-15)
    assert trace_norm(FockMatrix(np.diag([1.0, -1.0]).astype(complex))) == 2.0


def test_trace_norm_vacuum_thermal_difference():
    nu = 3.0
    a, b = fock_pair(vacuum(1), thermal(1, nu))
    gamma = FockMatrix(b.entries - a.entries)
    eta = (nu - 1) / (nu + 1)
    assert trace_norm(gamma) == pytest.approx(2 * eta, abs=1e-11)
    assert trace_norm(gamma) == pytest.approx(trace_norm(FockMatrix(-gamma.entries)), rel=1e-15)


def test_helstrom_identical_and_orthogonal():
    m = thermal_fock(2.5)
    assert helstrom_error(m, m) == 0.5
    e0 = FockMatrix(np.diag([1.0, 0.0]).astype(complex))
    e1 = FockMatrix(np.diag([0.0, 1.0]).astype(complex))
    assert helstrom_error(e0, e1) == 0.0


@pytest.mark.parametrize("beta", [1.5, 2.0, 5.0, 10.0])
def test_helstrom_vacuum_thermal(beta):
    expected = 1.0 / (1.0 + beta)
    assert vacuum_thermal_helstrom(beta) == pytest.approx(expected, rel=1e-13)
    a, b = fock_pair(vacuum(1), thermal(1, beta))
    assert helstrom_error(a, b) == pytest.approx(expected, rel=1e-10)
    assert helstrom_error(b, a) == pytest.approx(helstrom_error(a, b), rel=1e-15)


def test_padding_invariance():
    a, b = fock_pair(vacuum(1), thermal(1, 4.0))
    big_b = thermal_fock(4.0, dim=b.dim + 60)
    assert abs(helstrom_error(a, b) - helstrom_error(a.padded(big_b.dim), big_b)) < 1e-9
    assert abs(q_s_fock(a, b, 0.4) - q_s_fock(a.padded(big_b.dim), big_b, 0.4)) < 1e-9


def test_q_s_fock_examples():
    a, b = fock_pair(thermal(1, 3.0), thermal(1, 3.0))
    assert q_s_fock(a, b, 0.3) == pytest.approx(1.0, abs=1e-11)
    a, b = fock_pair(vacuum(1), thermal(1, 2.0))
    assert thermal_pair_qs(1.0, 2.0, 0.5) == pytest.approx(0.816496580927726, rel=1e-14)
    assert q_s_fock(a, b, 0.5) == pytest.approx(0.816496580927726, rel=1e-12)


def test_q_s_fock_coherent_pair_is_s_independent():
    ma, mb = [1.0, 0.5], [-1.0, 2.0]
    a, b = fock_pair(coherent(ma), coherent(mb))
    expected = coherent_overlap_sq(complex(*ma) / 2, complex(*mb) / 2)
    for s in (0.0, 0.2, 0.5, 0.9, 1.0):
        assert q_s_fock(a, b, s) == pytest.approx(expected, rel=1e-10)


def test_q_s_fock_endpoint_requires_pure():
    a, b = fock_pair(thermal(1, 2.0), vacuum(1))
    with pytest.raises(DomainError):
        q_s_fock(a, b, 0.0)
    # <0|sigma|0> = 1 - eta with eta = 1/3
    assert q_s_fock(a, b, 1.0) == pytest.approx(2.0 / 3.0, rel=1e-12)


def test_fock_pair_common_dimension():
    a, b = fock_pair(thermal(1, 1.5), thermal(1, 10.0))
    assert a.dim == b.dim == thermal_dim(10.0)


def test_oracle_rejects_unsupported_states():
    with pytest.raises(UnsupportedPairError):
        fock_pair(squeezed(0.3), vacuum(1))
    with pytest.raises(UnsupportedPairError):
        fock_pair(vacuum(2), vacuum(2))
    from gaussbound.states import displaced
    with pytest.raises(UnsupportedPairError):
        fock_pair(displaced(thermal(1, 2.0), [1.0, 0.0]), vacuum(1))
