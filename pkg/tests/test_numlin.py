import numpy as np
import pytest

from pickspace.errors import NotContraction, NotFinite, NotHermitian
from pickspace.numlin import (DEFAULT_TOL, Tolerances, complete_to_coisometry, hermitian_eig,
                              is_psd, null_space, opnorm, orth, pinv, psd_factor, psd_sqrt)


def test_tolerance_defaults_and_validation():
    assert DEFAULT_TOL.psd_tol == 1e-10
    assert DEFAULT_TOL.rank_tol == 1e-10
    assert DEFAULT_TOL.residual_tol == 1e-8
    assert DEFAULT_TOL.replace(psd_tol=1e-6).psd_tol == 1e-6
    with pytest.raises(ValueError):
        Tolerances(psd_tol=0.0)
    with pytest.raises(ValueError):
        Tolerances(residual_tol=2.0)


def test_eig_descending_with_fixed_phase():
    m = np.array([[2, 1j], [-1j, 2]])
    w, v = hermitian_eig(m)
    assert np.allclose(w, [3, 1])
    assert np.allclose(v @ np.diag(w) @ v.conj().T, m)
    for col in v.T:
        lead = col[np.flatnonzero(np.abs(col) > 1e-12)[0]]
        assert abs(lead.imag) < 1e-14 and lead.real > 0


def test_not_hermitian_and_not_finite():
    with pytest.raises(NotHermitian):
        hermitian_eig(np.array([[1, 2], [0, 1]]))
    with pytest.raises(NotFinite):
        hermitian_eig(np.array([[np.nan, 0], [0, 1]]))


def test_is_psd_witness():
    v = is_psd(np.diag([1.0, -0.5]))
    assert not v and v.witness == pytest.approx(-0.5)
    assert is_psd(np.diag([1.0, -1e-13]))


def test_psd_factor_rank_and_reconstruction():
    b = np.array([[1, 2, 0], [0, 1j, 1]], dtype=complex)
    m = b.conj().T @ b
    factor, rank = psd_factor(m)
    assert rank == 2 and factor.shape == (2, 3)
    assert opnorm(factor.conj().T @ factor - m) < 1e-12


def test_psd_sqrt_squares_back():
    m = np.array([[2, 1], [1, 2]], dtype=complex)
    r = psd_sqrt(m)
    assert opnorm(r @ r - m) < 1e-12


def test_pinv_penrose_identities(rng):
    a = rng.standard_normal((5, 3)) @ rng.standard_normal((3, 4))
    p = pinv(a)
    assert opnorm(a @ p @ a - a) < 1e-10
    assert opnorm(p @ a @ p - p) < 1e-10
    assert opnorm((a @ p).conj().T - a @ p) < 1e-10
    assert opnorm((p @ a).conj().T - p @ a) < 1e-10


def test_orth_and_null_space(rng):
    a = rng.standard_normal((5, 2)) @ rng.standard_normal((2, 4))
    q = orth(a)
    n = null_space(a)
    assert q.shape == (5, 2) and n.shape == (4, 2)
    assert opnorm(q.conj().T @ q - np.eye(2)) < 1e-12
    assert opnorm(a @ n) < 1e-10


def test_complete_to_coisometry(rng):
    t = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    t *= 0.9 / opnorm(t)
    u, g = complete_to_coisometry(t)
    assert g == 3
    assert opnorm(u @ u.conj().T - np.eye(3)) < 1e-12
    assert np.array_equal(u[:, :2], t)


def test_complete_isometric_column_adds_nothing():
    t = np.array([[1.0], [0.0]])
    u, g = complete_to_coisometry(t)
    assert g == 1 and opnorm(u @ u.conj().T - np.eye(2)) < 1e-12
    with pytest.raises(NotContraction):
        complete_to_coisometry(np.array([[1.1]]))
