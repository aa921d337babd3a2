import numpy as np
import pytest

from gaussree._linalg import (
    grad_to_vec,
    herm_embed,
    herm_inv_real,
    herm_logdet,
    herm_min_eig,
    sym_dim,
    sym_to_vec,
    vec_to_sym,
)
from gaussree.errors import ValidationError


def _random_hermitian_pd(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    h = a @ a.conj().T + 0.5 * np.eye(d)
    return np.real(h).copy(), np.imag(h).copy()


def test_embed_matches_complex_spectrum(rng):
    x, y = _random_hermitian_pd(rng, 4)
    h = x + 1j * y
    direct = np.linalg.eigvalsh(h)
    embedded = np.linalg.eigvalsh(herm_embed(x, y))
    # each complex eigenvalue shows up twice in the real embedding
    assert np.allclose(np.sort(np.repeat(direct, 2)), np.sort(embedded))


def test_herm_logdet_and_inverse(rng):
    x, y = _random_hermitian_pd(rng, 3)
    h = x + 1j * y
    sign, logdet = np.linalg.slogdet(h)
    assert herm_logdet(x, y) == pytest.approx(logdet, abs=1e-10)
    assert np.allclose(herm_inv_real(x, y), np.real(np.linalg.inv(h)), atol=1e-12)


def test_herm_logdet_rejects_indefinite():
    x = np.diag([1.0, -1.0])
    y = np.zeros((2, 2))
    assert herm_logdet(x, y) is None


def test_herm_min_eig():
    x = np.diag([2.0, 0.5])
    y = np.zeros((2, 2))
    assert herm_min_eig(x, y) == pytest.approx(0.5)


def test_sym_vec_round_trip(rng):
    m = rng.normal(size=(5, 5))
    m = m + m.T
    assert sym_to_vec(m).shape == (sym_dim(5),)
    assert np.array_equal(vec_to_sym(sym_to_vec(m), 5), m)


def test_grad_to_vec_chain_rule(rng):
    # for f = tr(A M) with A, M symmetric, df = grad_vec . d(vec M)
    a = rng.normal(size=(4, 4))
    a = a + a.T
    m = rng.normal(size=(4, 4))
    m = m + m.T
    dm = rng.normal(size=(4, 4)) * 1e-6
    dm = dm + dm.T
    df = np.trace(a @ (m + dm)) - np.trace(a @ m)
    predicted = grad_to_vec(a) @ (sym_to_vec(m + dm) - sym_to_vec(m))
    assert predicted == pytest.approx(df, rel=1e-9)


def test_symmetry_validation_names_entries():
    from gaussree._linalg import check_symmetric

    m = np.eye(3)
    m[0, 2] = 1e-4
    with pytest.raises(ValidationError, match=r"\(0,2\)"):
        check_symmetric(m, "test matrix")
