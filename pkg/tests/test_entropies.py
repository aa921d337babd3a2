import numpy as np
import pytest

from gaussree import (
    CovarianceMatrix,
    DomainError,
    NotFaithfulError,
    bosonic_g,
    entropy,
    relative_entropy,
)
from gaussree.randoms import random_covariance
from gaussree.symplectic import symplectic_form
from gaussree._linalg import herm_logdet
from gaussree.symplectic import gibbs_matrix

from conftest import thermal_cov, tmsv_nf

LN2 = np.log(2.0)


def test_g_values():
    assert bosonic_g(1.0) == 0.0
    assert bosonic_g(3.0) == pytest.approx(2.0, abs=1e-14)
    # 1.5 log2 1.5 - 0.5 log2 0.5, computed independently
    assert bosonic_g(2.0) == pytest.approx(1.3774437510817343, abs=1e-14)
    # continuity at the boundary
    assert bosonic_g(1.0 + 1e-13) < 1e-11
    assert bosonic_g(1.0 - 1e-10) == 0.0  # inside the domain tolerance
    with pytest.raises(DomainError):
        bosonic_g(0.97)


def test_entropy_frozen_and_pure():
    assert entropy(thermal_cov([3.0, 2.0])) == pytest.approx(
        3.377443751081734, abs=1e-12
    )
    assert entropy(tmsv_nf(1.0).matrix()) == pytest.approx(0.0, abs=1e-9)
    assert entropy(CovarianceMatrix(1, 0, np.eye(2))) == 0.0


def test_relative_entropy_self_is_zero(rng):
    v = random_covariance(rng, 1, 1, nu_min=1.3, nu_max=2.5)
    assert relative_entropy(v, v) == pytest.approx(0.0, abs=1e-10)


def test_relative_entropy_thermal_matches_fock_oracle():
    # D(thermal nu=2 || thermal nu=3), geometric photon statistics
    d = relative_entropy(thermal_cov([2.0], split=1), thermal_cov([3.0], split=1))
    assert d == pytest.approx(0.12255624891826557, abs=1e-10)


def test_relative_entropy_non_faithful_sigma_is_finite():
    # vacuum against thermal nu=3: D = log2(nbar+1) = 1 bit exactly
    vac = CovarianceMatrix(1, 0, np.eye(2))
    d = relative_entropy(vac, thermal_cov([3.0], split=1))
    assert d == pytest.approx(1.0, abs=1e-12)


def test_relative_entropy_dual_form_agreement(rng):
    # both faithful: compare against the dual expression
    for na, nb in [(1, 0), (1, 1)]:
        n = na + nb
        sig = random_covariance(rng, na, nb, nu_min=1.2, nu_max=2.5)
        rho = random_covariance(rng, na, nb, nu_min=1.2, nu_max=2.5)
        omega = symplectic_form(n)
        g_diff = gibbs_matrix(rho.entries) - gibbs_matrix(sig.entries)
        tr_term = float(np.trace(sig.entries @ g_diff)) / (2.0 * LN2)
        det_term = 0.5 * (
            herm_logdet(rho.entries, omega) - herm_logdet(sig.entries, omega)
        ) / LN2
        dual = tr_term + det_term
        assert relative_entropy(sig, rho) == pytest.approx(dual, abs=1e-8)


def test_relative_entropy_validation():
    vac = CovarianceMatrix(1, 0, np.eye(2))
    with pytest.raises(DomainError):
        relative_entropy(vac, thermal_cov([2.0, 2.0]))  # shape mismatch
    with pytest.raises(NotFaithfulError):
        relative_entropy(thermal_cov([2.0], split=1), vac)  # rho must be faithful
    bad = CovarianceMatrix(1, 0, np.diag([0.3, 2.0]))
    with pytest.raises(DomainError):
        relative_entropy(bad, thermal_cov([2.0], split=1))
