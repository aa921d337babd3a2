import math

import numpy as np
import pytest

from gaussree import (
    BorderPoint,
    CovarianceMatrix,
    DomainError,
    NormalForm,
    NotFaithfulError,
    ValidationError,
    first_order_residuals,
    gibbs_matrix,
    gibbs_normal_form,
    is_separable_two_mode,
    log2_Z,
    log2_z_normal_form,
    objective_bits,
    relative_entropy,
    solve_reduced,
    symplectic_spectrum,
    twirl_to_normal_form,
)
from gaussree.randoms import random_entangled_normal_form, random_local_symplectic

from conftest import tmsv_nf


def test_symplectic_pair_matches_generic_solver():
    nf = NormalForm(2.0, 1.5, 0.8)
    pair = nf.symplectic_pair()
    generic = symplectic_spectrum(nf.matrix())
    assert np.allclose(sorted(pair, reverse=True), generic, atol=1e-12)


def test_bona_fide_classification():
    assert NormalForm(2.0, 2.0, 1.2).is_bona_fide()
    assert tmsv_nf(1.0).is_bona_fide()  # pure states count
    assert not NormalForm(2.0, 2.0, 2.1).is_bona_fide()
    assert not NormalForm(0.8, 2.0, 0.0).is_bona_fide()


def test_gibbs_normal_form_matches_matrix_gibbs():
    nf = NormalForm(2.0, 1.5, 0.8)
    alpha, beta, gamma = gibbs_normal_form(nf)
    g = gibbs_matrix(nf.matrix())
    assert np.allclose(g[:2, :2], alpha * np.eye(2), atol=1e-10)
    assert np.allclose(g[2:, 2:], beta * np.eye(2), atol=1e-10)
    assert np.allclose(g[:2, 2:], gamma * np.diag([1.0, -1.0]), atol=1e-10)


def test_log2_z_normal_form_matches_generic():
    nf = NormalForm(2.0, 1.5, 0.8)
    assert log2_z_normal_form(nf) == pytest.approx(log2_Z(nf.matrix()), abs=1e-10)


def test_objective_bits_equals_relative_entropy():
    rho = NormalForm(2.0, 2.0, 1.2)
    sigma = NormalForm(2.1, 2.05, 0.9)
    val = objective_bits(sigma, gibbs_normal_form(rho), log2_z_normal_form(rho))
    assert val == pytest.approx(
        relative_entropy(sigma.matrix(), rho.matrix()), abs=1e-10
    )


class TestTwirlReduction:
    def test_read_off(self):
        nf, log = twirl_to_normal_form(NormalForm(2.0, 1.5, -0.8).matrix())
        assert (nf.x, nf.y, nf.z) == (2.0, 1.5, -0.8)
        assert any("read-off" in line for line in log)

    def test_local_conjugation_recovers_parameters(self, rng):
        base = NormalForm(2.0, 1.5, 0.8)
        for _ in range(5):
            s = random_local_symplectic(rng, 1, 1)
            v = CovarianceMatrix(1, 1, s @ base.matrix().entries @ s.T)
            nf, _ = twirl_to_normal_form(v)
            assert nf.x == pytest.approx(2.0, abs=1e-9)
            assert nf.y == pytest.approx(1.5, abs=1e-9)
            assert abs(nf.z) == pytest.approx(0.8, abs=1e-9)

    def test_sigma1_off_block_reduces(self):
        # off block z sigma_1 has det -z^2, so it rotates into the class
        z = 0.7
        m = np.eye(4) * 2.0
        m[:2, 2:] = z * np.array([[0.0, 1.0], [1.0, 0.0]])
        m[2:, :2] = m[:2, 2:].T
        nf, _ = twirl_to_normal_form(CovarianceMatrix(1, 1, m))
        assert nf.x == pytest.approx(2.0, abs=1e-10)
        assert abs(nf.z) == pytest.approx(z, abs=1e-10)

    def test_sigma0_off_block_rejected(self):
        # det(z sigma_0) = +z^2 is a local invariant incompatible with the class
        z = 0.7
        m = np.eye(4) * 2.0
        m[:2, 2:] = z * np.eye(2)
        m[2:, :2] = z * np.eye(2)
        with pytest.raises(ValidationError, match="invariant"):
            twirl_to_normal_form(CovarianceMatrix(1, 1, m))

    def test_wrong_mode_count_rejected(self):
        with pytest.raises(ValidationError):
            twirl_to_normal_form(CovarianceMatrix(2, 1, np.eye(6) * 2.0))


class TestBorderSurface:
    def test_border_point_sits_on_surface(self):
        bp = BorderPoint(1.8, 1.3)
        nf = bp.normal_form(-1.0)
        assert nf.z**2 == pytest.approx((nf.x - 1.0) * (nf.y - 1.0), abs=1e-12)
        assert nf.z < 0.0
        assert is_separable_two_mode(nf)
        pair = sorted(nf.symplectic_pair(), reverse=True)
        assert pair[0] == pytest.approx(1.8, abs=1e-10)
        assert pair[1] == pytest.approx(1.3, abs=1e-10)

    def test_separability_boundary_is_inclusive(self):
        x, y = 2.0, 1.6
        z_border = math.sqrt((x - 1.0) * (y - 1.0))
        assert is_separable_two_mode(NormalForm(x, y, z_border))
        assert not is_separable_two_mode(NormalForm(x, y, z_border + 1e-5))


class TestSolveReduced:
    def test_frozen_symmetric_instance(self):
        # cross-validated against the full convex solver (agreement 2e-9)
        res = solve_reduced(NormalForm(2.0, 2.0, 1.2))
        assert res.value_bits == pytest.approx(0.051858377718889, abs=1e-9)
        assert res.status == "converged"
        assert max(abs(r) for r in res.residuals) < 1e-9
        # the reported optimizer reproduces the value exactly
        direct = relative_entropy(res.sigma.matrix(), NormalForm(2.0, 2.0, 1.2).matrix())
        assert direct == pytest.approx(res.value_bits, abs=1e-11)
        # optimal sigma keeps the sign structure of rho's Gibbs coupling
        assert res.sigma.z > 0.0

    def test_separable_input_returns_zero(self):
        res = solve_reduced(NormalForm(2.0, 1.5, 0.5))
        assert res.value_bits == 0.0
        assert res.status == "separable"

    def test_mode_swap_covariance(self):
        a = solve_reduced(NormalForm(2.4, 1.7, 1.1))
        b = solve_reduced(NormalForm(1.7, 2.4, 1.1))
        assert a.value_bits == pytest.approx(b.value_bits, abs=1e-10)
        assert a.sigma.x == pytest.approx(b.sigma.y, abs=1e-8)
        assert a.sigma.y == pytest.approx(b.sigma.x, abs=1e-8)

    def test_negative_z_mirrors(self):
        a = solve_reduced(NormalForm(2.0, 2.0, 1.2))
        b = solve_reduced(NormalForm(2.0, 2.0, -1.2))
        assert a.value_bits == pytest.approx(b.value_bits, abs=1e-10)
        assert b.sigma.z == pytest.approx(-a.sigma.z, abs=1e-8)

    def test_residuals_are_stationarity_measures(self, rng):
        for _ in range(5):
            rho = random_entangled_normal_form(rng)
            res = solve_reduced(rho)
            if res.residuals is None:
                continue  # optimizer on the nu = 1 boundary
            alpha, beta, gamma = gibbs_normal_form(rho)
            n1, n2 = res.border.nu1, res.border.nu2
            if alpha > beta:
                # solver relabels modes so alpha <= beta and swaps back on exit
                alpha, beta = beta, alpha
                n1, n2 = n2, n1
            r1, r2 = first_order_residuals(n1, n2, alpha, beta, gamma)
            assert abs(r1) < 1e-8 and abs(r2) < 1e-8

    def test_rejects_non_faithful(self):
        with pytest.raises(NotFaithfulError):
            solve_reduced(tmsv_nf(1.0))

    def test_rejects_non_bona_fide(self):
        with pytest.raises(DomainError):
            solve_reduced(NormalForm(2.0, 2.0, 2.5))


def test_value_positive_iff_entangled(rng):
    for _ in range(10):
        rho = random_entangled_normal_form(rng)
        assert solve_reduced(rho).value_bits > 1e-6
