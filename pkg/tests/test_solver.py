import numpy as np
import pytest

from gaussree import (
    CovarianceMatrix,
    DomainError,
    NormalForm,
    NotFaithfulError,
    SolverConfig,
    fd_objective_gradient,
    objective_gradient,
    relative_entropy,
    solve,
)
from gaussree._linalg import herm_min_eig
from gaussree.randoms import random_covariance, random_separable_covariance
from gaussree.symplectic import symplectic_form

from conftest import tmsv_nf

RHO_ENT = NormalForm(2.0, 2.0, 1.2)
# cross-validated against the closed two-parameter border reduction
RHO_ENT_VALUE = 0.05185837771888879


@pytest.mark.parametrize("na,nb", [(1, 1), (2, 1), (2, 2)])
def test_gradient_matches_finite_differences(na, nb, rng):
    for _ in range(3):
        sigma = random_covariance(rng, na, nb, nu_min=1.3, nu_max=2.5)
        rho = random_covariance(rng, na, nb, nu_min=1.3, nu_max=2.5)
        analytic = objective_gradient(sigma.entries, rho.entries)
        fd = fd_objective_gradient(sigma, rho)
        floor = np.maximum(np.abs(fd), 1e-3 * np.max(np.abs(fd)))
        assert np.max(np.abs(analytic - fd) / floor) < 1e-4


class TestSolve:
    def test_entangled_frozen_value(self):
        res = solve(RHO_ENT.matrix())
        assert res.value_bits == pytest.approx(RHO_ENT_VALUE, abs=1e-7)
        assert res.status == "converged"
        assert res.duality_gap_estimate < 1e-8
        # the reported optimizer reproduces the value
        assert relative_entropy(
            res.v_sigma_opt.entries, RHO_ENT.matrix().entries
        ) == pytest.approx(res.value_bits, abs=1e-12)

    def test_certificate_proves_separability(self):
        res = solve(RHO_ENT.matrix())
        gamma = res.gamma_a_opt
        assert herm_min_eig(gamma, symplectic_form(1)) > 0.0
        rest = res.v_sigma_opt.entries.copy()
        rest[:2, :2] -= gamma
        y = np.zeros((4, 4))
        y[2:, 2:] = -symplectic_form(1)
        assert herm_min_eig(rest, y) > 0.0

    def test_separable_input(self, rng):
        v = random_separable_covariance(rng, 1, 1)
        res = solve(v)
        assert res.value_bits < 1e-7
        assert np.max(np.abs(res.v_sigma_opt.entries - v.entries)) < 1e-3

    def test_objective_trace_monotone(self):
        res = solve(RHO_ENT.matrix())
        trace = res.objective_trace
        assert all(b <= a + 1e-9 for a, b in zip(trace, trace[1:]))

    def test_fd_gradient_mode_agrees(self):
        res = solve(RHO_ENT.matrix(), SolverConfig(gradient_impl="fd"))
        assert res.value_bits == pytest.approx(RHO_ENT_VALUE, abs=1e-6)

    def test_iteration_cap(self):
        res = solve(RHO_ENT.matrix(), SolverConfig(max_outer=2))
        assert res.status == "max_iter"
        assert res.duality_gap_estimate > 1e-8

    def test_rejects_non_faithful(self):
        with pytest.raises(NotFaithfulError):
            solve(tmsv_nf(0.7).matrix())

    def test_rejects_plain_array(self):
        with pytest.raises(DomainError, match="split"):
            solve(2.0 * np.eye(4))

    def test_rejects_non_bona_fide(self):
        with pytest.raises(DomainError, match="bona fide"):
            solve(CovarianceMatrix(1, 1, 0.5 * np.eye(4)))
