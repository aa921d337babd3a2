import math

import numpy as np
import pytest

from gaussree import (
    CovarianceMatrix,
    DomainError,
    NormalForm,
    SeparabilityWitness,
    is_separable_feasibility,
    is_separable_two_mode,
)
from gaussree._linalg import herm_min_eig
from gaussree.randoms import random_local_symplectic, random_separable_covariance
from gaussree.symplectic import symplectic_form

from conftest import thermal_cov, tmsv_nf


def _conjugated(nf: NormalForm, rng) -> CovarianceMatrix:
    s = random_local_symplectic(rng, 1, 1)
    return CovarianceMatrix(1, 1, s @ nf.matrix().entries @ s.T)


def test_vacuum_is_boundary_separable():
    wit = is_separable_feasibility(CovarianceMatrix(1, 1, np.eye(4)))
    assert wit.separable
    assert wit.status == "converged"
    assert -1e-9 <= wit.margin < 1e-6
    assert wit.gamma_a is not None


def test_thermal_product_margin():
    # gamma = 1.5 I splits the slack evenly, margin (nu_a - 1) / 2
    wit = is_separable_feasibility(thermal_cov((2.0, 3.0), split=1))
    assert wit.separable
    assert wit.margin == pytest.approx(0.5, abs=1e-6)


def test_tmsv_entangled_without_certificate():
    wit = is_separable_feasibility(tmsv_nf(0.5).matrix())
    assert not wit.separable
    assert wit.margin < -0.1
    assert wit.gamma_a is None


def test_certificate_satisfies_both_constraints():
    v = thermal_cov((2.0, 3.0), split=1)
    wit = is_separable_feasibility(v)
    gamma = wit.gamma_a
    lhs1 = gamma
    assert herm_min_eig(lhs1, symplectic_form(1)) >= wit.margin - 1e-8
    rest = v.entries.copy()
    rest[:2, :2] -= gamma
    y = np.zeros((4, 4))
    y[2:, 2:] = -symplectic_form(1)
    assert herm_min_eig(rest, y) >= wit.margin - 1e-8


def test_agrees_with_normal_form_criterion(rng):
    cases = []
    for _ in range(6):
        x = rng.uniform(1.3, 3.0)
        y = rng.uniform(1.3, 3.0)
        z_border = math.sqrt((x - 1.0) * (y - 1.0))
        cases.append(NormalForm(x, y, rng.uniform(0.1, 0.9) * z_border))
        z_ent = rng.uniform(1.02, 1.0 + 0.5 * (min(x, y) - 1.0) / z_border) * z_border
        nf = NormalForm(x, y, z_ent)
        if nf.is_bona_fide():
            cases.append(nf)
    for nf in cases:
        expected = is_separable_two_mode(nf)
        wit = is_separable_feasibility(_conjugated(nf, rng))
        assert wit.separable == expected, (nf, wit.margin)


def test_near_boundary_resolution(rng):
    x, y = 2.2, 1.7
    z_border = math.sqrt((x - 1.0) * (y - 1.0))
    for delta, expected in ((-1e-3, True), (1e-3, False)):
        nf = NormalForm(x, y, z_border + delta)
        wit = is_separable_feasibility(_conjugated(nf, rng))
        assert wit.separable == expected, (delta, wit.margin)


def test_random_separable_states_accepted(rng):
    for na, nb in ((1, 1), (2, 1)):
        v = random_separable_covariance(rng, na, nb)
        wit = is_separable_feasibility(v)
        assert wit.separable
        assert wit.margin > 0.0


def test_non_bona_fide_rejected():
    with pytest.raises(DomainError, match="bona fide"):
        is_separable_feasibility(CovarianceMatrix(1, 1, 0.5 * np.eye(4)))


def test_iteration_cap_reported():
    wit = is_separable_feasibility(thermal_cov((2.0, 3.0), split=1), max_inner=1)
    assert wit.status == "max_iter"
    assert isinstance(wit, SeparabilityWitness)
