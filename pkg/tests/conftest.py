import json

import numpy as np
import pytest

from gaussree import CovarianceMatrix, NormalForm, covariance_to_json


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def thermal_cov(nus, split=None) -> CovarianceMatrix:
    """Product thermal state with the given symplectic eigenvalues."""
    nus = list(nus)
    n = len(nus)
    na = split if split is not None else max(1, n - 1)
    return CovarianceMatrix(na, n - na, np.diag(np.repeat(nus, 2)).astype(float))


def tmsv_nf(r: float) -> NormalForm:
    return NormalForm(np.cosh(2 * r), np.cosh(2 * r), np.sinh(2 * r))


def write_cov(path, cov: CovarianceMatrix) -> str:
    p = path / "cov.json"
    p.write_text(json.dumps(covariance_to_json(cov)))
    return str(p)
