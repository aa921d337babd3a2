"""Random fixtures for tests: covariances, symplectics, normal forms.

The core computations never draw randomness; everything here is driven by
an explicit numpy Generator so fixtures are reproducible from a seed.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import expm

from ._linalg import symmetrize
from .normal_form import NormalForm
from .symplectic import CovarianceMatrix, symplectic_form


def random_symplectic(rng: np.random.Generator, n_modes: int, scale: float = 0.5) -> np.ndarray:
    """Random symplectic matrix exp(Omega H) with H symmetric."""
    d = 2 * n_modes
    h = symmetrize(rng.normal(size=(d, d))) * scale
    return expm(symplectic_form(n_modes) @ h)


def random_covariance(
    rng: np.random.Generator,
    n_modes_a: int,
    n_modes_b: int,
    nu_min: float = 1.05,
    nu_max: float = 3.0,
    scale: float = 0.5,
) -> CovarianceMatrix:
    """Random bona fide covariance S diag(nu x 2) S^T with nu in [nu_min, nu_max]."""
    n = n_modes_a + n_modes_b
    nus = rng.uniform(nu_min, nu_max, size=n)
    s = random_symplectic(rng, n, scale)
    v = (s * np.repeat(nus, 2)) @ s.T
    return CovarianceMatrix(n_modes_a, n_modes_b, symmetrize(v))


def random_local_symplectic(
    rng: np.random.Generator, n_modes_a: int, n_modes_b: int, scale: float = 0.4
) -> np.ndarray:
    sa = random_symplectic(rng, n_modes_a, scale)
    sb = random_symplectic(rng, n_modes_b, scale)
    d = 2 * (n_modes_a + n_modes_b)
    out = np.zeros((d, d))
    out[: 2 * n_modes_a, : 2 * n_modes_a] = sa
    out[2 * n_modes_a :, 2 * n_modes_a :] = sb
    return out


def random_separable_covariance(
    rng: np.random.Generator,
    n_modes_a: int,
    n_modes_b: int,
    noise: float = 0.3,
) -> CovarianceMatrix:
    """Separable-by-construction state gamma_A (+) gamma_B + PSD noise."""
    ga = random_covariance(rng, n_modes_a, 0, nu_min=1.1, nu_max=2.0).entries
    gb = random_covariance(rng, n_modes_b, 0, nu_min=1.1, nu_max=2.0).entries
    d = 2 * (n_modes_a + n_modes_b)
    base = np.zeros((d, d))
    base[: 2 * n_modes_a, : 2 * n_modes_a] = ga
    base[2 * n_modes_a :, 2 * n_modes_a :] = gb
    w = rng.normal(size=(d, d)) * math.sqrt(noise / d)
    return CovarianceMatrix(n_modes_a, n_modes_b, base + w @ w.T)


def random_entangled_normal_form(
    rng: np.random.Generator,
    x_range: tuple[float, float] = (1.2, 4.0),
    faithful_margin: float = 5e-3,
    entangled_margin: float = 1e-3,
) -> NormalForm:
    """Random faithful, entangled two-mode normal form.

    z^2 is drawn strictly between the separability border (x-1)(y-1) and the
    bona fide ceiling xy - 1 - |x - y|, then the draw is rejected unless the
    state is faithful by the requested margin.
    """
    while True:
        x = rng.uniform(*x_range)
        y = rng.uniform(*x_range)
        lo = (x - 1.0) * (y - 1.0)
        hi = x * y - 1.0 - abs(x - y)
        if hi <= lo * (1.0 + entangled_margin):
            continue
        z2 = rng.uniform(lo + entangled_margin * (hi - lo), hi - 1e-9 * hi)
        z = math.sqrt(z2) * (1.0 if rng.random() < 0.5 else -1.0)
        nf = NormalForm(x, y, z)
        nu1, nu2 = nf.symplectic_pair()
        if min(nu1, nu2) > 1.0 + faithful_margin:
            return nf
