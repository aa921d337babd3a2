"""Entropic quantities of Gaussian states, all reported in bits.

The bosonic entropy function is

    g(x) = ((x+1)/2) log2((x+1)/2) - ((x-1)/2) log2((x-1)/2),

the von Neumann entropy of a state with symplectic spectrum {nu_j} is
sum_j g(nu_j), and the relative entropy between Gaussian states sigma and
rho (rho faithful) is evaluated from second moments as

    D(sigma || rho) = tr(V_sigma G_rho) / (2 ln 2) - H(sigma) + log2 Z_rho.

This form stays finite for non-faithful sigma; when sigma is faithful too
it agrees with the equivalent expression

    tr(V_sigma (G_rho - G_sigma)) / (2 ln 2)
        + log2 sqrt(det(V_rho + i Omega) / det(V_sigma + i Omega)).
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .symplectic import (
    FAITHFULNESS_TOL,
    _as_matrix,
    check_bona_fide,
    gibbs_matrix,
    log2_Z,
    symplectic_spectrum,
)

LN2 = math.log(2.0)

_G_DOMAIN_TOL = 1e-9


def bosonic_g(nu: float) -> float:
    """Entropy g(nu) in bits of a thermal mode with symplectic eigenvalue nu."""
    if nu < 1.0 - _G_DOMAIN_TOL:
        raise DomainError(f"g(nu) needs nu >= 1, got {nu:.12g}")
    nu = max(float(nu), 1.0)
    hi = 0.5 * (nu + 1.0)
    lo = 0.5 * (nu - 1.0)
    # lo * log2(lo) -> 0 as nu -> 1
    low_term = lo * math.log2(lo) if lo > 0.0 else 0.0
    return hi * math.log2(hi) - low_term


def entropy(v) -> float:
    """Von Neumann entropy in bits from the symplectic spectrum."""
    spectrum = symplectic_spectrum(v)
    bad = spectrum[spectrum < 1.0 - _G_DOMAIN_TOL]
    if bad.size:
        raise DomainError(f"state is not bona fide: symplectic eigenvalue {bad[-1]:.12g} < 1")
    return float(sum(bosonic_g(nu) for nu in spectrum))


def relative_entropy(v_sigma, v_rho, faithfulness_tol: float = FAITHFULNESS_TOL) -> float:
    """Quantum relative entropy D(sigma || rho) in bits between Gaussian states.

    Both states must be bona fide and rho must be faithful.  Zero-mean
    states are assumed (only second moments enter).
    """
    m_sigma = _as_matrix(v_sigma)
    m_rho = _as_matrix(v_rho)
    if m_sigma.shape != m_rho.shape:
        raise DomainError(
            f"states live on different mode counts: {m_sigma.shape} vs {m_rho.shape}"
        )
    ok, min_eig = check_bona_fide(m_sigma)
    if not ok:
        raise DomainError(f"sigma is not bona fide (min eig of V + i Omega = {min_eig:.3g})")
    ok, min_eig = check_bona_fide(m_rho)
    if not ok:
        raise DomainError(f"rho is not bona fide (min eig of V + i Omega = {min_eig:.3g})")
    g_rho = gibbs_matrix(m_rho, faithfulness_tol)  # raises NotFaithfulError if needed
    log2_z_rho = log2_Z(m_rho, faithfulness_tol)
    tr_term = float(np.trace(m_sigma @ g_rho)) / (2.0 * LN2)
    return tr_term - entropy(m_sigma) + log2_z_rho
