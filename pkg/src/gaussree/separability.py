"""Separability tests for bipartite Gaussian states.

A bipartite Gaussian state with covariance V is separable iff there is a
bona fide A-side matrix gamma with

    V >= gamma (+) i Omega_B,      gamma >= i Omega_A

(direct sum on the block structure).  Feasibility is decided by a phase-1
barrier problem that maximizes the smaller of the two constraint margins;
the state is declared separable when the optimal margin is >= -1e-9, so
boundary states count as separable.

For two-mode normal-form states the closed-form criterion
z^2 <= (x-1)(y-1) is available as is_separable_two_mode (re-exported from
the normal-form module).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._barrier import damped_newton
from ._linalg import (
    herm_inv_real,
    herm_logdet,
    herm_min_eig,
    sym_to_vec,
    vec_to_sym,
    grad_to_vec,
)
from .errors import DomainError
from .normal_form import is_separable_two_mode  # noqa: F401  (re-export)
from .symplectic import CovarianceMatrix, check_bona_fide, symplectic_form

MARGIN_TOL = 1e-9


@dataclass
class SeparabilityWitness:
    separable: bool
    margin: float
    gamma_a: np.ndarray | None
    iterations: int
    status: str


def _constraint_parts(v: CovarianceMatrix):
    na, nb = v.n_modes_a, v.n_modes_b
    da, d = 2 * na, 2 * (na + nb)
    omega_a = symplectic_form(na)
    y1 = np.zeros((d, d))
    y1[da:, da:] = -symplectic_form(nb)
    return da, d, omega_a, y1


def is_separable_feasibility(
    v: CovarianceMatrix,
    margin_tol: float = MARGIN_TOL,
    max_inner: int = 100,
) -> SeparabilityWitness:
    """Phase-1 feasibility test of the separability constraints.

    Maximizes t such that gamma + i Omega_A >= t I and
    V - gamma (+) i Omega_B >= t I; the reported margin is the achieved t.
    """
    ok, min_eig = check_bona_fide(v)
    if not ok:
        raise DomainError(f"state is not bona fide (min eig {min_eig:.3g})")
    m = v.entries
    da, d, omega_a, y1 = _constraint_parts(v)
    n_gamma = da * (da + 1) // 2
    theta = float(d + da)

    def unpack(xvec):
        gamma = vec_to_sym(xvec[:n_gamma], da)
        t = xvec[-1]
        return gamma, t

    def parts(xvec):
        gamma, t = unpack(xvec)
        x1 = m.copy()
        x1[:da, :da] -= gamma
        x1 -= t * np.eye(d)
        x2 = gamma - t * np.eye(da)
        return x1, x2

    def feasible(xvec):
        x1, x2 = parts(xvec)
        return (
            herm_logdet(x1, y1) is not None
            and herm_logdet(x2, omega_a) is not None
        )

    def make_value_grad(mu):
        def value(xvec):
            x1, x2 = parts(xvec)
            ld1 = herm_logdet(x1, y1)
            ld2 = herm_logdet(x2, omega_a)
            return -xvec[-1] + mu * (-(ld1 or 0.0) - (ld2 or 0.0))

        def grad(xvec):
            x1, x2 = parts(xvec)
            inv1 = herm_inv_real(x1, y1)
            inv2 = herm_inv_real(x2, omega_a)
            g_gamma = mu * (inv1[:da, :da] - inv2)
            # tr H^-1 is real for Hermitian H, so the real parts suffice
            g_t = -1.0 + mu * (np.trace(inv1) + np.trace(inv2))
            return np.concatenate([grad_to_vec(g_gamma), [g_t]])

        return value, grad

    gamma0 = np.eye(da)
    t0 = (
        min(
            herm_min_eig(m - np.pad(gamma0, ((0, d - da), (0, d - da))), y1),
            herm_min_eig(gamma0, omega_a),
        )
        - 1.0
    )
    x = np.concatenate([sym_to_vec(gamma0), [t0]])

    mu = 1.0
    total_iters = 0
    converged_all = True
    while mu * theta > 1e-10:
        value, grad = make_value_grad(mu)
        # keep Hessian differencing inside the mu-scale binding slacks;
        # center loosely early on, tightly once mu is small
        fd_step = max(1e-10, min(1e-6, 1e-2 * mu))
        tol = max(1e-10, 1e-4 * mu * mu)
        x, _, iters, conv = damped_newton(
            value, grad, x, feasible, tol=tol, max_iter=max_inner, fd_step=fd_step
        )
        total_iters += iters
        converged_all = converged_all and conv
        mu *= 0.2
    gamma, t = unpack(x)
    separable = bool(t >= -margin_tol)
    return SeparabilityWitness(
        separable=separable,
        margin=float(t),
        gamma_a=gamma if separable else None,
        iterations=total_iters,
        status="converged" if converged_all else "max_iter",
    )
