"""Interior-point solver for the reverse relative entropy of entanglement.

For a bona fide, faithful covariance V_rho on an (A|B) split, the program

    minimize   D(sigma || rho) = tr(V G_rho)/(2 ln 2) - H(V) + log2 Z_rho
    over       V symmetric, gamma symmetric on A
    subject to V >= gamma (+) i Omega_B,   gamma >= i Omega_A

is convex (the constraint set characterizes separable Gaussian sigma).  It
is solved by path-following on a log-det barrier for the two constraints,
plus a weakly-weighted guard term -mu_f log det(V + i Omega) (mu_f = mu/1000)
that keeps iterates faithful so the entropy gradient stays defined.  The
inner minimizer is damped Newton with finite-difference Hessians of the
analytic gradient.

The analytic objective gradient (G_rho - G[V]) / (2 ln 2) is validated once
per process against central finite differences on fixed random instances;
if that validation ever failed the solver would fall back to a pure
finite-difference gradient.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np

from ._barrier import damped_newton
from ._linalg import (
    grad_to_vec,
    herm_inv_real,
    herm_logdet,
    sym_dim,
    sym_to_vec,
    vec_to_sym,
)
from .entropies import LN2, bosonic_g
from .errors import DomainError, NotFaithfulError
from .symplectic import (
    CovarianceMatrix,
    check_bona_fide,
    gibbs_matrix,
    log2_Z,
    symplectic_form,
    symplectic_spectrum,
)


@dataclass(frozen=True)
class SolverConfig:
    barrier_mu_initial: float = 1.0
    barrier_decay: float = 0.2
    newton_tol: float = 1e-11
    outer_tol: float = 1e-8
    max_outer: int = 60
    max_inner: int = 100
    faithfulness_floor: float = 1e-9
    gradient_check: bool = True
    gradient_impl: str = "auto"  # auto | analytic | fd (diagnostic)


@dataclass
class SolveResult:
    value_bits: float
    v_sigma_opt: CovarianceMatrix
    gamma_a_opt: np.ndarray
    iterations: int
    duality_gap_estimate: float
    status: str
    objective_trace: list = field(default_factory=list)


def objective_gradient(v_sigma, v_rho) -> np.ndarray:
    """Gradient matrix of D(sigma||rho) wrt V_sigma: (G_rho - G_sigma)/(2 ln 2).

    Returned as the matrix Gamma with dD = tr(Gamma dV); both states must be
    faithful.
    """
    g_rho = gibbs_matrix(v_rho)
    g_sigma = gibbs_matrix(v_sigma)
    return (g_rho - g_sigma) / (2.0 * LN2)


def _objective_value(m: np.ndarray, g_rho: np.ndarray, log2_z_rho: float) -> float:
    spectrum = symplectic_spectrum(m)
    h = float(sum(bosonic_g(nu) for nu in spectrum))
    return float(np.trace(m @ g_rho)) / (2.0 * LN2) - h + log2_z_rho


def _objective_grad_analytic(m: np.ndarray, g_rho: np.ndarray) -> np.ndarray:
    return (g_rho - gibbs_matrix(m, faithfulness_tol=0.0)) / (2.0 * LN2)


def _objective_grad_fd(m: np.ndarray, g_rho: np.ndarray, log2_z_rho: float,
                       step: float = 1e-5) -> np.ndarray:
    d = m.shape[0]
    gamma = np.zeros((d, d))
    for i in range(d):
        for j in range(i, d):
            h = step * (1.0 + abs(m[i, j]))
            up = m.copy()
            dn = m.copy()
            up[i, j] += h
            dn[i, j] -= h
            if i != j:
                up[j, i] += h
                dn[j, i] -= h
            df = (
                _objective_value(up, g_rho, log2_z_rho)
                - _objective_value(dn, g_rho, log2_z_rho)
            ) / (2.0 * h)
            gamma[i, j] = gamma[j, i] = df if i == j else 0.5 * df
    return gamma


_GRAD_MODE: str | None = None
_GRAD_LOCK = threading.Lock()


def _gradient_formula_ok() -> bool:
    """One-shot validation of the analytic gradient on fixed random states."""
    from .randoms import random_covariance

    rng = np.random.default_rng(20240817)
    for na, nb in ((1, 0), (1, 1)):
        for _ in range(2):
            sigma = random_covariance(rng, na, nb, nu_min=1.3, nu_max=2.5)
            rho = random_covariance(rng, na, nb, nu_min=1.3, nu_max=2.5)
            g_rho = gibbs_matrix(rho.entries)
            analytic = _objective_grad_analytic(sigma.entries, g_rho)
            fd = _objective_grad_fd(sigma.entries, g_rho, log2_Z(rho.entries))
            scale = max(1e-3, float(np.max(np.abs(fd))) * 1e-3)
            rel = np.abs(analytic - fd) / np.maximum(np.abs(fd), scale)
            if float(np.max(rel)) > 1e-4:
                return False
    return True


def _gradient_mode(cfg: SolverConfig) -> str:
    global _GRAD_MODE
    if cfg.gradient_impl in ("analytic", "fd"):
        return cfg.gradient_impl
    if not cfg.gradient_check:
        return "analytic"
    if _GRAD_MODE is None:
        with _GRAD_LOCK:
            if _GRAD_MODE is None:
                _GRAD_MODE = "analytic" if _gradient_formula_ok() else "fd"
    return _GRAD_MODE


def solve(v_rho: CovarianceMatrix, cfg: SolverConfig | None = None) -> SolveResult:
    """Reverse relative entropy of entanglement of a faithful Gaussian state.

    Returns the optimal value in bits together with the optimizing
    separable covariance, the A-side certificate gamma, and convergence
    diagnostics.  The value is 0 (up to the duality gap) iff the input is
    separable.
    """
    cfg = cfg or SolverConfig()
    if not isinstance(v_rho, CovarianceMatrix):
        raise DomainError("solve expects a CovarianceMatrix with an (A|B) split")
    ok, min_eig = check_bona_fide(v_rho)
    if not ok:
        raise DomainError(f"rho is not bona fide (min eig {min_eig:.3g})")
    spectrum = symplectic_spectrum(v_rho.entries)
    if spectrum[-1] <= 1.0 + cfg.faithfulness_floor:
        raise NotFaithfulError(spectrum[-1])

    m_rho = v_rho.entries
    na, nb = v_rho.n_modes_a, v_rho.n_modes_b
    da, d = 2 * na, 2 * (na + nb)
    g_rho = gibbs_matrix(m_rho, cfg.faithfulness_floor)
    log2_z_rho = log2_Z(m_rho, cfg.faithfulness_floor)
    omega = symplectic_form(na + nb)
    omega_a = symplectic_form(na)
    y1 = np.zeros((d, d))
    y1[da:, da:] = -symplectic_form(nb)

    n_v = sym_dim(d)
    mode = _gradient_mode(cfg)

    def unpack(xvec):
        return vec_to_sym(xvec[:n_v], d), vec_to_sym(xvec[n_v:], da)

    def parts(xvec):
        v, gamma = unpack(xvec)
        x1 = v.copy()
        x1[:da, :da] -= gamma
        return v, gamma, x1

    def feasible(xvec):
        v, gamma, x1 = parts(xvec)
        return (
            herm_logdet(v, omega) is not None
            and herm_logdet(x1, y1) is not None
            and herm_logdet(gamma, omega_a) is not None
        )

    def obj_grad_matrix(v):
        if mode == "analytic":
            return _objective_grad_analytic(v, g_rho)
        return _objective_grad_fd(v, g_rho, log2_z_rho)

    def make_value_grad(mu):
        mu_f = 1e-3 * mu

        def value(xvec):
            v, gamma, x1 = parts(xvec)
            val = _objective_value(v, g_rho, log2_z_rho)
            val -= mu * (herm_logdet(x1, y1) + herm_logdet(gamma, omega_a))
            val -= mu_f * herm_logdet(v, omega)
            return val

        def grad(xvec):
            v, gamma, x1 = parts(xvec)
            inv1 = herm_inv_real(x1, y1)
            inv2 = herm_inv_real(gamma, omega_a)
            inv0 = herm_inv_real(v, omega)
            g_v = obj_grad_matrix(v) - mu * inv1 - mu_f * inv0
            g_gamma = mu * (inv1[:da, :da] - inv2)
            return np.concatenate([grad_to_vec(g_v), grad_to_vec(g_gamma)])

        return value, grad

    x = np.concatenate([sym_to_vec(3.0 * np.eye(d)), sym_to_vec(2.0 * np.eye(da))])
    theta = (d + da) + 1e-3 * d
    mu = cfg.barrier_mu_initial
    trace: list[float] = []
    total_iters = 0
    status = "max_iter"
    for _ in range(cfg.max_outer):
        value, grad = make_value_grad(mu)
        # binding slacks scale with mu on the central path; keep the
        # Hessian differencing step well inside them
        fd_step = max(1e-10, min(1e-6, 1e-2 * mu))
        x, _, iters, _ = damped_newton(
            value,
            grad,
            x,
            feasible,
            tol=cfg.newton_tol,
            max_iter=cfg.max_inner,
            fd_step=fd_step,
        )
        total_iters += iters
        v_cur, _, _ = parts(x)
        trace.append(_objective_value(v_cur, g_rho, log2_z_rho))
        if mu * theta < cfg.outer_tol:
            status = "converged"
            break
        mu *= cfg.barrier_decay

    v_fin, gamma_fin = unpack(x)
    value_bits = _objective_value(v_fin, g_rho, log2_z_rho)
    return SolveResult(
        value_bits=float(value_bits),
        v_sigma_opt=CovarianceMatrix(na, nb, v_fin),
        gamma_a_opt=gamma_fin,
        iterations=total_iters,
        duality_gap_estimate=float(mu * theta),
        status=status,
        objective_trace=trace,
    )


def fd_objective_gradient(v_sigma, v_rho, step: float = 1e-5) -> np.ndarray:
    """Finite-difference counterpart of objective_gradient (testing hook)."""
    if isinstance(v_sigma, CovarianceMatrix):
        v_sigma = v_sigma.entries
    if isinstance(v_rho, CovarianceMatrix):
        v_rho = v_rho.entries
    g_rho = gibbs_matrix(v_rho)
    return _objective_grad_fd(np.asarray(v_sigma, float), g_rho, log2_Z(v_rho), step)
