"""Damped-Newton inner loop used by the interior-point solvers.

The convex programs in this package are small (tens of variables), so the
Hessian is formed by central finite differences of an analytic gradient
with per-coordinate steps scaled to the iterate, and the Newton system is
solved with escalating Levenberg damping if the factorization balks.
Feasibility (all barrier matrices positive definite) is enforced by the
line search, never assumed.
"""

from __future__ import annotations

import numpy as np


def fd_hessian(grad_fn, x: np.ndarray, rel_step: float = 1e-6) -> np.ndarray:
    """Central-difference Hessian of a gradient map; symmetrized."""
    n = x.size
    h = np.empty((n, n))
    for k in range(n):
        step = rel_step * (1.0 + abs(x[k]))
        up = x.copy()
        dn = x.copy()
        up[k] += step
        dn[k] -= step
        g_up = grad_fn(up)
        g_dn = grad_fn(dn)
        h[:, k] = (g_up - g_dn) / (2.0 * step)
    return 0.5 * (h + h.T)


def damped_newton(
    value_fn,
    grad_fn,
    x0: np.ndarray,
    feasible_fn,
    *,
    tol: float = 1e-9,
    max_iter: int = 100,
    fd_step: float = 1e-6,
) -> tuple[np.ndarray, float, int, bool]:
    """Minimize a smooth convex function inside an open feasible region.

    value_fn / grad_fn evaluate the objective and its gradient (the caller
    guarantees both are finite on feasible points); feasible_fn tests
    strict feasibility.  Returns (x, f, iterations, converged); converged
    means the Newton decrement condition lambda^2 / 2 < tol was met.
    """
    x = x0.copy()
    if not feasible_fn(x):
        raise ValueError("damped_newton requires a strictly feasible start")
    f = value_fn(x)
    converged = False
    iters = 0
    for iters in range(1, max_iter + 1):
        g = grad_fn(x)
        h = fd_hessian(grad_fn, x, fd_step)
        lam = 0.0
        step = None
        base = max(1.0, float(np.trace(h)) / h.shape[0])
        for _ in range(60):
            try:
                step = np.linalg.solve(h + lam * np.eye(h.shape[0]), -g)
            except np.linalg.LinAlgError:
                step = None
            if step is not None and np.dot(g, step) < 0.0:
                break
            lam = max(2.0 * lam, 1e-12 * base)
        if step is None or np.dot(g, step) >= 0.0:
            # fall back to steepest descent if the Hessian is hopeless
            step = -g
        decrement = -float(np.dot(g, step))
        if 0.5 * decrement < tol:
            converged = True
            break
        sigma = 1.0
        accepted = False
        for _ in range(70):
            cand = x + sigma * step
            if feasible_fn(cand):
                f_cand = value_fn(cand)
                if f_cand <= f - 1e-4 * sigma * decrement:
                    x, f = cand, f_cand
                    accepted = True
                    break
            sigma *= 0.5
        if not accepted:
            # no productive step at any scale: declare local convergence
            converged = 0.5 * decrement < max(tol, 1e2 * np.finfo(float).eps * (1 + abs(f)))
            break
    return x, f, iters, converged
