"""Two-mode normal form machinery and the reduced optimization path.

Normal-form states have covariance

    V(x, y, z) = [[x I,       z sigma_3],
                  [z sigma_3, y I      ]],        sigma_3 = diag(1, -1),

which is bona fide iff x >= 1, y >= 1 and z^2 <= xy - 1 - |x - y|.  The
symplectic spectrum comes in closed form,

    nu_1 = (sqrt((x+y)^2 - 4 z^2) + (x - y)) / 2,
    nu_2 = (sqrt((x+y)^2 - 4 z^2) + (y - x)) / 2,

and the Williamson symplectic is an orthogonal two-mode squeezer with
weights

    omega_pm = sqrt((x + y +- sqrt((x+y)^2 - 4z^2)) / (2 sqrt((x+y)^2 - 4z^2))).

For faithful normal-form states the Gibbs matrix is again of normal form
with parameters

    alpha = omega_+^2 arcoth(nu_1) + omega_-^2 arcoth(nu_2)
    beta  = omega_-^2 arcoth(nu_1) + omega_+^2 arcoth(nu_2)
    gamma = -sign(z) omega_+ omega_- (arcoth(nu_1) + arcoth(nu_2)).

The reverse relative entropy of entanglement of a faithful entangled
normal-form state is attained on the border-separable surface
z^2 = (x-1)(y-1), parametrized by the optimizer's symplectic pair through

    x = (1 + n1 n2 + n1 - n2)/2,  y = (1 + n1 n2 + n2 - n1)/2,
    |z| = sqrt((n1^2 - 1)(n2^2 - 1)) / 2,

with sign(z) opposite to sign(gamma_rho); solve_reduced minimizes the
two-variable objective over that surface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .entropies import LN2, bosonic_g
from .errors import DomainError, NotFaithfulError, ValidationError
from .symplectic import CovarianceMatrix, FAITHFULNESS_TOL, williamson

SIGMA0 = np.eye(2)
SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA3 = np.diag([1.0, -1.0])

BONA_FIDE_TOL = 1e-10


def _arcoth(x: float) -> float:
    return math.atanh(1.0 / x)


@dataclass(frozen=True)
class NormalForm:
    """Parameters (x, y, z) of a two-mode normal-form covariance."""

    x: float
    y: float
    z: float

    def is_bona_fide(self, tol: float = BONA_FIDE_TOL) -> bool:
        x, y, z = self.x, self.y, self.z
        return (
            x >= 1.0 - tol
            and y >= 1.0 - tol
            and z * z <= x * y - 1.0 - abs(x - y) + tol * max(1.0, x * y)
        )

    def symplectic_pair(self) -> tuple[float, float]:
        """(nu_1, nu_2) tied to the x and y modes respectively (not sorted)."""
        x, y, z = self.x, self.y, self.z
        disc = (x + y) ** 2 - 4.0 * z * z
        if disc < 0.0:
            raise DomainError("normal form has (x+y)^2 < 4 z^2; not a valid state")
        root = math.sqrt(disc)
        return 0.5 * (root + x - y), 0.5 * (root + y - x)

    def matrix(self) -> CovarianceMatrix:
        v = np.block(
            [[self.x * SIGMA0, self.z * SIGMA3], [self.z * SIGMA3, self.y * SIGMA0]]
        )
        return CovarianceMatrix(1, 1, v)


def _check_bona_fide_nf(nf: NormalForm):
    if not nf.is_bona_fide():
        raise DomainError(
            f"normal form (x={nf.x:.12g}, y={nf.y:.12g}, z={nf.z:.12g}) is not bona fide"
        )


def _squeezer_weights(nf: NormalForm) -> tuple[float, float]:
    """omega_+ and omega_- of the Williamson two-mode squeezer."""
    x, y, z = nf.x, nf.y, nf.z
    root = math.sqrt((x + y) ** 2 - 4.0 * z * z)
    w_plus = math.sqrt((x + y + root) / (2.0 * root))
    w_minus = math.sqrt(max(x + y - root, 0.0) / (2.0 * root))
    return w_plus, w_minus


def gibbs_normal_form(
    nf: NormalForm, faithfulness_tol: float = FAITHFULNESS_TOL
) -> tuple[float, float, float]:
    """Gibbs parameters (alpha, beta, gamma) of a faithful normal-form state."""
    _check_bona_fide_nf(nf)
    nu1, nu2 = nf.symplectic_pair()
    if min(nu1, nu2) <= 1.0 + faithfulness_tol:
        raise NotFaithfulError(min(nu1, nu2))
    return _gibbs_from_spectrum(nf, nu1, nu2)


def _gibbs_from_spectrum(
    nf: NormalForm, nu1: float, nu2: float
) -> tuple[float, float, float]:
    w_plus, w_minus = _squeezer_weights(nf)
    a1, a2 = _arcoth(nu1), _arcoth(nu2)
    alpha = w_plus**2 * a1 + w_minus**2 * a2
    beta = w_minus**2 * a1 + w_plus**2 * a2
    gamma = -math.copysign(1.0, nf.z) * w_plus * w_minus * (a1 + a2)
    if nf.z == 0.0:
        gamma = 0.0
    return alpha, beta, gamma


def log2_z_normal_form(
    nf: NormalForm, faithfulness_tol: float = FAITHFULNESS_TOL
) -> float:
    nu1, nu2 = nf.symplectic_pair()
    if min(nu1, nu2) <= 1.0 + faithfulness_tol:
        raise NotFaithfulError(min(nu1, nu2))
    return 0.5 * (math.log2(nu1**2 - 1.0) + math.log2(nu2**2 - 1.0)) - 2.0


def objective_bits(
    sigma: NormalForm,
    rho_gibbs: tuple[float, float, float],
    log2_z_rho: float,
) -> float:
    """Relative-entropy objective F(sigma) against a normal-form rho, in bits.

    F = (x alpha + y beta + 2 z gamma) / ln 2 - g(nu_1) - g(nu_2) + log2 Z_rho,
    using sigma's parameters and rho's Gibbs triple; equals
    relative_entropy(sigma.matrix(), rho.matrix()) whenever both are valid.
    """
    alpha, beta, gamma = rho_gibbs
    nu1, nu2 = sigma.symplectic_pair()
    tr_term = (sigma.x * alpha + sigma.y * beta + 2.0 * sigma.z * gamma) / LN2
    return tr_term - bosonic_g(nu1) - bosonic_g(nu2) + log2_z_rho


# --- reduction of generic two-mode covariances to normal form -------------


def _one_mode_reducer(block: np.ndarray) -> tuple[np.ndarray, float]:
    """Symplectic L with L A L^T = sqrt(det A) I for a 2x2 SPD block."""
    cov = CovarianceMatrix(1, 0, block)
    s, spec = williamson(cov)
    return np.linalg.inv(s), float(spec[0])


def twirl_to_normal_form(v: CovarianceMatrix, tol: float = 1e-10) -> tuple[NormalForm, list[str]]:
    """Normal-form parameters of a two-mode state, with a log of the steps.

    States already in normal form are read off directly.  Otherwise the
    diagonal blocks are brought to multiples of the identity by local
    one-mode symplectics and the off-diagonal block is rotated to its
    diag(c+, c-) form; the state belongs to the normal-form class iff
    c- = -c+ there, i.e. the off block is a rotation of z sigma_3.  States
    whose invariants are incompatible with the class (det of the off block
    positive) are rejected.
    """
    if not isinstance(v, CovarianceMatrix):
        v = CovarianceMatrix(1, 1, np.asarray(v, dtype=float))
    if v.n_modes_a != 1 or v.n_modes_b != 1:
        raise ValidationError(
            f"normal-form reduction needs a 1+1-mode state, got {v.n_modes_a}+{v.n_modes_b}"
        )
    m = v.entries
    a, b, c = m[:2, :2], m[2:, 2:], m[:2, 2:]
    scale = max(1.0, float(np.max(np.abs(m))))
    log: list[str] = []

    def close(p, q):
        return np.max(np.abs(p - q)) <= tol * scale

    if (
        close(a, a[0, 0] * SIGMA0)
        and close(b, b[0, 0] * SIGMA0)
        and close(c, c[0, 0] * SIGMA3)
    ):
        log.append("read-off: input already in normal form")
        nf = NormalForm(float(a[0, 0]), float(b[0, 0]), float(c[0, 0]))
        _check_bona_fide_nf(nf)
        return nf, log

    la, x_val = _one_mode_reducer(a)
    lb, y_val = _one_mode_reducer(b)
    c_red = la @ c @ lb.T
    log.append("local one-mode symplectics brought both diagonal blocks to multiples of I")

    u, sv, wt = np.linalg.svd(c_red)
    # fold the determinant signs into the singular values so u, w stay rotations
    du, dw = np.linalg.det(u), np.linalg.det(wt)
    flip = np.diag([1.0, du * dw])
    c_plus = sv[0]
    c_minus = sv[1] * du * dw
    log.append("off-diagonal block rotated to diag(c+, c-) by local rotations")

    off_scale = max(1.0, abs(c_plus))
    if abs(c_plus + c_minus) > 1e-8 * off_scale:
        raise ValidationError(
            "state is outside the normal-form class: off-diagonal block reduces to "
            f"diag({c_plus:.6g}, {c_minus:.6g}) with c- != -c+; its determinant is a "
            "local invariant, use the full solver instead"
        )
    nf = NormalForm(x_val, y_val, float(c_plus))
    _check_bona_fide_nf(nf)
    log.append(f"normal form x={x_val:.12g} y={y_val:.12g} z={c_plus:.12g}")
    return nf, log


# --- border-separable surface and the reduced solver ----------------------


@dataclass(frozen=True)
class BorderPoint:
    """Point on the border-separable surface z^2 = (x-1)(y-1)."""

    nu1: float
    nu2: float

    def normal_form(self, z_sign: float = 1.0) -> NormalForm:
        n1, n2 = self.nu1, self.nu2
        x = 0.5 * (1.0 + n1 * n2 + n1 - n2)
        y = 0.5 * (1.0 + n1 * n2 + n2 - n1)
        z_abs = 0.5 * math.sqrt(max((n1 * n1 - 1.0) * (n2 * n2 - 1.0), 0.0))
        return NormalForm(x, y, math.copysign(z_abs, z_sign) if z_abs else 0.0)


def is_separable_two_mode(nf: NormalForm, tol: float = 1e-12) -> bool:
    """PPT/separability test z^2 <= (x-1)(y-1) for normal-form states."""
    _check_bona_fide_nf(nf)
    return nf.z * nf.z <= (nf.x - 1.0) * (nf.y - 1.0) + tol


def first_order_residuals(
    nu1: float, nu2: float, alpha: float, beta: float, gamma: float
) -> tuple[float, float]:
    """Stationarity residuals of the border objective at (nu1, nu2).

    These are ln2 times the partial derivatives of the objective along the
    border parametrization, with z carrying the optimal sign so that
    z * gamma = -|z| |gamma|; gamma enters through -|gamma|.
    """
    ga = -abs(gamma)
    ratio12 = math.sqrt((nu2 * nu2 - 1.0) / (nu1 * nu1 - 1.0))
    r1 = (
        alpha * (nu2 + 1.0) / 2.0
        + beta * (nu2 - 1.0) / 2.0
        + ga * nu1 * ratio12
        - _arcoth(nu1)
    )
    r2 = (
        alpha * (nu1 - 1.0) / 2.0
        + beta * (nu1 + 1.0) / 2.0
        + ga * nu2 / ratio12
        - _arcoth(nu2)
    )
    return r1, r2


@dataclass
class ReducedResult:
    value_bits: float
    sigma: NormalForm
    border: BorderPoint
    residuals: tuple[float, float] | None
    iterations: int
    status: str
    log: list[str] = field(default_factory=list)


_NU_FLOOR = 1e-12  # lower bound on nu - 1 in the log parametrization


def _minimize_border(
    alpha: float,
    beta: float,
    gamma: float,
    log2_z_rho: float,
    nu_init: tuple[float, float],
) -> tuple[BorderPoint, float, int, bool]:
    """Minimize the border objective; returns (point, value, nfev, interior)."""
    ga = -abs(gamma)

    def value_grad(ell):
        n1 = 1.0 + math.exp(ell[0])
        n2 = 1.0 + math.exp(ell[1])
        x = 0.5 * (1.0 + n1 * n2 + n1 - n2)
        y = 0.5 * (1.0 + n1 * n2 + n2 - n1)
        z_abs = 0.5 * math.sqrt((n1 * n1 - 1.0) * (n2 * n2 - 1.0))
        f = (
            (x * alpha + y * beta + 2.0 * z_abs * ga) / LN2
            - bosonic_g(n1)
            - bosonic_g(n2)
            + log2_z_rho
        )
        r1, r2 = first_order_residuals(n1, n2, alpha, beta, gamma)
        grad = np.array([r1 * (n1 - 1.0), r2 * (n2 - 1.0)]) / LN2
        return f, grad

    bounds = [(math.log(_NU_FLOOR), 50.0)] * 2
    starts = []
    n1g = max(nu_init[0], 1.0 + 1e-6)
    n2g = max(nu_init[1], 1.0 + 1e-6)
    for f1, f2 in ((1.0, 1.0), (0.2, 1.0), (8.0, 1.0)):
        s1 = max(f1 * (n1g - 1.0), _NU_FLOOR * 10)
        s2 = max(f2 * (n2g - 1.0), _NU_FLOOR * 10)
        starts.append(np.log([s1, s2]))

    best = None
    nfev = 0
    for start in starts:
        res = minimize(
            value_grad,
            start,
            jac=True,
            method="L-BFGS-B",
            bounds=bounds,
            options={"maxiter": 400, "ftol": 1e-15, "gtol": 1e-12},
        )
        nfev += res.nfev
        if best is None or res.fun < best.fun:
            best = res

    ell = best.x
    interior = bool(np.all(ell > math.log(_NU_FLOOR) + 1.0))
    nu = 1.0 + np.exp(ell)

    if interior:
        # Newton polish on the stationarity system to push residuals down
        for _ in range(40):
            r = np.array(first_order_residuals(nu[0], nu[1], alpha, beta, gamma))
            if max(abs(r[0]), abs(r[1])) < 1e-12:
                break
            jac = np.empty((2, 2))
            for k in range(2):
                h = 1e-7 * max(1.0, abs(nu[k] - 1.0))
                up, dn = nu.copy(), nu.copy()
                up[k] += h
                dn[k] -= h
                if dn[k] <= 1.0:
                    dn[k] = nu[k]
                    h = up[k] - nu[k]
                    r_dn = r
                else:
                    r_dn = np.array(
                        first_order_residuals(dn[0], dn[1], alpha, beta, gamma)
                    )
                r_up = np.array(first_order_residuals(up[0], up[1], alpha, beta, gamma))
                jac[:, k] = (r_up - r_dn) / (up[k] - dn[k])
            try:
                step = np.linalg.solve(jac, -r)
            except np.linalg.LinAlgError:
                break
            damping = 1.0
            while damping > 1e-4 and np.any(nu + damping * step <= 1.0 + _NU_FLOOR):
                damping *= 0.5
            cand = nu + damping * step
            if np.any(cand <= 1.0 + _NU_FLOOR):
                break
            r_cand = np.array(
                first_order_residuals(cand[0], cand[1], alpha, beta, gamma)
            )
            if np.max(np.abs(r_cand)) >= np.max(np.abs(r)):
                break
            nu = cand

    point = BorderPoint(float(nu[0]), float(nu[1]))
    f_final, _ = value_grad(np.log(nu - 1.0))
    return point, float(f_final), nfev, interior


def solve_reduced(rho: NormalForm, faithfulness_tol: float = FAITHFULNESS_TOL) -> ReducedResult:
    """Reverse relative entropy of entanglement of a normal-form state.

    rho must be bona fide and faithful.  Separable inputs return value 0
    with a trivial certificate.  For entangled inputs the result carries
    the optimizing border point, the objective value in bits, and the
    stationarity residuals at the optimizer (None when the optimizer sits
    on the nu = 1 boundary).
    """
    _check_bona_fide_nf(rho)
    nu1_rho, nu2_rho = rho.symplectic_pair()
    if min(nu1_rho, nu2_rho) <= 1.0 + faithfulness_tol:
        raise NotFaithfulError(min(nu1_rho, nu2_rho))
    log: list[str] = []
    if is_separable_two_mode(rho):
        return ReducedResult(
            value_bits=0.0,
            sigma=rho,
            border=BorderPoint(nu1_rho, nu2_rho),
            residuals=(0.0, 0.0),
            iterations=0,
            status="separable",
            log=["input separable; optimizer is the state itself"],
        )

    work = rho
    swapped = False
    alpha, beta, gamma = gibbs_normal_form(work, faithfulness_tol)
    if alpha > beta:
        work = NormalForm(rho.y, rho.x, rho.z)
        alpha, beta = beta, alpha
        swapped = True
        log.append("modes relabeled so that alpha <= beta")
    l2z = log2_z_normal_form(work, faithfulness_tol)

    nu_work = work.symplectic_pair()
    point, value, nfev, interior = _minimize_border(
        alpha, beta, gamma, l2z, (max(nu_work), min(nu_work))
    )
    z_sign = -math.copysign(1.0, gamma) if gamma != 0.0 else 1.0
    sigma = point.normal_form(z_sign)
    residuals = (
        first_order_residuals(point.nu1, point.nu2, alpha, beta, gamma)
        if interior
        else None
    )
    if swapped:
        sigma = NormalForm(sigma.y, sigma.x, sigma.z)
        point = BorderPoint(point.nu2, point.nu1)
        if residuals is not None:
            residuals = (residuals[1], residuals[0])
        log.append("optimizer relabeled back to the input mode order")
    status = "converged" if interior else "boundary"
    return ReducedResult(
        value_bits=value,
        sigma=sigma,
        border=point,
        residuals=residuals,
        iterations=nfev,
        status=status,
        log=log,
    )
