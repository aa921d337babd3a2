"""Symplectic phase-space toolbox for N-mode bosonic Gaussian states.

Conventions (hbar = 1, vacuum covariance = identity):

* quadratures are interleaved per mode, R = (x_1, p_1, ..., x_N, p_N);
* the symplectic form is Omega = direct sum of [[0, 1], [-1, 0]] blocks;
* a real symmetric 2N x 2N matrix V is a bona fide covariance matrix iff
  V + i Omega >= 0;
* Williamson: V = S W S^T with S symplectic and W = diag(nu_1, nu_1, ...,
  nu_N, nu_N), nu_j >= 1.

The Gibbs matrix G of a faithful state (all nu_j > 1) collects the
coefficients of the quadratic Hamiltonian whose Gibbs state has covariance
V; it is computed through the symplectic action of arcoth,

    G = -Omega arcoth_*(V) Omega,     arcoth_*(V) = S arcoth(W) S^T,

and the normalization constant obeys

    log2 Z = (1/2) sum_j log2(nu_j^2 - 1) - N.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._linalg import (
    check_finite,
    check_symmetric,
    herm_min_eig,
    symmetrize,
)
from .errors import DomainError, NotFaithfulError, ValidationError

BONA_FIDE_TOL = 1e-10
FAITHFULNESS_TOL = 1e-9


def symplectic_form(n_modes: int) -> np.ndarray:
    """Symplectic form Omega for n_modes modes, xp-interleaved ordering."""
    if n_modes < 0:
        raise ValidationError("n_modes must be nonnegative")
    block = np.array([[0.0, 1.0], [-1.0, 0.0]])
    omega = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        omega[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = block
    return omega


@dataclass(frozen=True)
class CovarianceMatrix:
    """Covariance matrix of an (n_modes_a + n_modes_b)-mode Gaussian state.

    The first 2*n_modes_a rows/columns belong to subsystem A.  Entries are
    validated for shape, finiteness and symmetry on construction and stored
    symmetrized and read-only.
    """

    n_modes_a: int
    n_modes_b: int
    entries: np.ndarray

    def __post_init__(self):
        if int(self.n_modes_a) != self.n_modes_a or int(self.n_modes_b) != self.n_modes_b:
            raise ValidationError("mode counts must be integers")
        object.__setattr__(self, "n_modes_a", int(self.n_modes_a))
        object.__setattr__(self, "n_modes_b", int(self.n_modes_b))
        if self.n_modes_a < 1 or self.n_modes_b < 0:
            raise ValidationError(
                "need n_modes_a >= 1 and n_modes_b >= 0, got "
                f"({self.n_modes_a}, {self.n_modes_b})"
            )
        m = np.asarray(self.entries, dtype=float)
        d = 2 * self.n_modes
        if m.shape != (d, d):
            raise ValidationError(
                f"covariance for {self.n_modes} modes must be {d}x{d}, got {m.shape}"
            )
        check_finite(m, "covariance")
        check_symmetric(m, "covariance")
        m = symmetrize(m)
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)

    @property
    def n_modes(self) -> int:
        return self.n_modes_a + self.n_modes_b


def _as_matrix(v) -> np.ndarray:
    if isinstance(v, CovarianceMatrix):
        return v.entries
    m = np.asarray(v, dtype=float)
    check_finite(m)
    check_symmetric(m)
    if m.shape[0] % 2:
        raise ValidationError("covariance dimension must be even")
    return symmetrize(m)


def check_bona_fide(v, tol: float = BONA_FIDE_TOL) -> tuple[bool, float]:
    """Uncertainty-principle test V + i Omega >= 0.

    Returns (ok, min_eig) where min_eig is the smallest eigenvalue of the
    Hermitian matrix V + i Omega; ok means min_eig >= -tol.
    """
    m = _as_matrix(v)
    omega = symplectic_form(m.shape[0] // 2)
    min_eig = herm_min_eig(m, omega)
    return bool(min_eig >= -tol), min_eig


class WilliamsonDecomposition(NamedTuple):
    symplectic: np.ndarray
    spectrum: np.ndarray


def williamson(v) -> WilliamsonDecomposition:
    """Williamson normal form V = S diag(nu x 2) S^T.

    The spectrum is returned in descending order.  S is obtained from the
    eigenvectors of the Hermitian matrix i V^{1/2} Omega V^{1/2}: for a unit
    eigenvector w with eigenvalue nu > 0, the real pair a = sqrt(2) Re w,
    b = -sqrt(2) Im w satisfies (V^{1/2} Omega V^{1/2}) [a b] = [a b] nu J,
    and orthogonality of the Hermitian eigenbasis makes K = [a_1 b_1 ...]
    orthogonal (the +nu and -nu eigenspaces are conjugate, hence mutually
    orthogonal, even inside degenerate clusters).  Then

        S = V^{1/2} K W^{-1/2}

    reconstructs the decomposition; S is symplectic because its inverse
    transpose V^{-1/2} K W^{1/2} manifestly preserves Omega.
    """
    m = _as_matrix(v)
    n = m.shape[0] // 2
    evals, evecs = np.linalg.eigh(m)
    if evals[0] <= 0:
        raise DomainError(
            f"covariance must be positive definite; smallest eigenvalue {evals[0]:.3g}"
        )
    sqrt_m = (evecs * np.sqrt(evals)) @ evecs.T
    omega = symplectic_form(n)
    herm = 1j * (sqrt_m @ omega @ sqrt_m)
    lam, u = np.linalg.eigh(herm)
    order = np.argsort(-lam)[:n]
    spectrum = lam[order].copy()
    k = np.empty((2 * n, 2 * n))
    for j, idx in enumerate(order):
        w = u[:, idx]
        k[:, 2 * j] = np.sqrt(2.0) * w.real
        k[:, 2 * j + 1] = -np.sqrt(2.0) * w.imag
    s = sqrt_m @ k / np.sqrt(np.repeat(spectrum, 2))
    return WilliamsonDecomposition(s, spectrum)


def symplectic_spectrum(v) -> np.ndarray:
    """Symplectic eigenvalues of V in descending order."""
    m = _as_matrix(v)
    n = m.shape[0] // 2
    w, q = np.linalg.eigh(m)
    if w[0] <= 0:
        raise DomainError(
            f"covariance must be positive definite; smallest eigenvalue {w[0]:.3g}"
        )
    sqrt_m = (q * np.sqrt(w)) @ q.T
    herm = 1j * (sqrt_m @ symplectic_form(n) @ sqrt_m)
    lam = np.linalg.eigvalsh(herm)
    return np.sort(lam[n:])[::-1]


def symplectic_action(v, fn) -> np.ndarray:
    """f_*(V) = S f(W) S^T for a scalar function applied to the spectrum."""
    s, spectrum = williamson(v)
    vals = fn(np.repeat(spectrum, 2))
    return symmetrize((s * vals) @ s.T)


def gibbs_matrix(v, faithfulness_tol: float = FAITHFULNESS_TOL) -> np.ndarray:
    """Gibbs matrix G = -Omega arcoth_*(V) Omega of a faithful state."""
    m = _as_matrix(v)
    s, spectrum = williamson(m)
    if spectrum[-1] <= 1.0 + faithfulness_tol:
        raise NotFaithfulError(spectrum[-1])
    arc = np.arctanh(1.0 / np.repeat(spectrum, 2))
    star = symmetrize((s * arc) @ s.T)
    omega = symplectic_form(m.shape[0] // 2)
    return symmetrize(-omega @ star @ omega)


def log2_Z(v, faithfulness_tol: float = FAITHFULNESS_TOL) -> float:
    """log2 of the Gibbs normalization, (1/2) sum log2(nu^2 - 1) - N."""
    spectrum = symplectic_spectrum(v)
    if spectrum[-1] <= 1.0 + faithfulness_tol:
        raise NotFaithfulError(spectrum[-1])
    n = len(spectrum)
    return float(0.5 * np.sum(np.log2(spectrum**2 - 1.0)) - n)


# --- JSON serialization --------------------------------------------------

_COV_KEYS = {"n_modes_a", "n_modes_b", "entries"}


def covariance_to_json(cov: CovarianceMatrix) -> dict:
    return {
        "n_modes_a": cov.n_modes_a,
        "n_modes_b": cov.n_modes_b,
        "entries": [float(x) for x in cov.entries.ravel()],
    }


def covariance_from_json(obj) -> CovarianceMatrix:
    if not isinstance(obj, dict):
        raise ValidationError("covariance JSON must be an object")
    missing = _COV_KEYS - set(obj)
    if missing:
        raise ValidationError(f"covariance JSON missing keys: {sorted(missing)}")
    unknown = set(obj) - _COV_KEYS
    if unknown:
        raise ValidationError(f"covariance JSON has unknown keys: {sorted(unknown)}")
    na, nb = obj["n_modes_a"], obj["n_modes_b"]
    if not isinstance(na, int) or not isinstance(nb, int) or isinstance(na, bool) or isinstance(nb, bool):
        raise ValidationError("mode counts must be integers")
    entries = obj["entries"]
    if not isinstance(entries, list) or not all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in entries
    ):
        raise ValidationError("entries must be a flat list of numbers")
    d = 2 * (na + nb)
    if len(entries) != d * d:
        raise ValidationError(
            f"entries has length {len(entries)}, expected {d * d} for {na}+{nb} modes"
        )
    m = np.array(entries, dtype=float).reshape(d, d)
    return CovarianceMatrix(na, nb, m)


def _reject_constant(token: str):
    raise ValidationError(f"non-finite number {token!r} in JSON input")


def loads_covariance(text: str) -> CovarianceMatrix:
    try:
        obj = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from exc
    return covariance_from_json(obj)


def load_covariance(path) -> CovarianceMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_covariance(fh.read())
