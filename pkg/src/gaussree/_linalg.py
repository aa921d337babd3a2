"""Dense linear-algebra helpers shared across the package.

Hermitian matrices of the form H = X + iY (X real symmetric, Y real
antisymmetric) are handled through the real embedding

    E(H) = [[X, -Y],
            [Y,  X]]

which is real symmetric, carries every eigenvalue of H twice and has
det E = (det H)^2.  All positive-definiteness tests, log-determinants and
inverses needed by the solvers go through this embedding so the hot paths
stay in real arithmetic.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError

SYM_RTOL = 1e-12


def check_symmetric(m: np.ndarray, name: str = "matrix") -> None:
    """Raise ValidationError if m is not symmetric to 1e-12 relative tolerance."""
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m))))
    gap = np.abs(m - m.T)
    worst = float(np.max(gap))
    if worst > SYM_RTOL * scale:
        i, j = np.unravel_index(int(np.argmax(gap)), gap.shape)
        raise ValidationError(
            f"{name} is not symmetric: entries ({i},{j})={m[i, j]:.12g} and "
            f"({j},{i})={m[j, i]:.12g} differ by {worst:.3g}"
        )


def check_finite(m: np.ndarray, name: str = "matrix") -> None:
    if not np.all(np.isfinite(m)):
        raise ValidationError(f"{name} contains NaN or infinite entries")


def symmetrize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.T)


def herm_embed(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Real embedding of the Hermitian matrix X + iY."""
    return np.block([[x, -y], [y, x]])


def herm_min_eig(x: np.ndarray, y: np.ndarray) -> float:
    """Smallest eigenvalue of X + iY."""
    return float(np.linalg.eigvalsh(herm_embed(x, y))[0])


def herm_logdet(x: np.ndarray, y: np.ndarray) -> float | None:
    """ln det(X + iY) for positive definite X + iY, else None.

    Uses a Cholesky factorization of the embedding, so the PD test and the
    determinant come out of one shot; ln det E = 2 ln det H.
    """
    try:
        chol = np.linalg.cholesky(herm_embed(x, y))
    except np.linalg.LinAlgError:
        return None
    return float(np.sum(np.log(np.diag(chol))))


def herm_inv_real(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Real part of (X + iY)^{-1}.

    The embedding is an algebra homomorphism, so E(H)^{-1} = E(H^{-1}) and
    the top-left block is Re(H^{-1}).
    """
    d = x.shape[0]
    inv = np.linalg.inv(herm_embed(x, y))
    return symmetrize(inv[:d, :d])


# --- packing of symmetric matrices into flat coordinate vectors ---------

def sym_dim(d: int) -> int:
    return d * (d + 1) // 2


def sym_to_vec(m: np.ndarray) -> np.ndarray:
    """Upper-triangular entries of a symmetric matrix, row-major."""
    d = m.shape[0]
    return m[np.triu_indices(d)]


def vec_to_sym(v: np.ndarray, d: int) -> np.ndarray:
    m = np.zeros((d, d))
    iu = np.triu_indices(d)
    m[iu] = v
    m.T[iu] = v
    return m


def grad_to_vec(g: np.ndarray) -> np.ndarray:
    """Gradient wrt the packed coordinates of a symmetric matrix.

    If df = tr(G dM) with M symmetric and G symmetric, the derivative wrt
    the packed entry m_ij (i < j) is 2 G_ij because the perturbation hits
    both (i,j) and (j,i).
    """
    d = g.shape[0]
    scaled = 2.0 * g - np.diag(np.diag(g))
    return scaled[np.triu_indices(d)]
