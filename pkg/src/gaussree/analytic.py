"""Finite-dimensional reference formulas used as independent test oracles.

Nothing here touches covariance matrices: binary relative entropy, its
tilted minimization, the isotropic-state reverse relative entropy of
entanglement, and a Fock-basis evaluation of the relative entropy between
product thermal states.  The Gaussian machinery is tested against these.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import DomainError, ValidationError

LN2 = math.log(2.0)


def d_bin(q: float, p: float) -> float:
    """Binary relative entropy D(q || p) in bits.

    Conventions: 0 log 0 = 0; the value is +inf when p sits on the boundary
    {0, 1} while q does not match it.
    """
    if not 0.0 <= q <= 1.0 or not 0.0 <= p <= 1.0:
        raise DomainError(f"probabilities must lie in [0, 1], got q={q}, p={p}")
    if p in (0.0, 1.0):
        return 0.0 if q == p else math.inf
    value = 0.0
    if q > 0.0:
        value += q * math.log2(q / p)
    if q < 1.0:
        value += (1.0 - q) * math.log2((1.0 - q) / (1.0 - p))
    return value


def tilted_binary_minimum(p: float, t: float) -> tuple[float, float]:
    """Minimize D(q || p) + q*t over q in [0, 1].

    Returns (q_star, minimum value in bits); the closed-form minimizer is
    q_star = p / (2^t (1 - p) + p).
    """
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie strictly inside (0, 1), got {p}")
    q_star = p / (2.0**t * (1.0 - p) + p)
    return q_star, d_bin(q_star, p) + q_star * t


def isotropic_reverse_ree(d: int, fidelity: float) -> float:
    """Reverse relative entropy of entanglement of a d x d isotropic state.

    Equals D_bin(1/d || F) for singlet fraction F above the separability
    point 1/d, and 0 at or below it.
    """
    if int(d) != d or d < 2:
        raise ValidationError(f"local dimension must be an integer >= 2, got {d}")
    if not 0.0 <= fidelity <= 1.0:
        raise DomainError(f"singlet fraction must lie in [0, 1], got {fidelity}")
    threshold = 1.0 / d
    if fidelity <= threshold:
        return 0.0
    return d_bin(threshold, fidelity)


def fock_relative_entropy_thermal(
    nbar_sigma: Sequence[float],
    nbar_rho: Sequence[float],
    cutoff: int = 200,
) -> float:
    """Relative entropy in bits between product thermal states, by direct
    summation of geometric photon-number distributions.

    Each mode with mean photon number nbar has p(n) = nbar^n / (nbar+1)^{n+1}
    (symplectic eigenvalue nu = 2 nbar + 1).  All nbar_rho must be positive;
    the truncation is rejected if any sigma-mode leaves more than 1e-12 of
    probability above the cutoff.
    """
    ns = np.atleast_1d(np.asarray(nbar_sigma, dtype=float))
    nr = np.atleast_1d(np.asarray(nbar_rho, dtype=float))
    if ns.shape != nr.shape:
        raise ValidationError("mode lists must have equal length")
    if np.any(ns < 0.0):
        raise DomainError("mean photon numbers must be nonnegative")
    if np.any(nr <= 0.0):
        raise DomainError("rho must be faithful: all its mean photon numbers must be > 0")
    if cutoff < 1:
        raise ValidationError("cutoff must be >= 1")
    n = np.arange(cutoff + 1)
    total = 0.0
    for nb_s, nb_r in zip(ns, nr):
        if nb_s > 0.0:
            tail = (nb_s / (nb_s + 1.0)) ** (cutoff + 1)
            if tail >= 1e-12:
                raise DomainError(
                    f"cutoff {cutoff} leaves probability {tail:.3g} >= 1e-12 "
                    f"unaccounted for nbar={nb_s:.6g}; increase the cutoff"
                )
            log_p = n * math.log(nb_s) - (n + 1) * math.log(nb_s + 1.0)
            p = np.exp(log_p)
        else:
            p = np.zeros(cutoff + 1)
            p[0] = 1.0
        log2_q = (n * math.log(nb_r) - (n + 1) * math.log(nb_r + 1.0)) / LN2
        mask = p > 0.0
        total += float(np.sum(p[mask] * (np.log2(p[mask]) - log2_q[mask])))
    return total
