"""One-mode Gaussian channel catalog and quasi-Choi states.

A Gaussian channel acts on covariance matrices as V -> X V X^T + Y.  The
catalog covers the phase-insensitive single-mode families:

    attenuator      X = sqrt(lambda) I,  Y = n_th (1 - lambda) I
    amplifier       X = sqrt(eta) I,     Y = n_th (eta - 1) I
    additive noise  X = I,               Y = mu I
    pure loss       attenuator with n_th = 1
    identity        additive noise with mu = 0

with transmissivity lambda in [0, 1], gain eta >= 1, environment thermal
parameter n_th >= 1 and noise variance mu >= 0.

The quasi-Choi state of a channel at squeezing r is the channel applied to
half of an N-fold two-mode squeezed vacuum,

    V_N(r) = [[cosh(2r) X X^T + Y,   sinh(2r) X Sigma_3],
              [sinh(2r) Sigma_3 X^T, cosh(2r) I        ]],

where Sigma_3 is the per-mode diag(1, -1).  Subsystem A holds the channel
outputs, subsystem B the retained halves.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from ._linalg import check_finite, check_symmetric, herm_min_eig, symmetrize
from .errors import ValidationError
from .symplectic import CovarianceMatrix, symplectic_form

CP_TOL = 1e-10

CATALOG = ("attenuator", "amplifier", "additive_noise", "pure_loss", "identity")


@dataclass(frozen=True)
class ChannelParams:
    """Parameters of a catalog channel; unused fields stay None."""

    kind: str
    transmissivity: float | None = None  # lambda, attenuator / pure loss
    gain: float | None = None            # eta, amplifier
    n_th: float | None = None            # environment thermal parameter
    mu: float | None = None              # additive-noise variance

    def __post_init__(self):
        if self.kind not in CATALOG:
            raise ValidationError(
                f"unknown channel kind {self.kind!r}; expected one of {CATALOG}"
            )
        if self.kind == "attenuator":
            lam, nth = self.transmissivity, self.n_th
            if lam is None or not 0.0 <= lam <= 1.0:
                raise ValidationError(f"attenuator needs transmissivity in [0, 1], got {lam}")
            if nth is None or nth < 1.0:
                raise ValidationError(f"attenuator needs n_th >= 1, got {nth}")
        elif self.kind == "pure_loss":
            lam = self.transmissivity
            if lam is None or not 0.0 <= lam <= 1.0:
                raise ValidationError(f"pure loss needs transmissivity in [0, 1], got {lam}")
            if self.n_th not in (None, 1.0):
                raise ValidationError("pure loss fixes n_th = 1")
            object.__setattr__(self, "n_th", 1.0)
        elif self.kind == "amplifier":
            eta, nth = self.gain, self.n_th
            if eta is None or eta < 1.0:
                raise ValidationError(f"amplifier needs gain >= 1, got {eta}")
            if nth is None or nth < 1.0:
                raise ValidationError(f"amplifier needs n_th >= 1, got {nth}")
        elif self.kind == "additive_noise":
            if self.mu is None or self.mu < 0.0:
                raise ValidationError(f"additive noise needs mu >= 0, got {self.mu}")
        elif self.kind == "identity":
            if self.mu not in (None, 0.0):
                raise ValidationError("identity fixes mu = 0")
            object.__setattr__(self, "mu", 0.0)


@dataclass(frozen=True)
class GaussianChannel:
    """Action V -> X V X^T + Y; complete positivity is checked on build."""

    x_matrix: np.ndarray
    y_matrix: np.ndarray
    label: str = "custom"

    def __post_init__(self):
        x = np.asarray(self.x_matrix, dtype=float)
        y = np.asarray(self.y_matrix, dtype=float)
        check_finite(x, "X")
        check_finite(y, "Y")
        if x.ndim != 2 or x.shape[0] != x.shape[1] or x.shape[0] % 2:
            raise ValidationError(f"X must be square with even dimension, got {x.shape}")
        if y.shape != x.shape:
            raise ValidationError(f"Y must match X in shape, got {y.shape} vs {x.shape}")
        check_symmetric(y, "Y")
        y = symmetrize(y)
        omega = symplectic_form(x.shape[0] // 2)
        cp_min = herm_min_eig(y, omega - x @ omega @ x.T)
        if cp_min < -CP_TOL:
            raise ValidationError(
                f"(X, Y) is not completely positive: min eig "
                f"{cp_min:.3g} of Y + i(Omega - X Omega X^T)"
            )
        x.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "x_matrix", x)
        object.__setattr__(self, "y_matrix", y)

    @property
    def n_modes(self) -> int:
        return self.x_matrix.shape[0] // 2


def build_channel(params: ChannelParams) -> GaussianChannel:
    """Construct the (X, Y) pair of a catalog channel (single mode)."""
    eye = np.eye(2)
    if params.kind in ("attenuator", "pure_loss"):
        lam = params.transmissivity
        nth = params.n_th
        x = math.sqrt(lam) * eye
        y = nth * (1.0 - lam) * eye
    elif params.kind == "amplifier":
        x = math.sqrt(params.gain) * eye
        y = params.n_th * (params.gain - 1.0) * eye
    elif params.kind == "additive_noise":
        x = eye.copy()
        y = params.mu * eye
    else:  # identity
        x = eye.copy()
        y = np.zeros((2, 2))
    return GaussianChannel(x, y, label=params.kind)


def quasi_choi(channel: GaussianChannel, r: float) -> CovarianceMatrix:
    """Quasi-Choi covariance of the channel at two-mode squeezing r > 0."""
    if r <= 0.0:
        raise ValidationError(f"squeezing r must be positive, got {r}")
    n = channel.n_modes
    c, s = math.cosh(2.0 * r), math.sinh(2.0 * r)
    sigma3 = np.kron(np.eye(n), np.diag([1.0, -1.0]))
    x, y = channel.x_matrix, channel.y_matrix
    top_left = c * (x @ x.T) + y
    off = s * (x @ sigma3)
    bottom_right = c * np.eye(2 * n)
    v = np.block([[top_left, off], [off.T, bottom_right]])
    return CovarianceMatrix(n, n, v)


# --- JSON -----------------------------------------------------------------

_PARAM_KEYS = {"lambda": "transmissivity", "eta": "gain", "n_th": "n_th", "mu": "mu"}


def channel_params_to_json(params: ChannelParams) -> dict:
    out: dict = {"kind": params.kind}
    for key, attr in _PARAM_KEYS.items():
        val = getattr(params, attr)
        if val is not None:
            out[key] = float(val)
    return out


def channel_from_json(obj) -> ChannelParams | GaussianChannel:
    """Parse {"kind": ...} catalog params or {"kind": "custom", X, Y}.

    Catalog kinds come back as ChannelParams so that closed forms and
    separability thresholds stay available downstream; only custom
    matrix pairs construct a GaussianChannel directly.
    """
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValidationError('channel JSON must be an object with a "kind" key')
    kind = obj["kind"]
    if kind == "custom":
        unknown = set(obj) - {"kind", "label", "x_matrix", "y_matrix"}
        if unknown:
            raise ValidationError(f"channel JSON has unknown keys: {sorted(unknown)}")
        for key in ("x_matrix", "y_matrix"):
            if key not in obj:
                raise ValidationError(f"custom channel JSON missing {key!r}")
        x_flat = obj["x_matrix"]
        y_flat = obj["y_matrix"]
        if not isinstance(x_flat, list) or not isinstance(y_flat, list):
            raise ValidationError("custom channel matrices must be flat lists (row-major)")
        d = math.isqrt(len(x_flat))
        if d * d != len(x_flat) or len(y_flat) != len(x_flat):
            raise ValidationError("custom channel matrices must be square and equal-sized")
        label = obj.get("label", "custom")
        if not isinstance(label, str):
            raise ValidationError("custom channel label must be a string")
        x = np.array(x_flat, dtype=float).reshape(d, d)
        y = np.array(y_flat, dtype=float).reshape(d, d)
        return GaussianChannel(x, y, label=label)
    known = {"kind"} | set(_PARAM_KEYS)
    unknown = set(obj) - known
    if unknown:
        raise ValidationError(f"channel JSON has unknown keys: {sorted(unknown)}")
    kwargs = {}
    for key, attr in _PARAM_KEYS.items():
        if key in obj:
            val = obj[key]
            if not isinstance(val, (int, float)) or isinstance(val, bool):
                raise ValidationError(f"channel parameter {key!r} must be a number")
            kwargs[attr] = float(val)
    return ChannelParams(kind=kind, **kwargs)


def load_channel(path) -> ChannelParams | GaussianChannel:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid JSON: {exc}") from exc
    return channel_from_json(obj)
