"""Error-exponent upper bounds for teleportation-simulable Gaussian channels.

The bound at squeezing r is the reverse relative entropy of entanglement
of the channel's quasi-Choi state; the r -> infinity limit is estimated by
evaluating a finite schedule of r values and fitting the tail

    a + b / cosh(2r)          (attenuator, amplifier families)
    a + b / sqrt(cosh(2r))    (additive noise and unknown channels)

over the last three points.  Closed forms for the limit:

    attenuator / amplifier:  n_sep (arcoth(n_th) - arcoth(n_sep)) / ln 2
                             + log2 sqrt((n_th^2 - 1)/(n_sep^2 - 1))
                             for 1 <= n_th <= n_sep, else 0,
                             n_sep = (1+lambda)/(1-lambda) resp. (eta+1)/(eta-1)
    additive noise:          (2 - mu)/(mu ln 2) + log2(mu/2) for mu <= 2, else 0

with divergence (no finite limit) for pure loss, the identity, and mu = 0.
Quasi-Choi states of those divergent families are non-faithful at every r
(one symplectic eigenvalue is exactly 1); their per-r values are computed
against a state regularized at the faithfulness floor and the report is
flagged divergent rather than extrapolated.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channels import (
    ChannelParams,
    GaussianChannel,
    build_channel,
    channel_params_to_json,
    quasi_choi,
)
from .errors import GaussreeError, ValidationError
from .normal_form import (
    NormalForm,
    _gibbs_from_spectrum,
    _minimize_border,
    is_separable_two_mode,
    solve_reduced,
    twirl_to_normal_form,
)
from .solver import SolverConfig, solve
from .symplectic import CovarianceMatrix, symplectic_spectrum, williamson

DEFAULT_R_SCHEDULE = (2.0, 3.0, 4.0, 5.0)

_SQRT_FIT_KINDS = {"additive_noise", "identity"}


def format_real(x: float) -> str:
    return f"{x:.12g}"


def _round12(x: float) -> float:
    return float(format_real(x))


def n_sep(params: ChannelParams) -> float | None:
    """Separability threshold of the environment parameter, if defined."""
    if params.kind in ("attenuator", "pure_loss"):
        lam = params.transmissivity
        if lam >= 1.0:
            return math.inf
        return (1.0 + lam) / (1.0 - lam)
    if params.kind == "amplifier":
        eta = params.gain
        if eta <= 1.0:
            return math.inf
        return (eta + 1.0) / (eta - 1.0)
    return None


def closed_form_bound(params: ChannelParams) -> float:
    """Asymptotic (r -> infinity) bound in bits; math.inf when divergent."""
    if params.kind == "identity":
        return math.inf
    if params.kind == "additive_noise":
        mu = params.mu
        if mu == 0.0:
            return math.inf
        if mu >= 2.0:
            return 0.0
        return (2.0 - mu) / (mu * math.log(2.0)) + math.log2(mu / 2.0)
    threshold = n_sep(params)
    nth = params.n_th
    if math.isinf(threshold):
        return math.inf
    if nth >= threshold:
        return 0.0
    if nth <= 1.0:
        return math.inf
    return float(
        threshold * (math.atanh(1.0 / nth) - math.atanh(1.0 / threshold)) / math.log(2.0)
        + 0.5 * math.log2((nth**2 - 1.0) / (threshold**2 - 1.0))
    )


def _clamped_reduced_value(
    nf: NormalForm, floor: float
) -> tuple[float, bool]:
    """Reduced-path bound of a normal-form state, regularizing non-faithful
    spectra at the floor; returns (value_bits, clamped)."""
    if is_separable_two_mode(nf):
        return 0.0, False
    nu1, nu2 = nf.symplectic_pair()
    if min(nu1, nu2) > 1.0 + floor:
        return solve_reduced(nf, floor).value_bits, False
    c1 = max(nu1, 1.0 + floor)
    c2 = max(nu2, 1.0 + floor)
    alpha, beta, gamma = _gibbs_from_spectrum(nf, c1, c2)
    log2_z = 0.5 * (math.log2(c1**2 - 1.0) + math.log2(c2**2 - 1.0)) - 2.0
    if alpha > beta:
        alpha, beta = beta, alpha
    _, value, _, _ = _minimize_border(
        alpha, beta, gamma, log2_z, (max(c1, c2), min(c1, c2))
    )
    return value, True


def _clamped_full_value(
    v: CovarianceMatrix, cfg: SolverConfig
) -> tuple[float, bool]:
    spectrum = symplectic_spectrum(v.entries)
    floor = cfg.faithfulness_floor
    if spectrum[-1] > 1.0 + floor:
        return solve(v, cfg).value_bits, False
    s, spec = williamson(v.entries)
    clamped = np.maximum(spec, 1.0 + 2.0 * floor)
    v_reg = (s * np.repeat(clamped, 2)) @ s.T
    reg = CovarianceMatrix(v.n_modes_a, v.n_modes_b, 0.5 * (v_reg + v_reg.T))
    return solve(reg, cfg).value_bits, True


def bound_at(
    channel, r: float, cfg: SolverConfig | None = None, path: str = "reduced"
) -> tuple[float, bool]:
    """Bound at a single squeezing value; returns (value_bits, clamped)."""
    cfg = cfg or SolverConfig()
    if isinstance(channel, ChannelParams):
        ch = build_channel(channel)
    else:
        ch = channel
    v = quasi_choi(ch, r)
    if path == "reduced":
        if ch.n_modes != 1:
            raise ValidationError("reduced path needs a one-mode channel")
        nf, _ = twirl_to_normal_form(v)
        return _clamped_reduced_value(nf, cfg.faithfulness_floor)
    if path == "full":
        return _clamped_full_value(v, cfg)
    raise ValidationError(f"unknown path {path!r}; expected 'reduced' or 'full'")


@dataclass
class BoundReport:
    channel: dict
    path: str
    r_values: list[float]
    bound_at_r: list[float | None]
    per_r_status: list[str]
    extrapolated: float | None
    closed_form: float | None  # math.inf encodes a divergent closed form
    abs_deviation: float | None
    fit_residual: float | None
    divergent: bool
    cross_check_max_diff: float | None = None
    warnings: list[str] = field(default_factory=list)


def resolve_threads(threads: int | None = None) -> int:
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("GAUSSREE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ValidationError(f"GAUSSREE_THREADS must be an integer, got {env!r}") from exc
    return os.cpu_count() or 1


def _fit_tail(rs: list[float], vals: list[float], sqrt_weight: bool) -> tuple[float, float]:
    """Least-squares fit of a + b*w(r) over the last <= 3 points."""
    take = min(3, len(rs))
    rs_t = np.asarray(rs[-take:], dtype=float)
    vals_t = np.asarray(vals[-take:], dtype=float)
    w = 1.0 / np.cosh(2.0 * rs_t)
    if sqrt_weight:
        w = np.sqrt(w)
    if take == 1:
        return float(vals_t[0]), 0.0
    design = np.column_stack([np.ones(take), w])
    coef, *_ = np.linalg.lstsq(design, vals_t, rcond=None)
    resid = float(np.max(np.abs(design @ coef - vals_t)))
    return float(coef[0]), resid


def sweep_bound(
    params: ChannelParams | GaussianChannel,
    r_schedule=DEFAULT_R_SCHEDULE,
    cfg: SolverConfig | None = None,
    path: str | None = None,
    threads: int | None = None,
) -> BoundReport:
    """Evaluate the bound over an r schedule and extrapolate the tail.

    Per-r evaluations run on a worker pool (size from `threads`, else the
    GAUSSREE_THREADS environment variable, else the CPU count); assembly is
    deterministic.  Solver failures are recorded per r and leave a partial
    report.
    """
    cfg = cfg or SolverConfig()
    rs = [float(r) for r in r_schedule]
    if not rs or any(r <= 0 for r in rs):
        raise ValidationError("r schedule must be a non-empty list of positive reals")
    if sorted(rs) != rs:
        raise ValidationError("r schedule must be sorted ascending")
    is_catalog = isinstance(params, ChannelParams)
    if path is None:
        path = "reduced" if (is_catalog or params.n_modes == 1) else "full"
    if path not in ("reduced", "full", "both"):
        raise ValidationError(f"unknown path {path!r}")

    paths = ("reduced", "full") if path == "both" else (path,)

    def task(args):
        r, p = args
        return bound_at(params, r, cfg, p)

    jobs = [(r, p) for p in paths for r in rs]
    results: list = [None] * len(jobs)
    errors: list = [None] * len(jobs)
    with ThreadPoolExecutor(max_workers=resolve_threads(threads)) as pool:
        futures = [pool.submit(task, job) for job in jobs]
        for k, fut in enumerate(futures):
            try:
                results[k] = fut.result()
            except GaussreeError as exc:
                errors[k] = str(exc)

    primary = results[: len(rs)]
    primary_err = errors[: len(rs)]
    vals: list[float | None] = []
    statuses: list[str] = []
    clamped_any = False
    for res, err in zip(primary, primary_err):
        if err is not None:
            vals.append(None)
            statuses.append(f"error: {err}")
        else:
            value, clamped = res
            vals.append(value)
            statuses.append("clamped" if clamped else "ok")
            clamped_any = clamped_any or clamped

    cross_check = None
    if path == "both":
        diffs = [
            abs(a[0] - b[0])
            for a, b in zip(results[: len(rs)], results[len(rs) :])
            if a is not None and b is not None
        ]
        cross_check = max(diffs) if diffs else None

    closed = closed_form_bound(params) if is_catalog else None
    warnings: list[str] = []
    if clamped_any:
        warnings.append(
            "quasi-Choi state regularized at the faithfulness floor (non-faithful input)"
        )

    ok_pairs = [(r, v) for r, v in zip(rs, vals) if v is not None]
    divergent = bool(closed is not None and math.isinf(closed))
    extrapolated = None
    fit_residual = None
    if len(ok_pairs) >= 1:
        vv = [v for _, v in ok_pairs]
        diffs = np.diff(vv)
        if len(diffs) >= 2 and float(np.max(np.abs(diffs))) > 1e-9:
            if np.any(diffs[1:] * diffs[:-1] < 0):
                warnings.append("non-monotone bound sequence across the r schedule")
            growing = bool(np.all(diffs > 0) and abs(diffs[-1]) > 0.5 * abs(diffs[0]))
            divergent = divergent or growing
        if not divergent:
            sqrt_weight = (not is_catalog) or params.kind in _SQRT_FIT_KINDS
            extrapolated, fit_residual = _fit_tail(
                [r for r, _ in ok_pairs], vv, sqrt_weight
            )
            if extrapolated < 0.0:
                extrapolated = 0.0

    abs_dev = None
    if extrapolated is not None and closed is not None and math.isfinite(closed):
        abs_dev = abs(extrapolated - closed)

    descriptor = (
        channel_params_to_json(params)
        if is_catalog
        else {"kind": "custom", "label": params.label, "n_modes": params.n_modes}
    )
    return BoundReport(
        channel=descriptor,
        path=path,
        r_values=rs,
        bound_at_r=vals,
        per_r_status=statuses,
        extrapolated=extrapolated,
        closed_form=closed,
        abs_deviation=abs_dev,
        fit_residual=fit_residual,
        divergent=divergent,
        cross_check_max_diff=cross_check,
        warnings=warnings,
    )


def report_to_csv(report: BoundReport) -> str:
    """Delimited per-r rows; deterministic bytes for a fixed configuration."""
    lines = ["r,bound_bits,closed_form_bits,deviation"]
    closed = report.closed_form
    for r, v in zip(report.r_values, report.bound_at_r):
        cells = [format_real(r)]
        cells.append(format_real(v) if v is not None else "")
        if closed is None:
            cells.extend(["", ""])
        elif math.isinf(closed):
            cells.extend(["inf", ""])
        else:
            cells.append(format_real(closed))
            cells.append(format_real(v - closed) if v is not None else "")
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def report_to_json_obj(report: BoundReport) -> dict:
    closed = report.closed_form
    obj = {
        "channel": report.channel,
        "path": report.path,
        "r_values": [_round12(r) for r in report.r_values],
        "bound_at_r": [
            _round12(v) if v is not None else None for v in report.bound_at_r
        ],
        "per_r_status": list(report.per_r_status),
        "extrapolated": _round12(report.extrapolated)
        if report.extrapolated is not None
        else None,
        "closed_form_bits": _round12(closed)
        if closed is not None and math.isfinite(closed)
        else None,
        "closed_form_finite": None if closed is None else bool(math.isfinite(closed)),
        "abs_deviation": _round12(report.abs_deviation)
        if report.abs_deviation is not None
        else None,
        "fit_residual": _round12(report.fit_residual)
        if report.fit_residual is not None
        else None,
        "divergent": report.divergent,
        "warnings": list(report.warnings),
    }
    if report.cross_check_max_diff is not None:
        obj["cross_check_max_diff"] = _round12(report.cross_check_max_diff)
    return obj


# --- parameter-grid sweeps -------------------------------------------------

_GRID_FIELD = {"lambda": "transmissivity", "eta": "gain", "n_th": "n_th", "mu": "mu"}


def grid_channels(
    base: ChannelParams, grid_param: str, values
) -> list[ChannelParams]:
    if grid_param not in _GRID_FIELD:
        raise ValidationError(
            f"unknown grid parameter {grid_param!r}; expected one of {sorted(_GRID_FIELD)}"
        )
    attr = _GRID_FIELD[grid_param]
    out = []
    for val in values:
        kwargs = {
            "transmissivity": base.transmissivity,
            "gain": base.gain,
            "n_th": base.n_th,
            "mu": base.mu,
        }
        kwargs[attr] = float(val)
        out.append(ChannelParams(kind=base.kind, **kwargs))
    return out


def evaluate_grid(
    channels: list[ChannelParams],
    r_schedule=DEFAULT_R_SCHEDULE,
    cfg: SolverConfig | None = None,
    path: str = "reduced",
    threads: int | None = None,
) -> list[dict]:
    """Per-(grid point, r) bound rows in deterministic (grid, r) order."""
    cfg = cfg or SolverConfig()
    rs = [float(r) for r in r_schedule]
    jobs = [(ch, r) for ch in channels for r in rs]

    def task(job):
        ch, r = job
        return bound_at(ch, r, cfg, path)

    outcomes: list = [None] * len(jobs)
    errs: list = [None] * len(jobs)
    with ThreadPoolExecutor(max_workers=resolve_threads(threads)) as pool:
        futures = [pool.submit(task, job) for job in jobs]
        for k, fut in enumerate(futures):
            try:
                outcomes[k] = fut.result()
            except GaussreeError as exc:
                errs[k] = str(exc)

    rows = []
    for (ch, r), res, err in zip(jobs, outcomes, errs):
        closed = closed_form_bound(ch)
        if err is not None:
            status = f"error: {err}"
        else:
            status = "clamped" if res[1] else "ok"
        row = {
            "channel": channel_params_to_json(ch),
            "r": r,
            "bound_bits": res[0] if res is not None else None,
            "closed_form_bits": closed,
            "status": status,
        }
        rows.append(row)
    return rows


def grid_rows_to_csv(rows: list[dict], grid_param: str) -> str:
    lines = [f"{grid_param},r,bound_bits,closed_form_bits,deviation,status"]
    key = grid_param
    for row in rows:
        val = row["channel"].get(key)
        bound = row["bound_bits"]
        closed = row["closed_form_bits"]
        cells = [
            format_real(val) if val is not None else "",
            format_real(row["r"]),
            format_real(bound) if bound is not None else "",
        ]
        if closed is None or math.isinf(closed):
            cells.append("inf" if closed is not None else "")
            cells.append("")
        else:
            cells.append(format_real(closed))
            cells.append(
                format_real(bound - closed) if bound is not None else ""
            )
        cells.append(row["status"])
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
