"""Command-line interface.

Six subcommands: ``ree``, ``bound``, ``sweep``, ``separability``,
``normal-form``, ``oracle``.  Results go to stdout (or ``--output``) as
JSON, except ``bound`` and ``sweep`` which default to CSV.  Output bytes
are deterministic for a fixed input and flag set; floats are printed with
12 significant digits.

Exit codes: 0 success, 2 validation or domain error, 3 solver failure,
4 I/O failure.  Failures emit one JSON object on stderr with ``error``
(category) and ``message`` fields.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .bounds import (
    DEFAULT_R_SCHEDULE,
    _round12,
    evaluate_grid,
    grid_channels,
    grid_rows_to_csv,
    report_to_csv,
    report_to_json_obj,
    sweep_bound,
)
from .channels import CATALOG, ChannelParams, load_channel
from .errors import DomainError, SolverError, ValidationError
from .normal_form import is_separable_two_mode, solve_reduced, twirl_to_normal_form
from .separability import is_separable_feasibility
from .solver import SolverConfig, solve
from .symplectic import covariance_to_json, load_covariance


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _matrix_list(m: np.ndarray) -> list:
    return [[_round12(float(v)) for v in row] for row in np.asarray(m)]


# --- config file splicing ----------------------------------------------------

def _splice_config(argv: list[str]) -> list[str]:
    """Expand --config FILE into flag tokens placed before explicit flags.

    Later occurrences win in argparse, so anything typed on the command
    line overrides the config file.  Boolean config values toggle flags;
    lists join with commas.
    """
    out = list(argv)
    path = None
    span = None
    for i, tok in enumerate(out):
        if tok == "--config":
            if i + 1 >= len(out):
                raise ValidationError("--config needs a file path")
            path = out[i + 1]
            span = (i, 2)
            break
        if tok.startswith("--config="):
            path = tok.split("=", 1)[1]
            span = (i, 1)
            break
    if path is None:
        return out
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid JSON in config file: {exc}") from exc
    if not isinstance(obj, dict):
        raise ValidationError("config file must hold a JSON object of option values")
    i, n = span
    del out[i : i + n]
    tokens: list[str] = []
    for key, value in obj.items():
        flag = "--" + str(key).replace("_", "-")
        if isinstance(value, bool):
            if value:
                tokens.append(flag)
        elif isinstance(value, list):
            tokens.extend([flag, ",".join(str(v) for v in value)])
        else:
            tokens.extend([flag, str(value)])
    # keep the subcommand first, then config defaults, then explicit flags
    return out[:1] + tokens + out[1:]


# --- small parsers -----------------------------------------------------------

def _parse_r_list(text: str) -> list[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise ValidationError(f"bad --r list {text!r}: {exc}") from exc
    if not values:
        raise ValidationError("--r needs at least one value")
    return values


def _parse_grid(text: str) -> tuple[str, list[float]]:
    """Parse 'name=start:stop:count' or 'name=v1,v2,...' grid specs."""
    if "=" not in text:
        raise ValidationError(
            f"bad grid spec {text!r}; expected name=start:stop:count or name=v1,v2,..."
        )
    name, rhs = text.split("=", 1)
    name = name.strip().replace("-", "_")
    if name == "lam":
        name = "lambda"
    if name not in ("lambda", "eta", "n_th", "mu"):
        raise ValidationError(
            f"unknown grid parameter {name!r}; expected lambda, eta, n_th or mu"
        )
    rhs = rhs.strip()
    if ":" in rhs:
        parts = rhs.split(":")
        if len(parts) != 3:
            raise ValidationError(f"bad grid range {rhs!r}; expected start:stop:count")
        try:
            start, stop = float(parts[0]), float(parts[1])
            count = int(parts[2])
        except ValueError as exc:
            raise ValidationError(f"bad grid range {rhs!r}: {exc}") from exc
        if count < 1:
            raise ValidationError("grid spec is empty: count must be at least 1")
        values = [float(v) for v in np.linspace(start, stop, count)]
    else:
        try:
            values = [float(p) for p in rhs.split(",") if p.strip() != ""]
        except ValueError as exc:
            raise ValidationError(f"bad grid values {rhs!r}: {exc}") from exc
        if not values:
            raise ValidationError("grid spec is empty: no values given")
    return name, values


def _solver_config(args) -> SolverConfig:
    cfg = SolverConfig()
    overrides = {}
    pairs = [
        ("barrier_mu_initial", "barrier_mu"),
        ("barrier_decay", "barrier_decay"),
        ("newton_tol", "newton_tol"),
        ("outer_tol", "outer_tol"),
        ("max_outer", "max_outer"),
        ("max_inner", "max_inner"),
        ("faithfulness_floor", "faithfulness_floor"),
        ("gradient_impl", "gradient_impl"),
    ]
    for attr, flag in pairs:
        val = getattr(args, flag, None)
        if val is not None:
            overrides[attr] = val
    if getattr(args, "no_gradient_check", False):
        overrides["gradient_check"] = False
    cfg = dataclasses.replace(cfg, **overrides)
    if cfg.barrier_mu_initial <= 0:
        raise ValidationError("--barrier-mu must be positive")
    if not 0.0 < cfg.barrier_decay < 1.0:
        raise ValidationError("--barrier-decay must lie strictly between 0 and 1")
    if cfg.newton_tol <= 0 or cfg.outer_tol <= 0:
        raise ValidationError("solver tolerances must be positive")
    if cfg.max_outer < 1 or cfg.max_inner < 1:
        raise ValidationError("iteration limits must be at least 1")
    if cfg.faithfulness_floor < 0:
        raise ValidationError("--faithfulness-floor must be nonnegative")
    return cfg


def _channel_from_args(args) -> ChannelParams | object:
    if getattr(args, "channel_file", None):
        if getattr(args, "channel", None):
            raise ValidationError("give either --channel or --channel-file, not both")
        return load_channel(args.channel_file)
    kind = getattr(args, "channel", None)
    if kind is None:
        raise ValidationError("provide --channel KIND or --channel-file FILE")
    return ChannelParams(
        kind=kind.replace("-", "_"),
        transmissivity=args.lam,
        gain=args.eta,
        n_th=args.n_th,
        mu=args.mu,
    )


def _safe_label(label: str) -> str:
    cleaned = "".join(c if c.isalnum() else "-" for c in label.lower())
    return cleaned.strip("-") or "channel"


# --- subcommands -------------------------------------------------------------

def cmd_ree(args) -> int:
    cov = load_covariance(args.input)
    cfg = _solver_config(args)
    path = args.path

    twirl_log: list[str] = []
    if path == "auto":
        if cov.n_modes_a == 1 and cov.n_modes_b == 1:
            try:
                twirl_to_normal_form(cov)
                path = "reduced"
            except ValidationError:
                path = "full"
        else:
            path = "full"

    if path == "reduced":
        if cov.n_modes_a != 1 or cov.n_modes_b != 1:
            raise ValidationError("reduced path needs a state with one mode per side")
        nf, twirl_log = twirl_to_normal_form(cov)
        red = solve_reduced(nf, faithfulness_tol=cfg.faithfulness_floor)
        obj = {
            "value_bits": _round12(red.value_bits),
            "path": "reduced",
            "status": red.status,
            "iterations": red.iterations,
            "normal_form": {
                "x": _round12(nf.x),
                "y": _round12(nf.y),
                "z": _round12(nf.z),
            },
            "sigma_opt": {
                "x": _round12(red.sigma.x),
                "y": _round12(red.sigma.y),
                "z": _round12(red.sigma.z),
            },
            "border": (
                {"nu1": _round12(red.border.nu1), "nu2": _round12(red.border.nu2)}
                if red.border is not None
                else None
            ),
            "residuals": (
                [_round12(r) for r in red.residuals]
                if red.residuals is not None
                else None
            ),
            "log": twirl_log + red.log,
        }
    else:
        res = solve(cov, cfg)
        if res.status != "converged":
            raise SolverError(
                f"solver did not converge within limits (status {res.status!r}); "
                "raise --max-outer / --max-inner or loosen --outer-tol"
            )
        sigma_json = covariance_to_json(res.v_sigma_opt)
        sigma_json["entries"] = [_round12(v) for v in sigma_json["entries"]]
        obj = {
            "value_bits": _round12(res.value_bits),
            "path": "full",
            "status": res.status,
            "iterations": res.iterations,
            "duality_gap_estimate": _round12(res.duality_gap_estimate),
            "v_sigma_opt": sigma_json,
            "gamma_a_opt": _matrix_list(res.gamma_a_opt),
        }
    _emit(_json_text(obj), args.output)
    return 0


def cmd_separability(args) -> int:
    cov = load_covariance(args.input)
    method = args.method
    two_mode = cov.n_modes_a == 1 and cov.n_modes_b == 1

    if method == "auto":
        if two_mode:
            try:
                twirl_to_normal_form(cov)
                method = "simon"
            except ValidationError:
                method = "feasibility"
        else:
            method = "feasibility"

    if method == "simon":
        if not two_mode:
            raise ValidationError(
                "the normal-form test needs a state with one mode per side"
            )
        nf, log = twirl_to_normal_form(cov)
        x, y, z = nf.x, nf.y, nf.z
        margin = (x - 1.0) * (y - 1.0) - z * z
        obj = {
            "separable": is_separable_two_mode(nf),
            "method": "simon",
            "margin": _round12(margin),
            "normal_form": {"x": _round12(x), "y": _round12(y), "z": _round12(z)},
            "log": log,
        }
    else:
        wit = is_separable_feasibility(cov, max_inner=args.max_inner or 100)
        obj = {
            "separable": wit.separable,
            "method": "feasibility",
            "margin": _round12(wit.margin),
            "iterations": wit.iterations,
            "status": wit.status,
            "gamma_a": _matrix_list(wit.gamma_a) if wit.gamma_a is not None else None,
        }
    _emit(_json_text(obj), args.output)
    return 0


def cmd_normal_form(args) -> int:
    cov = load_covariance(args.input)
    nf, log = twirl_to_normal_form(cov)
    nu1, nu2 = nf.symplectic_pair()
    obj = {
        "x": _round12(nf.x),
        "y": _round12(nf.y),
        "z": _round12(nf.z),
        "nu1": _round12(nu1),
        "nu2": _round12(nu2),
        "separable": is_separable_two_mode(nf),
        "log": log,
    }
    _emit(_json_text(obj), args.output)
    return 0


def _oracle_value(args) -> dict:
    from .analytic import (
        d_bin,
        fock_relative_entropy_thermal,
        isotropic_reverse_ree,
        tilted_binary_minimum,
    )

    name = args.name
    vals = args.values

    def need(k: int):
        if len(vals) != k:
            raise ValidationError(f"oracle {name} takes exactly {k} numeric arguments")

    def as_int(v: float, what: str) -> int:
        if not float(v).is_integer():
            raise ValidationError(f"{what} must be an integer, got {v}")
        return int(v)

    if name == "d-bin":
        need(2)
        value = d_bin(vals[0], vals[1])
        return {"oracle": name, "value_bits": _finite_or_none(value),
                "finite": math.isfinite(value)}
    if name == "tilted":
        need(2)
        q_star, value = tilted_binary_minimum(vals[0], vals[1])
        return {"oracle": name, "q_star": _round12(q_star),
                "value_bits": _round12(value), "finite": True}
    if name == "isotropic":
        need(2)
        d = as_int(vals[0], "dimension")
        value = isotropic_reverse_ree(d, vals[1])
        return {"oracle": name, "value_bits": _finite_or_none(value),
                "finite": math.isfinite(value)}
    if name == "fock-thermal":
        if len(vals) not in (2, 3):
            raise ValidationError("oracle fock-thermal takes 2 or 3 numeric arguments")
        cutoff = as_int(vals[2], "cutoff") if len(vals) == 3 else 200
        value = fock_relative_entropy_thermal(vals[0], vals[1], cutoff=cutoff)
        return {"oracle": name, "value_bits": _round12(value), "finite": True}
    raise ValidationError(f"unknown oracle {name!r}")


def _finite_or_none(value: float):
    return _round12(value) if math.isfinite(value) else None


def cmd_oracle(args) -> int:
    _emit(_json_text(_oracle_value(args)), args.output)
    return 0


def cmd_bound(args) -> int:
    channel = _channel_from_args(args)
    rs = _parse_r_list(args.r) if args.r else list(DEFAULT_R_SCHEDULE)
    cfg = _solver_config(args)
    report = sweep_bound(channel, rs, cfg=cfg, path=args.path, threads=args.threads)

    if args.format == "json":
        text = _json_text(report_to_json_obj(report))
    else:
        text = report_to_csv(report)
    _emit(text, args.output)

    if args.plot_dir:
        from .plotting import render_bound_figure

        os.makedirs(args.plot_dir, exist_ok=True)
        label = _safe_label(report.channel.get("kind") or report.channel.get("label", "channel"))
        render_bound_figure(report, os.path.join(args.plot_dir, f"bound_{label}.png"))

    if all(status.startswith("error") for status in report.per_r_status):
        raise SolverError("every bound evaluation failed; see per-r statuses")
    return 0


def cmd_sweep(args) -> int:
    if getattr(args, "channel_file", None):
        raise ValidationError("sweep works on catalog channels; use --channel")
    grid_param, values = _parse_grid(args.grid)
    kind = getattr(args, "channel", None)
    if kind is None:
        raise ValidationError("provide --channel KIND for the sweep base point")

    base_kwargs = {
        "transmissivity": args.lam,
        "gain": args.eta,
        "n_th": args.n_th,
        "mu": args.mu,
    }
    # the swept parameter may be absent from the flags; seed it with the
    # first grid value so the base point validates
    attr = {"lambda": "transmissivity", "eta": "gain", "n_th": "n_th", "mu": "mu"}[grid_param]
    if base_kwargs.get(attr) is None:
        base_kwargs[attr] = float(values[0])
    base = ChannelParams(kind=kind.replace("-", "_"), **base_kwargs)
    channels = grid_channels(base, grid_param, values)

    rs = _parse_r_list(args.r) if args.r else list(DEFAULT_R_SCHEDULE)
    cfg = _solver_config(args)
    rows = evaluate_grid(channels, rs, cfg=cfg, path="reduced", threads=args.threads)

    if args.format == "json":
        out_rows = []
        for row in rows:
            closed = row["closed_form_bits"]
            out_rows.append(
                {
                    "channel": row["channel"],
                    "r": _round12(row["r"]),
                    "bound_bits": (
                        _round12(row["bound_bits"])
                        if row["bound_bits"] is not None
                        else None
                    ),
                    "closed_form_bits": (
                        _round12(closed)
                        if closed is not None and math.isfinite(closed)
                        else None
                    ),
                    "closed_form_finite": (
                        None if closed is None else bool(math.isfinite(closed))
                    ),
                    "status": row["status"],
                }
            )
        text = _json_text({"grid_param": grid_param, "rows": out_rows})
    else:
        text = grid_rows_to_csv(rows, grid_param)
    _emit(text, args.output)

    if args.plot_dir:
        from .plotting import render_sweep_figure

        os.makedirs(args.plot_dir, exist_ok=True)
        name = f"sweep_{_safe_label(base.kind)}_{_safe_label(grid_param)}.png"
        render_sweep_figure(rows, grid_param, os.path.join(args.plot_dir, name))

    if all(row["status"].startswith("error") for row in rows):
        raise SolverError("every grid evaluation failed; see per-row statuses")
    return 0


# --- parser ------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="gaussree",
        description=(
            "Reverse relative entropy of entanglement for Gaussian states and "
            "error-exponent bounds for Gaussian channels."
        ),
    )
    top.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        metavar="FILE",
        help="JSON object of option defaults; explicit flags win",
    )
    common.add_argument(
        "--output", metavar="FILE", help="write the result here instead of stdout"
    )
    common.add_argument(
        "--seed",
        type=int,
        metavar="N",
        help="reserved for fixture generation; commands are deterministic and ignore it",
    )

    solver_p = argparse.ArgumentParser(add_help=False)
    grp = solver_p.add_argument_group("solver options")
    grp.add_argument("--barrier-mu", type=float, metavar="MU",
                     help="initial barrier weight (default 1.0)")
    grp.add_argument("--barrier-decay", type=float, metavar="F",
                     help="barrier decay factor per outer stage (default 0.2)")
    grp.add_argument("--newton-tol", type=float, metavar="T",
                     help="inner Newton decrement tolerance (default 1e-11)")
    grp.add_argument("--outer-tol", type=float, metavar="T",
                     help="target duality-gap estimate (default 1e-8)")
    grp.add_argument("--max-outer", type=int, metavar="N",
                     help="outer stage limit (default 60)")
    grp.add_argument("--max-inner", type=int, metavar="N",
                     help="inner Newton iteration limit (default 100)")
    grp.add_argument("--faithfulness-floor", type=float, metavar="T",
                     help="margin above 1 required of symplectic eigenvalues (default 1e-9)")
    grp.add_argument("--no-gradient-check", action="store_true",
                     help="skip the one-time analytic-gradient self test")
    grp.add_argument("--gradient-impl", choices=("auto", "analytic", "fd"),
                     help="gradient implementation (default auto)")

    channel_p = argparse.ArgumentParser(add_help=False)
    cgrp = channel_p.add_argument_group("channel selection")
    cgrp.add_argument(
        "--channel",
        choices=tuple(k.replace("_", "-") for k in CATALOG),
        help="catalog channel kind",
    )
    cgrp.add_argument("--channel-file", metavar="FILE",
                      help="JSON channel description (catalog or custom matrices)")
    cgrp.add_argument("--lambda", dest="lam", type=float, metavar="L",
                      help="attenuator / pure-loss transmissivity in [0, 1]")
    cgrp.add_argument("--eta", type=float, metavar="E", help="amplifier gain >= 1")
    cgrp.add_argument("--n-th", type=float, metavar="N",
                      help="environment thermal parameter >= 1")
    cgrp.add_argument("--mu", type=float, metavar="M",
                      help="additive-noise variance >= 0")

    report_p = argparse.ArgumentParser(add_help=False)
    rgrp = report_p.add_argument_group("report options")
    rgrp.add_argument("--r", metavar="LIST",
                      help="comma-separated squeezing schedule (default 2,3,4,5)")
    rgrp.add_argument("--format", choices=("csv", "json"), default="csv",
                      help="output format (default csv)")
    rgrp.add_argument("--threads", type=int, metavar="N",
                      help="worker threads (default: GAUSSREE_THREADS or CPU count)")
    rgrp.add_argument("--plot-dir", metavar="DIR",
                      help="also render a figure of the report into this directory")

    sub = top.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p_ree = sub.add_parser(
        "ree",
        parents=[common, solver_p],
        help="reverse relative entropy of entanglement of a covariance matrix",
    )
    p_ree.add_argument("input", help="covariance matrix JSON file")
    p_ree.add_argument("--path", choices=("auto", "full", "reduced"), default="auto",
                       help="solver route (default auto)")
    p_ree.set_defaults(func=cmd_ree)

    p_bound = sub.add_parser(
        "bound",
        parents=[common, solver_p, channel_p, report_p],
        help="error-exponent bound of a channel over a squeezing schedule",
    )
    p_bound.add_argument("--path", choices=("reduced", "full", "both"), default=None,
                         help="evaluation route (default: reduced when one-mode)")
    p_bound.set_defaults(func=cmd_bound)

    p_sweep = sub.add_parser(
        "sweep",
        parents=[common, solver_p, channel_p, report_p],
        help="bound over a grid of one channel parameter",
    )
    p_sweep.add_argument("--grid", required=True, metavar="SPEC",
                         help="grid spec: name=start:stop:count or name=v1,v2,...")
    p_sweep.set_defaults(func=cmd_sweep)

    p_sep = sub.add_parser(
        "separability",
        parents=[common],
        help="test whether a covariance matrix is separable",
    )
    p_sep.add_argument("input", help="covariance matrix JSON file")
    p_sep.add_argument("--method", choices=("auto", "simon", "feasibility"),
                       default="auto", help="test to run (default auto)")
    p_sep.add_argument("--max-inner", type=int, metavar="N",
                       help="inner iteration limit of the feasibility solver")
    p_sep.set_defaults(func=cmd_separability)

    p_nf = sub.add_parser(
        "normal-form",
        parents=[common],
        help="two-mode normal form (x, y, z) of a covariance matrix",
    )
    p_nf.add_argument("input", help="covariance matrix JSON file")
    p_nf.set_defaults(func=cmd_normal_form)

    p_oracle = sub.add_parser(
        "oracle",
        parents=[common],
        help="finite-dimensional reference formulas",
    )
    p_oracle.add_argument("name", choices=("d-bin", "tilted", "isotropic", "fock-thermal"),
                          help="which formula to evaluate")
    p_oracle.add_argument("values", type=float, nargs="+",
                          help="numeric arguments of the formula")
    p_oracle.set_defaults(func=cmd_oracle)

    return top


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _splice_config(argv)
        parser = _build_parser()
        args = parser.parse_args(argv)
        return args.func(args)
    except ValidationError as exc:
        return _fail(2, "validation", exc)
    except DomainError as exc:
        return _fail(2, "domain", exc)
    except SolverError as exc:
        return _fail(3, "solver", exc)
    except json.JSONDecodeError as exc:
        return _fail(2, "validation", exc)
    except OSError as exc:
        return _fail(4, "io", exc)


def _fail(code: int, category: str, exc: Exception) -> int:
    print(json.dumps({"error": category, "message": str(exc)}), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
