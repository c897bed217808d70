"""Command line interface.

Data commands emit CSV or JSON with fixed 9-significant-digit formatting, so
identical configurations and seeds reproduce identical bytes. The report
command additionally renders the two summary figures next to their CSVs.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import analysis, attacks, channel, protocol

DEFAULT_MU_B = 0.1
DEFAULT_ALPHA = 0.25


def _float_in(lo: float, hi: float, name: str):
    def convert(text: str) -> float:
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number, got {text!r}")
        if not lo <= value <= hi or math.isnan(value):
            raise argparse.ArgumentTypeError(f"{name} must be in [{lo:g}, {hi:g}], got {text}")
        return value

    return convert


def _positive_float(name: str):
    def convert(text: str) -> float:
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number, got {text!r}")
        if not value > 0 or math.isinf(value):
            raise argparse.ArgumentTypeError(f"{name} must be > 0, got {text}")
        return value

    return convert


def _nonneg_float(name: str):
    def convert(text: str) -> float:
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number, got {text!r}")
        if not value >= 0 or math.isinf(value):
            raise argparse.ArgumentTypeError(f"{name} must be >= 0, got {text}")
        return value

    return convert


def _positive_int(name: str):
    def convert(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer, got {text!r}")
        if value <= 0:
            raise argparse.ArgumentTypeError(f"{name} must be > 0, got {text}")
        return value

    return convert


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"seed must be >= 0, got {text}")
    return value


def _a_list(text: str) -> list[float]:
    values = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        values.append(_float_in(0.0, 1.0, "a")(part))
    if not values:
        raise argparse.ArgumentTypeError("need at least one a value")
    return values


def _common_parent(default_format: str = "csv") -> argparse.ArgumentParser:
    # fresh instance per subparser: argparse shares parent actions, so a
    # per-command default would otherwise leak into every command
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mu-b", type=_positive_float("mu-b"), default=DEFAULT_MU_B,
                        help="baseline source intensity (default %(default)s)")
    common.add_argument("--alpha", type=_nonneg_float("alpha"), default=DEFAULT_ALPHA,
                        help="fiber attenuation in dB/km (default %(default)s)")
    common.add_argument("--eta-d", type=_float_in(1e-9, 1.0, "eta-d"), default=1.0,
                        help="detector efficiency (default %(default)s)")
    common.add_argument("--format", choices=("csv", "json"), default=default_format,
                        help="output format (default %(default)s)")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    return common


def _lrange_parent() -> argparse.ArgumentParser:
    lrange = argparse.ArgumentParser(add_help=False)
    lrange.add_argument("--l-min", type=_nonneg_float("l-min"), default=0.0,
                        help="shortest fiber length in km (default %(default)s)")
    lrange.add_argument("--l-max", type=_nonneg_float("l-max"), default=150.0,
                        help="longest fiber length in km (default %(default)s)")
    lrange.add_argument("--l-step", type=_positive_float("l-step"), default=0.5,
                        help="length grid step in km (default %(default)s)")
    return lrange


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="saqkd",
        description="Selecting-announcement QKD: rates, attacks, and robustness limits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[_common_parent()],
                       help="run sifting sessions over single-photon pulses")
    p.add_argument("--a", type=_float_in(0.0, 1.0, "a"), required=True,
                   help="selecting parameter")
    p.add_argument("--l", type=_nonneg_float("l"), default=0.0, help="fiber length in km")
    p.add_argument("--pulses", type=_positive_int("pulses"), default=100000)
    p.add_argument("--seed", type=_seed, default=0)

    p = sub.add_parser("attack-sim", parents=[_common_parent()],
                       help="Monte-Carlo attack run against the analytic model")
    p.add_argument("--a", type=_float_in(0.0, 1.0, "a"), required=True)
    p.add_argument("--l", type=_nonneg_float("l"), required=True, help="fiber length in km")
    p.add_argument("--attack", choices=("storage", "irud", "both"), default="both")
    p.add_argument("--pulses", type=_positive_int("pulses"), default=1000000)
    p.add_argument("--seed", type=_seed, default=0)

    p = sub.add_parser("sweep", parents=[_common_parent(), _lrange_parent()],
                       help="attack information curves on a length grid")
    p.add_argument("--a", type=_a_list, default=[0.0, 0.5, 1.0],
                   help="comma-separated selecting parameters (default 0,0.5,1)")

    p = sub.add_parser("optimize", parents=[_common_parent(), _lrange_parent()],
                       help="optimal selecting parameter per length")
    p.add_argument("--l", type=_nonneg_float("l"), default=None,
                   help="evaluate a single length instead of the grid")

    p = sub.add_parser("limits", parents=[_common_parent("json")],
                       help="smallest length with full eavesdropper information")
    p.add_argument("--policy", choices=("fixed", "optimal"), required=True)
    p.add_argument("--a", type=_float_in(0.0, 1.0, "a"), default=None,
                   help="selecting parameter (required for --policy fixed)")
    p.add_argument("--tol-km", type=_positive_float("tol-km"), default=0.01)

    p = sub.add_parser("verify-theorem", parents=[_common_parent("json")],
                       help="finite-difference monotonicity check of both curves")
    p.add_argument("--grid-a", type=_positive_int("grid-a"), default=11)
    p.add_argument("--grid-l", type=_positive_int("grid-l"), default=31)
    p.add_argument("--l-min", type=_nonneg_float("l-min"), default=5.0)
    p.add_argument("--l-max", type=_nonneg_float("l-max"), default=80.0)
    p.add_argument("--fd-step", type=_positive_float("fd-step"), default=1e-3)

    p = sub.add_parser("report", parents=[_common_parent(), _lrange_parent()],
                       help="write curve CSVs and rendered figures into a directory")
    p.add_argument("--a", type=_a_list, default=[0.0, 0.5, 1.0],
                   help="comma-separated selecting parameters (default 0,0.5,1)")
    p.add_argument("--outdir", required=True, help="target directory for CSVs and figures")

    return parser


def _round9(value: Any) -> Any:
    if isinstance(value, float):
        return float(f"{value:.9g}") if math.isfinite(value) else None
    if isinstance(value, dict):
        return {k: _round9(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round9(v) for v in value]
    return value


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.9g}" if math.isfinite(value) else ""
    if value is None:
        return ""
    return str(value)


def _emit(args: argparse.Namespace, config: dict, header: list[str], rows: list[list]) -> int:
    if args.format == "json":
        results = [dict(zip(header, row)) for row in rows]
        text = json.dumps(_round9({"config": config, "results": results}),
                          indent=2, sort_keys=True) + "\n"
    else:
        lines = [",".join(header)]
        lines.extend(",".join(_cell(v) for v in row) for row in rows)
        text = "\n".join(lines) + "\n"

    if args.out is None:
        sys.stdout.write(text)
        return 0
    try:
        Path(args.out).write_text(text, encoding="utf-8", newline="")
    except OSError as exc:
        print(f"saqkd: cannot write {args.out}: {exc}", file=sys.stderr)
        return 1
    return 0


def _lengths_from(args: argparse.Namespace) -> list[float]:
    if args.l_max < args.l_min:
        raise argparse.ArgumentTypeError("--l-max must be >= --l-min")
    steps = int(round((args.l_max - args.l_min) / args.l_step)) + 1
    return [args.l_min + i * args.l_step for i in range(steps)]


def _cmd_simulate(args: argparse.Namespace) -> tuple[dict, list[str], list[list]]:
    params = protocol.ProtocolParams(
        a=args.a,
        mu=channel.mu_for_a(args.a, args.mu_b),
        alpha_db_per_km=args.alpha,
        length_km=args.l,
        eta_d=args.eta_d,
    )
    rng = np.random.default_rng(args.seed)
    stats = protocol.run_session(params, args.pulses, rng)
    eta = channel.transmission(args.alpha, args.l).eta_rho
    expected = (1.0 + args.a) / 4.0 * args.eta_d * eta
    config = {
        "command": "simulate", "a": args.a, "l": args.l, "alpha": args.alpha,
        "eta_d": args.eta_d, "mu_b": args.mu_b, "pulses": args.pulses, "seed": args.seed,
    }
    header = ["a", "length_km", "pulses_sent", "detections", "sifted", "errors",
              "eve_known", "sifted_fraction", "expected_fraction"]
    row = [args.a, args.l, stats.pulses_sent, stats.detections, stats.sifted,
           stats.errors, stats.eve_known, stats.sifted_fraction, expected]
    return config, header, [row]


def _cmd_attack_sim(args: argparse.Namespace) -> tuple[dict, list[str], list[list]]:
    mu = channel.mu_for_a(args.a, args.mu_b)
    eta = channel.transmission(args.alpha, args.l).eta_rho
    rng = np.random.default_rng(args.seed)
    wanted = ("storage", "irud") if args.attack == "both" else (args.attack,)

    rows = []
    for kind in wanted:
        if kind == "storage":
            analytic = attacks.storage_attack(args.a, eta, mu)
            sim = attacks.monte_carlo_storage(args.a, eta, mu, args.pulses, rng, args.eta_d)
        else:
            analytic = attacks.irud_attack(eta, mu)
            sim = attacks.monte_carlo_irud(args.a, eta, mu, args.pulses, rng, args.eta_d)
        emp = sim.result
        rows.append([kind, emp.q, emp.saturated, emp.delivered_rate,
                     analytic.delivered_rate, emp.eve_info, analytic.eve_info,
                     sim.sifted])
    config = {
        "command": "attack-sim", "a": args.a, "l": args.l, "attack": args.attack,
        "alpha": args.alpha, "eta_d": args.eta_d, "mu_b": args.mu_b, "mu": mu,
        "pulses": args.pulses, "seed": args.seed,
    }
    header = ["attack", "q", "saturated", "delivered_rate", "delivered_rate_analytic",
              "eve_info", "eve_info_analytic", "sifted"]
    return config, header, rows


def _sweep_points(args: argparse.Namespace) -> tuple[list[float], list[analysis.CurvePoint]]:
    lengths = _lengths_from(args)
    points = analysis.sweep(args.a, lengths[0], lengths[-1], len(lengths),
                            args.mu_b, args.alpha)
    return lengths, points


def _cmd_sweep(args: argparse.Namespace) -> tuple[dict, list[str], list[list]]:
    _, points = _sweep_points(args)
    config = {
        "command": "sweep", "a": args.a, "l_min": args.l_min, "l_max": args.l_max,
        "l_step": args.l_step, "alpha": args.alpha, "mu_b": args.mu_b,
    }
    header = ["length_km", "a", "info_storage", "info_irud", "info_best"]
    rows = [[p.length_km, p.a, p.info_storage, p.info_irud, p.info_best] for p in points]
    return config, header, rows


def _optimal_curve(lengths: Sequence[float], mu_b: float, alpha: float):
    pairs = [analysis.optimize_a(l, mu_b, alpha) for l in lengths]
    return [p[0] for p in pairs], [p[1] for p in pairs]


def _cmd_optimize(args: argparse.Namespace) -> tuple[dict, list[str], list[list]]:
    lengths = [args.l] if args.l is not None else _lengths_from(args)
    a_stars, info_stars = _optimal_curve(lengths, args.mu_b, args.alpha)
    config = {
        "command": "optimize", "l": args.l, "l_min": args.l_min, "l_max": args.l_max,
        "l_step": args.l_step, "alpha": args.alpha, "mu_b": args.mu_b,
    }
    header = ["length_km", "a_star", "info_star"]
    rows = [[l, a, i] for l, a, i in zip(lengths, a_stars, info_stars)]
    return config, header, rows


def _cmd_limits(args: argparse.Namespace) -> tuple[dict, list[str], list[list]]:
    if args.policy == "fixed":
        if args.a is None:
            raise argparse.ArgumentTypeError("--policy fixed requires --a")
        policy: analysis.Policy = analysis.FixedA(args.a)
    else:
        policy = analysis.OptimalA()
    report = analysis.ultimate_limit(policy, args.mu_b, args.alpha, args.tol_km)
    config = {
        "command": "limits", "policy": args.policy, "a": args.a,
        "alpha": args.alpha, "mu_b": args.mu_b, "tol_km": args.tol_km,
    }
    header = ["policy", "a", "limit_km", "bracket_low_km", "bracket_high_km",
              "info_at_limit", "found"]
    row = [args.policy, args.a, report.limit_km, report.bracket_low_km,
           report.bracket_high_km, report.info_at_limit, report.found]
    return config, header, [row]


def _cmd_verify_theorem(args: argparse.Namespace) -> tuple[dict, list[str], list[list]]:
    a_values = [i / (args.grid_a - 1) for i in range(args.grid_a)] if args.grid_a > 1 else [0.0]
    span = args.l_max - args.l_min
    lengths = (
        [args.l_min + span * i / (args.grid_l - 1) for i in range(args.grid_l)]
        if args.grid_l > 1 else [args.l_min]
    )
    report = analysis.verify_theorem(a_values, lengths, args.mu_b, args.alpha, args.fd_step)
    config = {
        "command": "verify-theorem", "grid_a": args.grid_a, "grid_l": args.grid_l,
        "l_min": args.l_min, "l_max": args.l_max, "fd_step": args.fd_step,
        "alpha": args.alpha, "mu_b": args.mu_b,
    }
    header = ["fd_step", "storage_checked", "storage_excluded", "irud_checked",
              "irud_excluded", "violations", "passed"]
    row = [report.fd_step, report.storage_checked, report.storage_excluded,
           report.irud_checked, report.irud_excluded, len(report.violations),
           report.passed]
    return config, header, [row]


def _cmd_report(args: argparse.Namespace) -> tuple[dict, list[str], list[list]]:
    from . import plotting  # deferred so data commands never import matplotlib

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    lengths, points = _sweep_points(args)

    info_csv = outdir / "information_curves.csv"
    lines = ["length_km,a,info_storage,info_irud,info_best"]
    lines += [",".join(_cell(v) for v in (p.length_km, p.a, p.info_storage,
                                          p.info_irud, p.info_best)) for p in points]
    info_csv.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="")
    info_png = plotting.plot_information_curves(points, outdir / "information_curves.png")

    a_stars, info_stars = _optimal_curve(lengths, args.mu_b, args.alpha)
    opt_csv = outdir / "optimal_selecting.csv"
    lines = ["length_km,a_star,info_star"]
    lines += [",".join(_cell(v) for v in row) for row in zip(lengths, a_stars, info_stars)]
    opt_csv.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="")
    opt_png = plotting.plot_optimal_selecting(
        lengths, a_stars, info_stars, outdir / "optimal_selecting.png"
    )

    config = {
        "command": "report", "a": args.a, "l_min": args.l_min, "l_max": args.l_max,
        "l_step": args.l_step, "alpha": args.alpha, "mu_b": args.mu_b,
        "outdir": str(outdir),
    }
    header = ["file"]
    rows = [[str(p)] for p in (info_csv, info_png, opt_csv, opt_png)]
    return config, header, rows


_COMMANDS = {
    "simulate": _cmd_simulate,
    "attack-sim": _cmd_attack_sim,
    "sweep": _cmd_sweep,
    "optimize": _cmd_optimize,
    "limits": _cmd_limits,
    "verify-theorem": _cmd_verify_theorem,
    "report": _cmd_report,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config, header, rows = _COMMANDS[args.command](args)
    except argparse.ArgumentTypeError as exc:
        parser.error(str(exc))
    except OSError as exc:
        print(f"saqkd: {exc}", file=sys.stderr)
        return 1
    return _emit(args, config, header, rows)


if __name__ == "__main__":
    sys.exit(main())
