"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 non-convergence or table mismatch,
3 empty result.  Numbers are always written as decimal strings.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

import mpmath as mp

from . import __version__
from .aim import AimOptions, AimProblem, aim_find_eigenvalues, m1_wavefunction
from .errors import HyperwellError, NoSuchStateError, UsageError
from .exact_pt import pt_spectrum, pt_wavefunction
from .heun import HeunCoefficients, ode_residual, solve_polynomial, sufficiency_residual
from .potential import exact_bound_state_count_pt
from .precision import check_digits, default_digits, to_decimal_string, working_precision
from .qes import qes_enumerate, qes_wavefunction, scan_range
from .states import Parity
from .tables import TABLE_IDS, parse_strength, reproduce_table

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH, EXIT_EMPTY = 0, 1, 2, 3
GLOBAL_DEFAULTS = {"digits": None, "format": "json", "r0": "0.5", "n_max": 80, "tol_exp": None, "workers": 1}

SOLVE_FIELDS = ["m", "v", "beta", "n", "epsilon", "method", "iterations", "residual"]
EXACT_FIELDS = ["v", "beta", "n", "epsilon", "method", "count"]
QES_FIELDS = ["N", "beta", "v", "epsilon", "sufficiency_residual"]
HEUN_FIELDS = ["N", "tau0", "coefficients", "max_ode_residual"]
TABLE_FIELDS = ["table", "method", "v", "beta", "n", "printed", "computed", "error", "matched", "required", "iterations", "printed_iterations", "status", "note"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


@dataclass(frozen=True)
class RunConfig:
    digits: int
    r0: mp.mpf
    n_max: int
    tol_exp: int | None
    format: str
    workers: int = 1

    def aim_options(self, levels=None) -> AimOptions:
        tol = None if self.tol_exp is None else mp.mpf(10) ** -self.tol_exp
        return AimOptions(n_max=self.n_max, tol=tol, levels=levels, workers=self.workers)


def _num(x, digits: int) -> str:
    if x is None:
        return ""
    return to_decimal_string(x, digits)


def _beta(text: str) -> Parity:
    if text not in ("0", "0.5", "1/2"):
        raise argparse.ArgumentTypeError("beta must be 0 or 0.5")
    return Parity.coerce(text)


def _strength(text: str) -> str:
    try:
        value = parse_strength(text)
    except (ValueError, TypeError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError("v must be positive")
    return text


def _decimal(text: str) -> str:
    try:
        mp.mpf(text)
    except (ValueError, TypeError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    return text


def emit(rows: list[dict], fields: list[str], fmt: str, meta: dict | None = None, out=None):
    out = out or sys.stdout
    if fmt == "json":
        payload = dict(meta or {})
        payload["rows"] = rows
        json.dump(payload, out, indent=2)
        out.write("\n")
    elif fmt == "csv":
        writer = csv.DictWriter(out, fieldnames=fields, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    else:
        for key, value in (meta or {}).items():
            out.write(f"# {key}: {value}\n")
        widths = {f: max([len(f)] + [len(str(r.get(f, ""))) for r in rows]) for f in fields}
        out.write("  ".join(f.ljust(widths[f]) for f in fields).rstrip() + "\n")
        for r in rows:
            out.write("  ".join(str(r.get(f, "")).ljust(widths[f]) for f in fields).rstrip() + "\n")


def cmd_solve(args, cfg: RunConfig) -> int:
    v = parse_strength(args.v)
    problem = AimProblem(args.m, args.beta, v, r0=cfg.r0, taylor_order=cfg.n_max + 2,
                         gamma=None if args.gamma is None else mp.mpf(args.gamma))
    results = aim_find_eigenvalues(problem, cfg.aim_options(args.levels))
    rows = [
        {
            "m": args.m,
            "v": _num(v, cfg.digits),
            "beta": r.beta.label,
            "n": r.n,
            "epsilon": _num(r.epsilon, cfg.digits),
            "method": r.method,
            "iterations": r.iterations,
            "residual": _num(r.residual, 5),
            "converged": r.converged,
            "flags": list(r.flags),
        }
        for r in results
    ]
    emit(rows, SOLVE_FIELDS, cfg.format)
    if not rows:
        print("no bound state found in this parity sector", file=sys.stderr)
        return EXIT_EMPTY
    if not all(r.converged for r in results):
        print("some states did not converge within n_max", file=sys.stderr)
        return EXIT_MISMATCH
    if args.levels is not None and len(rows) < args.levels:
        print(f"found {len(rows)} of {args.levels} requested states", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_exact(args, cfg: RunConfig) -> int:
    v = parse_strength(args.v)
    count = exact_bound_state_count_pt(v, args.beta)
    rows = [
        {"v": _num(v, cfg.digits), "beta": r.beta.label, "n": r.n, "epsilon": _num(r.epsilon, cfg.digits),
         "method": r.method, "count": count}
        for r in pt_spectrum(v, args.beta)
    ]
    emit(rows, EXACT_FIELDS, cfg.format, {"count": count})
    if count == 0:
        print("no bound state in this parity sector", file=sys.stderr)
        return EXIT_EMPTY
    return EXIT_OK


def cmd_qes(args, cfg: RunConfig) -> int:
    t_max = None if args.tmax is None else mp.mpf(args.tmax)
    lo, hi = scan_range(args.N, args.beta, t_max)
    pairs = qes_enumerate(args.N, args.beta, t_max=t_max, points=args.points)
    rows = [
        {"N": p.N, "beta": p.beta.label, "v": _num(p.v, cfg.digits), "epsilon": _num(p.epsilon, cfg.digits),
         "sufficiency_residual": _num(sufficiency_residual(p.P_values), 5)}
        for p in pairs
    ]
    scan = f"sqrt(v) in ({mp.nstr(lo, 10)}, {mp.nstr(hi, 10)}]"
    emit(rows, QES_FIELDS, cfg.format, {"scan_range": scan})
    if not rows:
        print(f"no quasi-exact pair in the scan range {scan}", file=sys.stderr)
        return EXIT_EMPTY
    return EXIT_OK


def cmd_heun(args, cfg: RunConfig) -> int:
    coeffs = HeunCoefficients(a1=args.a1, a2=args.a2, b0=args.b0, b1=args.b1, b2=args.b2)
    sols = solve_polynomial(coeffs, args.N, (args.bracket[0], args.bracket[1]), args.points)
    rows = []
    for sol in sols:
        full = coeffs.replace(tau0=sol.tau0, tau1=args.N * coeffs.b2)
        worst = max(abs(ode_residual(full, sol, mp.mpf(k) / 4)) for k in range(-4, 5))
        rows.append(
            {"N": sol.N, "tau0": _num(sol.tau0, cfg.digits),
             "coefficients": " ".join(_num(c, cfg.digits) for c in sol.coeffs),
             "max_ode_residual": _num(worst, 5)}
        )
    emit(rows, HEUN_FIELDS, cfg.format)
    if not rows:
        print("no admissible tau0 in the bracket", file=sys.stderr)
        return EXIT_EMPTY
    return EXIT_OK


def _wavefunction_source(args, cfg: RunConfig):
    if args.source == "pt":
        return lambda z: pt_wavefunction(parse_strength(args.v), args.beta, args.n, z)
    if args.source == "qes":
        pairs = qes_enumerate(args.N, args.beta)
        if not args.n < len(pairs):
            raise NoSuchStateError(f"only {len(pairs)} quasi-exact pairs for N={args.N}", len(pairs) - 1)
        pair = pairs[args.n]
        return lambda z: qes_wavefunction(pair, z)
    v = parse_strength(args.v)
    problem = AimProblem(1, args.beta, v, r0=cfg.r0, taylor_order=cfg.n_max + 2)
    states = aim_find_eigenvalues(problem, cfg.aim_options(args.n + 1))
    if not args.n < len(states):
        raise NoSuchStateError(f"found only {len(states)} state(s)", len(states) - 1 if states else None)
    eps = states[args.n].epsilon
    return lambda z: m1_wavefunction(args.beta, eps, v, z)


def cmd_wavefunction(args, cfg: RunConfig) -> int:
    if args.points < 2:
        raise UsageError("need at least two sample points")
    zmin, zmax = mp.mpf(args.zmin), mp.mpf(args.zmax)
    if not zmin < zmax:
        raise UsageError("zmin must be below zmax")
    psi = _wavefunction_source(args, cfg)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["z", "psi"])
    for i in range(args.points):
        z = zmin + (zmax - zmin) * i / (args.points - 1)
        writer.writerow([_num(z, cfg.digits), _num(psi(z), cfg.digits)])
    sys.stdout.write(out.getvalue())
    return EXIT_OK


def cmd_table(args, cfg: RunConfig) -> int:
    reports = reproduce_table(args.id, cfg.aim_options())
    rows = []
    for rep in reports:
        r = rep.row
        rows.append(
            {
                "table": r.table,
                "method": rep.method,
                "v": r.v_text,
                "beta": r.beta.label,
                "n": r.n,
                "printed": r.epsilon_text,
                "computed": _num(rep.computed, 30),
                "error": _num(rep.error, 3),
                "matched": rep.matched,
                "required": rep.required,
                "iterations": "" if rep.iterations is None else rep.iterations,
                "printed_iterations": "" if r.iterations is None else r.iterations,
                "status": "ok" if rep.passed else "MISMATCH",
                "note": rep.note,
            }
        )
    failed = sum(not rep.passed for rep in reports)
    emit(rows, TABLE_FIELDS, cfg.format, {"table": args.id, "failed": failed})
    return EXIT_MISMATCH if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    # global options are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=argparse.SUPPRESS, help="working precision (default $HYPERWELL_DIGITS or 100)")
    common.add_argument("--format", choices=("json", "csv", "text"), default=argparse.SUPPRESS)
    common.add_argument("--r0", type=_decimal, default=argparse.SUPPRESS, help="AIM expansion point in (0, 1)")
    common.add_argument("--n-max", type=int, default=argparse.SUPPRESS, help="maximum AIM iterations")
    common.add_argument("--tol-exp", type=int, default=argparse.SUPPRESS, help="root tolerance 10**-TOL_EXP")
    common.add_argument("--workers", type=int, default=argparse.SUPPRESS, help="processes for the AIM scan")
    parser = _Parser(prog="hyperwell", description="Bound states of the hyperbolic double-well family.", parents=[common])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", parents=[common], help="AIM spectrum of one parity sector")
    p.add_argument("--m", type=int, required=True, choices=(0, 1, 2))
    p.add_argument("--v", type=_strength, required=True)
    p.add_argument("--beta", type=_beta, required=True)
    p.add_argument("--levels", type=int, default=None)
    p.add_argument("--gamma", type=_decimal, default=None, help="override the asymptotic factor (experimental)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("exact", parents=[common], help="closed-form m = 0 spectrum")
    p.add_argument("--v", type=_strength, required=True)
    p.add_argument("--beta", type=_beta, required=True)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("qes", parents=[common], help="quasi-exact (v, epsilon) pairs for m = 2")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--beta", type=_beta, required=True)
    p.add_argument("--tmax", type=_decimal, default=None, help="upper end of the sqrt(v) scan")
    p.add_argument("--points", type=int, default=4096)
    p.set_defaults(func=cmd_qes)

    p = sub.add_parser("heun", parents=[common], help="degree-N polynomial solutions of the confluent Heun form")
    for name in ("a1", "a2", "b0", "b1", "b2"):
        p.add_argument(f"--{name}", type=_decimal, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--bracket", type=_decimal, nargs=2, required=True, metavar=("LO", "HI"))
    p.add_argument("--points", type=int, default=512)
    p.set_defaults(func=cmd_heun)

    p = sub.add_parser("wavefunction", parents=[common], help="sample psi(z) as CSV")
    p.add_argument("--source", choices=("pt", "qes", "m1"), required=True)
    p.add_argument("--v", type=_strength, default=None)
    p.add_argument("--beta", type=_beta, required=True)
    p.add_argument("--n", type=int, default=0, help="level (pt, m1) or pair index by increasing v (qes)")
    p.add_argument("--N", type=int, default=None, help="polynomial degree (qes)")
    p.add_argument("--zmin", type=_decimal, default="-6")
    p.add_argument("--zmax", type=_decimal, default="6")
    p.add_argument("--points", type=int, default=121)
    p.set_defaults(func=cmd_wavefunction)

    p = sub.add_parser("table", parents=[common], help="recompute a reference table")
    p.add_argument("--id", choices=TABLE_IDS, required=True)
    p.set_defaults(func=cmd_table)
    return parser


def _validate(args, parser):
    if args.command == "wavefunction":
        if args.source in ("pt", "m1") and args.v is None:
            parser.error(f"--v is required for --source {args.source}")
        if args.source == "qes" and args.N is None:
            parser.error("--N is required for --source qes")
    if getattr(args, "levels", None) is not None and args.levels < 1:
        parser.error("--levels must be positive")
    if getattr(args, "N", None) is not None and args.N < 0:
        parser.error("--N must be non-negative")
    if args.n_max < 1:
        parser.error("--n-max must be positive")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for key, value in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    _validate(args, parser)
    try:
        digits = check_digits(args.digits) if args.digits is not None else default_digits()
        with working_precision(digits):
            r0 = mp.mpf(args.r0)
            if not 0 < r0 < 1:
                raise UsageError("--r0 must lie in (0, 1)")
            cfg = RunConfig(digits, r0, args.n_max, args.tol_exp, args.format, args.workers)
            return args.func(args, cfg)
    except NoSuchStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HyperwellError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    raise SystemExit(main())
