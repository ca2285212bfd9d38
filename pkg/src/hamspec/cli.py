"""Spectral solver for scalar stochastic Hamiltonian boundary-value problems.

Exit codes: 0 success, 1 validation failure, 2 numerical failure, 3 usage
error (bad flags or an unreadable/invalid config file).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import __version__
from ._backend import BACKEND
from .errors import (
    ConfigError,
    DegenerateCoefficients,
    DuplicateKey,
    HamspecError,
    InadmissibleRho,
    InvalidCoefficients,
    InvalidSign,
    MissingKey,
    OracleError,
    ParseError,
    StructureViolation,
    UnknownKey,
)
from .model import (
    COEFFICIENT_KEYS,
    Coefficients,
    reduced_params,
    validate_monotonicity,
    validate_structure,
)
from .oracle import IntegratorOptions, crosscheck, detect_blowup
from .riccati import (
    blowup_dual,
    blowup_primal,
    dual_coeffs,
    k_closed,
    k_tilde_closed,
    primal_coeffs,
)
from .spectrum import asymptotics, period_classify, spectrum_sweep, growth_bounds

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
EXIT_USAGE = 3

CONFIG_KEYS = ("T",) + COEFFICIENT_KEYS
EIGS_FIELDS = (
    "n", "rho", "lambda", "delta", "delta_tilde",
    "counting_residual", "chain_residual", "ratio", "status",
)
ASYMPTOTICS_FIELDS = ("n", "ratio", "lower", "upper", "in_bounds")


class UsageError(Exception):
    pass


# config files

def parse_config_text(text: str) -> Coefficients:
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ParseError(lineno, raw)
        if key not in CONFIG_KEYS:
            raise UnknownKey(key)
        if key in values:
            raise DuplicateKey(key)
        try:
            number = float(value)
        except ValueError:
            raise ParseError(lineno, raw) from None
        if not math.isfinite(number):
            raise ParseError(lineno, raw)
        values[key] = number
    for key in CONFIG_KEYS:
        if key not in values:
            raise MissingKey(key)
    return Coefficients(**values)


def parse_config(path) -> Coefficients:
    return parse_config_text(Path(path).read_text())


def format_config(c: Coefficients) -> str:
    """Canonical config text; ``repr`` keeps every float bit-exact."""
    return "".join(f"{key} = {getattr(c, key)!r}\n" for key in CONFIG_KEYS)


# output helpers

def fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def render(rows: list[dict], fields, fmt_name: str) -> str:
    if fmt_name == "json":
        data = [{k: _jsonable(row[k]) for k in fields} for row in rows]
        return json.dumps(data, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([fmt(row[k]) for k in fields])
    return buf.getvalue()


def emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# validation shared by solve commands

def _validate(c: Coefficients, verbose: bool = False) -> bool:
    report = validate_monotonicity(c)
    structure_ok = True
    residual = abs(c.H23 + c.H33 * c.H13)
    try:
        validate_structure(c)
    except StructureViolation:
        structure_ok = False
    if verbose:
        eigs = ", ".join(fmt(e) for e in report.eigenvalues)
        print(f"monotonicity: alpha = {fmt(report.alpha)} "
              f"({'pass' if report.passes else 'FAIL'})")
        print(f"  symmetric-part eigenvalues: {eigs}")
        print(f"structure: |H23 + H33*H13| = {fmt(residual)} "
              f"({'pass' if structure_ok else 'FAIL'})")
    elif not (report.passes and structure_ok):
        what = []
        if not report.passes:
            what.append(f"monotonicity (alpha = {fmt(report.alpha)})")
        if not structure_ok:
            what.append(f"structure (residual {fmt(residual)})")
        print("validation failed: " + "; ".join(what), file=sys.stderr)
    return report.passes and structure_ok


def _need_n_max(args) -> int:
    if args.n_max < 1:
        raise UsageError("--n-max must be at least 1")
    return args.n_max


def _print_params(P) -> None:
    print(f"rho0 = {fmt(P.rho0)}")
    print(f"rho_star = {fmt(P.rho_star)}")
    print(f"rho_max = {fmt(P.rho_max)}")


# commands

def cmd_check(c: Coefficients, args) -> int:
    ok = _validate(c, verbose=True)
    try:
        _print_params(reduced_params(c))
    except DegenerateCoefficients as exc:
        print(f"reduced parameters unavailable: {exc}")
        ok = False
    if c.H12 != 0.0 or c.H32 != 0.0:
        print("note: H12 and H32 do not enter the Riccati equations; "
              "they only affect the monotonicity matrix and the dual Hamiltonian")
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_params(c: Coefficients, args) -> int:
    P = reduced_params(c)
    for name in ("p", "p_tilde", "r", "q_tilde"):
        print(f"{name} = {fmt(float(getattr(P, name)))}")
    _print_params(P)
    print(f"T = {fmt(P.T)}")
    return EXIT_OK


def _eigs_rows(records):
    return [
        {
            "n": rec.n, "rho": rec.rho_n, "lambda": rec.lambda_n,
            "delta": rec.delta, "delta_tilde": rec.delta_tilde,
            "counting_residual": rec.counting_residual,
            "chain_residual": rec.chain_residual,
            "ratio": rec.ratio, "status": rec.status,
        }
        for rec in records
    ]


def cmd_eigs(c: Coefficients, args) -> int:
    n_max = _need_n_max(args)
    if not _validate(c):
        return EXIT_VALIDATION
    records = spectrum_sweep(reduced_params(c), c, n_max, workers=args.workers)
    emit(render(_eigs_rows(records), EIGS_FIELDS, args.format), args.out)
    return EXIT_OK if all(rec.ok for rec in records) else EXIT_NUMERICAL


def cmd_verify(c: Coefficients, args) -> int:
    n_max = _need_n_max(args)
    if not _validate(c):
        return EXIT_VALIDATION
    P = reduced_params(c)
    records = spectrum_sweep(P, c, n_max, workers=args.workers)
    print("n,rho,primal_gap,dual_gap,pass")
    worst_p = worst_d = 0.0
    all_ok = True
    for rec in records:
        if not rec.ok:
            print(f"{rec.n},nan,nan,nan,skipped ({rec.status})")
            continue
        try:
            rep = crosscheck(P, c, rec.rho_n)
        except OracleError as exc:
            print(f"oracle failure at n={rec.n}: {exc}", file=sys.stderr)
            return EXIT_NUMERICAL
        worst_p = max(worst_p, rep.primal_gap)
        worst_d = max(worst_d, rep.dual_gap)
        all_ok &= rep.passed
        print(f"{rec.n},{fmt(rec.rho_n)},{fmt(rep.primal_gap)},{fmt(rep.dual_gap)},{fmt(rep.passed)}")
    print(f"max primal gap = {fmt(worst_p)}")
    print(f"max dual gap = {fmt(worst_d)}")
    return EXIT_OK if all_ok else EXIT_NUMERICAL


def cmd_blowup(c: Coefficients, args) -> int:
    if not _validate(c):
        return EXIT_VALIDATION
    P = reduced_params(c)
    closed = None
    try:
        closed = (blowup_primal(P, c, args.rho), blowup_dual(P, c, args.rho))
    except InadmissibleRho:
        print(f"rho = {fmt(args.rho)} >= rho_max = {fmt(P.rho_max)}: no closed form")
        if not args.oracle:
            return EXIT_NUMERICAL
    if closed:
        bp, bd = closed
        print(f"primal t_star = {fmt(bp.t_star)} delta = {fmt(bp.delta)}")
        print(f"dual t_star = {fmt(bd.t_star)} delta = {fmt(bd.delta)}")
    if args.oracle:
        opts = IntegratorOptions()
        if closed:
            opts = IntegratorOptions(horizon=max(50.0 * c.T, 4.0 * max(b.delta for b in closed)))
        for label, rc in (("primal", primal_coeffs(P, c, args.rho)), ("dual", dual_coeffs(P, c, args.rho))):
            try:
                est = detect_blowup(rc, c.T, opts)
            except OracleError as exc:
                print(f"oracle {label}: {exc}")
                if closed:
                    return EXIT_NUMERICAL
                continue
            line = f"oracle {label} t_star = {fmt(est.t_star)} +/- {fmt(est.uncertainty)}"
            if closed:
                ref = closed[0] if label == "primal" else closed[1]
                line += f" gap = {fmt(abs(est.t_star - ref.t_star))}"
            print(line)
    return EXIT_OK


def cmd_riccati(c: Coefficients, args) -> int:
    if args.samples < 1:
        raise UsageError("--samples must be at least 1")
    if not _validate(c):
        return EXIT_VALIDATION
    P = reduced_params(c)
    try:
        bp, bd = blowup_primal(P, c, args.rho), blowup_dual(P, c, args.rho)
    except InadmissibleRho as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_NUMERICAL
    # both solutions must exist on the grid: start past the later pole
    start = max(bp.t_star, bd.t_star) + 0.01 * min(bp.delta, bd.delta)
    step = (c.T - start) / args.samples
    rows = []
    for i in range(1, args.samples + 1):
        t = c.T if i == args.samples else start + i * step
        rows.append({"t": t, "k": k_closed(P, c, args.rho, t), "k_tilde": k_tilde_closed(P, c, args.rho, t)})
    emit(render(rows, ("t", "k", "k_tilde"), "csv"), args.out)
    return EXIT_OK


def cmd_asymptotics(c: Coefficients, args) -> int:
    n_max = _need_n_max(args)
    if not _validate(c):
        return EXIT_VALIDATION
    P = reduced_params(c)
    records = spectrum_sweep(P, c, n_max, workers=args.workers)
    lower, upper = growth_bounds(c)
    rows = [
        {"n": rec.n, "ratio": rec.ratio, "lower": lower, "upper": upper,
         "in_bounds": rec.ok and lower <= rec.ratio <= upper}
        for rec in records
    ]
    emit(render(rows, ASYMPTOTICS_FIELDS, args.format), args.out)
    if any(rec.ok for rec in records):
        rep = asymptotics(P, c, records)
        print(f"omega brackets ok: {fmt(rep.omega_brackets_ok)}; "
              f"bounds hold from n = {rep.bounds_ok_from}", file=sys.stderr)
    return EXIT_OK if all(rec.ok for rec in records) else EXIT_NUMERICAL


def cmd_period(c: Coefficients, args) -> int:
    if not _validate(c):
        return EXIT_VALIDATION
    try:
        v = period_classify(reduced_params(c), c, args.lam)
    except InvalidSign as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VALIDATION
    print(f"lambda = {fmt(v.lam)}")
    print(f"period greater than: {v.n_greater_than if v.n_greater_than is not None else 'none'}")
    print(f"period less than: {v.n_less_than}")
    print(f"caveat: {v.caveat}")
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "params": cmd_params,
    "eigs": cmd_eigs,
    "verify": cmd_verify,
    "blowup": cmd_blowup,
    "riccati": cmd_riccati,
    "asymptotics": cmd_asymptotics,
    "period": cmd_period,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hamspec", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__} ({BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", help="key = value coefficient file")
        return p

    add("check", "validate monotonicity and structure assumptions")
    add("params", "print the reduced parameters")
    for name, help_text in (("eigs", "compute eigenvalues"),
                            ("asymptotics", "ratio lambda_n/n^2 against the bounds")):
        p = add(name, help_text)
        p.add_argument("--n-max", type=int, default=10, help="largest index n (default 10)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="write to this file instead of stdout")
        p.add_argument("--workers", type=int, default=1, help="solver threads; output order is fixed")
    p = add("verify", "cross-check blow-up times against the ODE oracle")
    p.add_argument("--n-max", type=int, default=10, help="check rho_1..rho_N (default 10)")
    p.add_argument("--workers", type=int, default=1, help="solver threads; output order is fixed")
    p = add("blowup", "blow-up times at a given rho")
    p.add_argument("--rho", type=float, required=True, help="spectral parameter, 1 - lambda")
    p.add_argument("--oracle", action="store_true", help="also locate both poles by integration")
    p = add("riccati", "sample both closed-form Riccati solutions")
    p.add_argument("--rho", type=float, required=True, help="spectral parameter, 1 - lambda")
    p.add_argument("--samples", type=int, default=100, help="grid points (default 100)")
    p.add_argument("--out", help="write to this file instead of stdout")
    p = add("period", "statistic-period thresholds for an eigenvalue")
    p.add_argument("--lambda", dest="lam", type=float, required=True, help="eigenvalue to classify")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        c = parse_config(args.config)
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, InvalidCoefficients) as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](c, args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateCoefficients as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except HamspecError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
