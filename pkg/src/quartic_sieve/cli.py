"""Command-line front end: ``quartic-sieve <subcommand> ...``.

Exit status 0 on success, 2 on usage errors (bad flags, malformed literals,
violated preconditions), 1 on computation or I/O errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .gaussian import GaussianInteger, parse_gaussian
from .reports import ReportError, default_out_dir, render, write_report
from .symbol import InvalidModulus

log = logging.getLogger("quartic_sieve")


class UsageError(Exception):
    pass


def gaussian_arg(text: str) -> GaussianInteger:
    try:
        return parse_gaussian(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed Gaussian integer literal: {text!r}") from None


def fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from None


def grid_arg(text: str) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be comma-separated integers: {text!r}") from None
    if not vals or min(vals) < 1:
        raise argparse.ArgumentTypeError("grid values must be positive")
    return vals


# flags whose values may start with '-' (negative Gaussian literals, -i, ...)
VALUE_FLAGS = {"--num", "--den", "--r", "--n", "--n1", "--n2", "--f", "--chi", "--w", "--M", "--N",
               "--Q", "--xi0", "--tol", "--eps"}


def _join_negative_values(argv: Sequence[str]) -> list[str]:
    """``--den -1+2i`` -> ``--den=-1+2i`` so argparse does not read it as a flag."""
    out: list[str] = []
    j = 0
    while j < len(argv):
        tok = argv[j]
        nxt = argv[j + 1] if j + 1 < len(argv) else None
        if tok in VALUE_FLAGS and nxt is not None and nxt.startswith("-") and not nxt.startswith("--"):
            out.append(f"{tok}={nxt}")
            j += 2
        else:
            out.append(tok)
            j += 1
    return out


def _add_output(p: argparse.ArgumentParser, formats=("json", "csv")) -> None:
    p.add_argument("--format", choices=formats, default=formats[0], help="report format")
    p.add_argument("--out", type=Path, help="write the report to this file "
                   "(default: $QUARTIC_SIEVE_OUT/<name> when that variable is set)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quartic-sieve",
        description="Quartic residue symbols, Gauss sums, quartic characters and large-sieve experiments.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    p = sub.add_parser("symbol", help="quartic residue symbol (num/den)_4")
    p.add_argument("--num", type=gaussian_arg, required=True)
    p.add_argument("--den", type=gaussian_arg, required=True, help="odd primary modulus")
    _add_output(p, ("text", "json"))

    p = sub.add_parser("gauss-sum", help="Gauss sum g(r, n)")
    p.add_argument("--r", type=gaussian_arg, default=GaussianInteger(1))
    p.add_argument("--n", type=gaussian_arg, required=True)
    _add_output(p)

    p = sub.add_parser("tau", help="tau(chi_n^power) over 1..N(n)")
    p.add_argument("--n", type=gaussian_arg, required=True)
    p.add_argument("--power", type=int, choices=(1, 2), default=1)
    _add_output(p)

    p = sub.add_parser("chars", help="primitive quartic characters of conductor q")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--oracle", action="store_true", help="list the group-theoretic oracle's characters")
    p.add_argument("--check", action="store_true", help="match the family against the oracle")
    _add_output(p)

    p = sub.add_parser("theta", help="theta sum over primary a coprime to f")
    p.add_argument("--w", type=float, required=True)
    p.add_argument("--f", type=gaussian_arg, required=True)
    p.add_argument("--chi", default="principal", help="'principal' or 'n1:p1,n2:p2,...'")
    p.add_argument("--T", type=int, help="override the truncation norm")
    _add_output(p)

    p = sub.add_parser("poisson-check", help="both sides of the Poisson identity")
    p.add_argument("--n1", type=gaussian_arg, required=True)
    p.add_argument("--n2", type=gaussian_arg, default=GaussianInteger(1))
    p.add_argument("--M", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-4)
    _add_output(p)

    p = sub.add_parser("sieve-norm", help="empirical large-sieve norm and bound terms")
    p.add_argument("--kind", choices=("t1", "t2"), required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--N", type=int, help="column range for t1")
    p.add_argument("--Q", type=int, help="conductor range for t2")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--coeffs", type=Path, help="t1 only: CSV index,re,im to evaluate the quadratic form")
    _add_output(p)

    p = sub.add_parser("regime", help="regime table row for Q, M")
    p.add_argument("--Q", type=float, required=True)
    p.add_argument("--M", type=float, required=True)
    _add_output(p)

    p = sub.add_parser("iterate-xi", help="iterate xi -> (9 xi - 6)/(4 xi - 1) exactly")
    p.add_argument("--xi0", type=fraction_arg, required=True)
    p.add_argument("--steps", type=int, required=True)
    _add_output(p, ("text", "json"))

    p = sub.add_parser("sweep", help="sieve-norm over a grid x grid of ranges")
    p.add_argument("--kind", choices=("t1", "t2"), required=True)
    p.add_argument("--grid", type=grid_arg, default=[4, 8, 16, 32, 64])
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    _add_output(p, ("csv", "json"))

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--out", type=Path, help="write a JSON summary here")
    return parser


def _emit(args, report, name: str) -> None:
    text = render(report, args.format)
    sys.stdout.write(text)
    _persist(args, report, name)


def _persist(args, report, name: str, fmt: Optional[str] = None) -> None:
    fmt = fmt or args.format
    if fmt == "text":
        fmt = "json"
    path = args.out
    if path is None and (d := default_out_dir()) is not None:
        path = d / f"{name}.{fmt}"
    if path is not None:
        write_report(report, fmt, path)
        log.info("report written to %s", path)


def _safe(z: GaussianInteger) -> str:
    return str(z).replace("+", "p").replace("-", "m")


def cmd_symbol(args) -> int:
    from .symbol import quartic_symbol

    v = quartic_symbol(args.num, args.den)
    report = {"num": args.num, "den": args.den, "value": str(v), "k": v.k}
    if args.format == "text":
        print(f"{v} (k={'none' if v.k is None else v.k})")
        _persist(args, report, f"symbol_{_safe(args.num)}_{_safe(args.den)}")
    else:
        _emit(args, report, f"symbol_{_safe(args.num)}_{_safe(args.den)}")
    return 0


def cmd_gauss_sum(args) -> int:
    from .gauss_sums import gauss_sum

    g = gauss_sum(args.r, args.n)
    report = {"r": args.r, "n": args.n, "norm": args.n.norm(), "re": g.real, "im": g.imag,
              "abs2": abs(g) ** 2}
    _emit(args, report, f"gauss_sum_{_safe(args.r)}_{_safe(args.n)}")
    return 0


def cmd_tau(args) -> int:
    from .gauss_sums import tau

    t = tau(args.n, args.power)
    report = {"n": args.n, "power": args.power, "norm": args.n.norm(), "re": t.real, "im": t.imag,
              "abs2": abs(t) ** 2}
    _emit(args, report, f"tau_{_safe(args.n)}_{args.power}")
    return 0


def cmd_chars(args) -> int:
    from .characters import enumerate_quartic_family, list_order4_primitive, match_family_to_oracle

    q = args.q
    if q < 1:
        raise UsageError("--q must be positive")
    if args.check:
        report = match_family_to_oracle(q).to_dict()
    elif args.oracle:
        report = {"q": q, "source": "oracle", "characters": [
            {"exponents": list(c.exponents),
             "values": [c.quartic_exponent(m) for m in range(q)]}
            for c in list_order4_primitive(q)]}
    else:
        report = {"q": q, "source": "family", "characters": [
            {"generator": c.generator, "values": [c.exponent(m) for m in range(q)]}
            for c in enumerate_quartic_family(q)]}
    _emit(args, report, f"chars_{q}")
    return 0


def cmd_theta(args) -> int:
    from .analysis import ChiSpec, theta_sum

    chi = ChiSpec.parse(args.chi)
    report = theta_sum(args.w, args.f, chi, truncation_norm=args.T)
    _emit(args, report, f"theta_{_safe(args.f)}")
    return 0


def cmd_poisson(args) -> int:
    from .analysis import poisson_identity_check

    report = poisson_identity_check(args.n1, args.n2, args.M, tol=args.tol)
    _emit(args, report, f"poisson_{_safe(args.n1)}_{_safe(args.n2)}_{args.M:g}")
    return 0 if report.rel_err < args.tol else 1


def cmd_sieve_norm(args) -> int:
    from .harness import empirical_B1, empirical_theorem2

    if args.kind == "t1":
        if args.N is None or args.Q is not None:
            raise UsageError("--kind t1 needs --M and --N (not --Q)")
        report = empirical_B1(args.M, args.N, args.eps)
        if args.coeffs is not None:
            report.extra.update(_quadratic_form_extra(args.M, args.N, args.coeffs, report.empirical_norm))
        name = f"t1_M{args.M}_N{args.N}"
    else:
        if args.Q is None or args.N is not None:
            raise UsageError("--kind t2 needs --Q and --M (not --N)")
        if args.coeffs is not None:
            raise UsageError("--coeffs is only supported with --kind t1")
        report = empirical_theorem2(args.Q, args.M, args.eps)
        name = f"t2_Q{args.Q}_M{args.M}"
    _emit(args, report, name)
    return 0


def _quadratic_form_extra(M: int, N: int, path: Path, norm: float) -> dict:
    import numpy as np

    from .harness import quadratic_form, symbol_matrix
    from .reports import read_coefficients

    try:
        coeffs = read_coefficients(path)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read coefficients from {path}: {exc}") from None
    S = symbol_matrix(M, N)
    unknown = [str(k) for k in coeffs if k not in set(S.cols)]
    if unknown:
        raise UsageError(f"coefficient indices outside the column range: {', '.join(unknown[:5])}")
    a = np.array([coeffs.get(n, 0j) for n in S.cols])
    direct = quadratic_form(S, coeffs)
    matrix = float(np.linalg.norm(S.to_complex() @ a) ** 2)
    l2 = float(np.vdot(a, a).real)
    return {"quadratic_form": direct, "quadratic_form_matrix": matrix, "coeff_l2_sq": l2,
            "quadratic_form_bound": norm * l2}


def cmd_regime(args) -> int:
    from .harness import piecewise_regime

    _emit(args, piecewise_regime(args.Q, args.M), f"regime_{args.Q:g}_{args.M:g}")
    return 0


def cmd_iterate_xi(args) -> int:
    from .harness import exponent_iteration

    trace = exponent_iteration(args.xi0, args.steps)
    if args.format == "text":
        xi = trace.xi_history[-1]
        print(xi)
        print(f"~ {float(xi):.12e}")
        _persist(args, trace, f"xi_{args.steps}")
    else:
        _emit(args, trace, f"xi_{args.steps}")
    return 0


def cmd_sweep(args) -> int:
    from .harness import sweep

    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    reports = sweep(args.kind, args.grid, args.eps, args.jobs)
    _emit(args, reports, f"sweep_{args.kind}")
    return 0


def cmd_verify(args) -> int:
    from .acceptance import run_all

    results = run_all(lambda line: print(line, flush=True))
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed")
    out = args.out
    if out is None and (d := default_out_dir()) is not None:
        out = d / "verify.json"
    if out is not None:
        write_report({"criteria": results, "passed": passed, "total": len(results)}, "json", out)
    return 0 if passed == len(results) else 1


COMMANDS = {
    "symbol": cmd_symbol,
    "gauss-sum": cmd_gauss_sum,
    "tau": cmd_tau,
    "chars": cmd_chars,
    "theta": cmd_theta,
    "poisson-check": cmd_poisson,
    "sieve-norm": cmd_sieve_norm,
    "regime": cmd_regime,
    "iterate-xi": cmd_iterate_xi,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, InvalidModulus, ValueError, TypeError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (ReportError, OSError, RuntimeError, ArithmeticError) as exc:
        print(f"{parser.prog} {args.command}: computation failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
