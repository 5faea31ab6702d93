"""Command-line front end: ``norm``, ``integrate``, ``check`` and ``emit-fixture``.

Exit codes: 0 success, 1 check failure, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from .fixtures import FIXTURES, fixture_doc
from .integration import BUILTIN_INTEGRANDS, HKConvergenceError, builtin_integrand
from .measures import BudgetError
from .norms import NormResult, check_p, hkl_norm, ksp_norm, ksp_weak_norm, lp_norm
from .specfile import SpecError, dumps_spec, load_spec
from .verify import SUITES, SuiteConfig, instance_from_spec, run_suite

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2


class _Usage(Exception):
    """Validation failure that maps to exit code 2."""


def _exponent(text: str) -> float:
    try:
        return check_p(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ksnorms",
        description="Norms and integrals for finite atomic vector measures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    norm = sub.add_parser("norm", help="evaluate a norm of a function in a measure-spec file")
    norm.add_argument("file", type=Path)
    norm.add_argument("function", help="name of a function in the file")
    norm.add_argument("--norm", choices=("lp", "ks", "ksw", "hkl"), default="ks")
    norm.add_argument("--p", type=_exponent, default=1.0, help="exponent in [1, inf]")
    norm.add_argument("--modulus", action="store_true",
                      help="integrate |f| instead of f (ks only)")
    norm.add_argument("--family", choices=("all_subsets", "dyadic"),
                      help="override the file's set family")
    norm.add_argument("--candidates", choices=("extreme_points", "sphere_sample"),
                      help="override the file's candidate strategy")
    norm.add_argument("--seed", type=int, help="seed for sampled candidates")
    norm.add_argument("--tol", type=_positive,
                      help="truncate the set series once its certified tail is below tol")

    integ = sub.add_parser("integrate", help="HK-integrate a built-in integrand")
    integ.add_argument("name", choices=sorted(BUILTIN_INTEGRANDS))
    integ.add_argument("params", nargs="*", type=float,
                       help="integrand parameters (poly coefficients, sqrt_singular power)")
    integ.add_argument("--a", type=float, default=0.0)
    integ.add_argument("--b", type=float, default=1.0)
    integ.add_argument("--tol", type=_positive, default=1e-8)
    integ.add_argument("--max-depth", type=int, default=40)

    chk = sub.add_parser("check", help="run the verification suites")
    chk.add_argument("files", nargs="*", type=Path,
                     help="measure-spec files added as extra instances")
    chk.add_argument("--suite", action="append", choices=SUITES,
                     help="suite to run (repeatable; default all)")
    chk.add_argument("--seed", type=int, default=42)
    chk.add_argument("--instances", type=int, default=200)
    chk.add_argument("--report-json", type=Path)
    chk.add_argument("--report-text", type=Path)

    emit = sub.add_parser("emit-fixture", help="write a named fixture as a measure-spec file")
    emit.add_argument("name", nargs="?", choices=sorted(FIXTURES))
    emit.add_argument("-o", "--output", type=Path)
    emit.add_argument("--list", action="store_true", help="list fixture names")
    return parser


def _sets_for_tol(result_reach: float, weights: np.ndarray, p: float, tol: float) -> int:
    """Smallest prefix of the family whose dropped weight certifies a tail below ``tol``."""
    if p == math.inf or result_reach == 0:
        return len(weights)
    tails = np.concatenate([np.cumsum(weights[::-1])[::-1][1:], [0.0]])
    ok = np.nonzero(result_reach * tails ** (1.0 / p) <= tol)[0]
    return int(ok[0]) + 1 if ok.size else len(weights)


def _format_result(res: NormResult, spec) -> str:
    lines = [
        f"value: {res.value!r}",
        f"norm: {res.family}  p: {res.p:g}",
        f"lower_bound_certified: {str(res.lower_bound_certified).lower()}",
        f"series_tail_bound: {res.series_tail_bound!r}",
        f"candidates: {res.candidate_provenance}",
        f"family: {spec.family.kind} ({len(spec.family)} sets)",
    ]
    if spec.candidates.notice:
        lines.append(f"notice: {spec.candidates.notice}")
    return "\n".join(lines)


def cmd_norm(args) -> int:
    spec = load_spec(args.file, family_kind=args.family, strategy=args.candidates,
                     seed=args.seed)
    f = spec.function(args.function)
    if args.modulus and args.norm != "ks":
        raise _Usage("--modulus applies to the ks norm only")
    max_sets = None
    if args.tol is not None and args.norm in ("ks", "ksw"):
        reach = float(np.abs(f) @ spec.mu.atom_norms())
        max_sets = _sets_for_tol(reach, spec.family.weights, args.p, args.tol)
    if args.norm == "lp":
        res = lp_norm(f, spec.mu, args.p, spec.candidates)
    elif args.norm == "ks":
        res = ksp_norm(f, spec.mu, args.p, spec.family, spec.candidates, args.modulus,
                       max_sets=max_sets)
    elif args.norm == "ksw":
        res = ksp_weak_norm(f, spec.mu, args.p, spec.family, spec.candidates,
                            max_sets=max_sets)
    else:
        res = hkl_norm(f, spec.mu, spec.candidates)
    print(_format_result(res, spec))
    return EXIT_OK


def cmd_integrate(args) -> int:
    integrand = builtin_integrand(args.name, *args.params)
    try:
        res = integrand.integrate(args.a, args.b, args.tol, max_depth=args.max_depth)
    except HKConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    print(f"value: {res.value!r}")
    print(f"achieved_tol: {res.achieved_tol:.3g}")
    print(f"refinement_depth: {res.refinement_depth}")
    print(f"evaluations: {res.evaluations}")
    return EXIT_OK


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text)
    except OSError as exc:
        raise _Usage(f"cannot write {path}: {exc.strerror}") from None


def cmd_check(args) -> int:
    extra = tuple(instance_from_spec(load_spec(path), f"file:{path.name}")
                  for path in args.files)
    cfg = SuiteConfig(suites=tuple(args.suite or SUITES), seed=args.seed,
                      instances=args.instances, extra=extra)
    report = run_suite(cfg)
    text = report.to_text()
    if args.report_json:
        _write(args.report_json, report.to_json())
    if args.report_text:
        _write(args.report_text, text)
    else:
        sys.stdout.write(text)
    return EXIT_CHECK_FAILED if report.exit_code else EXIT_OK


def cmd_emit_fixture(args) -> int:
    if args.list or args.name is None:
        for name in sorted(FIXTURES):
            print(f"{name}: {FIXTURES[name][1]}")
        return EXIT_OK
    text = dumps_spec(fixture_doc(args.name))
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {
    "norm": cmd_norm,
    "integrate": cmd_integrate,
    "check": cmd_check,
    "emit-fixture": cmd_emit_fixture,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (SpecError, _Usage, BudgetError, KeyError, ValueError, OSError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {message}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
