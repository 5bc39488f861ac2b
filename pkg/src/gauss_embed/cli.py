"""Command-line front end: ``gauss-embed <subcommand> ...``.

Exit codes: 0 success (classify: EMBEDDABLE_KNOWN), 10 GAUSS_OBSTRUCTED,
11 DERIVED_GAUSS_OBSTRUCTED, 2 usage error, 3 unwritable output,
4 input brackets violate the Jacobi identity, 1 selftest failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import classifier, derived, gauss
from .curvature import CurvatureTensor, NablaR, levi_civita, nabla_r_full, riemann_full
from .errors import GaussEmbedError, InvalidFrame, InvalidPoint, NotPositiveDefinite
from .lie_algebra import (CanonicalFrame, Family, FamilyPoint, canonical_frame_of,
                          is_antisymmetric, jacobi_check, orthonormalize, read_gram,
                          read_structure, structure_tensor_of)
from .serialize import dumps, to_jsonable

EXIT_OK = 0
EXIT_SELFTEST_FAILED = 1
EXIT_USAGE = 2
EXIT_UNWRITABLE = 3
EXIT_JACOBI = 4
VERDICT_EXIT = {
    classifier.VerdictStatus.EMBEDDABLE_KNOWN: 0,
    classifier.VerdictStatus.GAUSS_OBSTRUCTED: 10,
    classifier.VerdictStatus.DERIVED_GAUSS_OBSTRUCTED: 11,
}
JACOBI_TOL = 1e-6
ENV_EPS = "GAUSS_EMBED_EPS"
# options whose values may start with '-' and would otherwise be read as flags
_DASH_VALUE_OPTS = ("--alpha-range", "--lambda-range", "--u-range", "--v-range", "--w-range",
                    "--canonical")


class UsageError(Exception):
    pass


class JacobiError(Exception):
    pass


def _default_eps() -> float:
    raw = os.environ.get(ENV_EPS)
    if raw is None:
        return gauss.DEFAULT_EPS
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"{ENV_EPS}={raw!r} is not a number") from None


def parse_range(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"range must be lo:hi:step, got {text!r}")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError:
        raise UsageError(f"range must be numeric, got {text!r}") from None
    try:
        classifier.grid_values(lo, hi, step)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return lo, hi, step


def _add_point_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", help="abelian, h3, r3, r3-alpha, r3-prime-alpha or simple")
    p.add_argument("--alpha", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--u", type=float)
    p.add_argument("--v", type=float)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--epsilon", type=float, default=None,
                   help=f"zero tolerance (default 1e-9, or ${ENV_EPS})")
    p.add_argument("--format", choices=("json", "text"), default="json")


def _add_source_args(p: argparse.ArgumentParser) -> None:
    _add_point_args(p)
    p.add_argument("--canonical", help="a,b,c,d,t canonical bracket coefficients")
    p.add_argument("--structure", type=Path, help="file with 27 structure constants")
    p.add_argument("--gram", type=Path, help="file with the 9 Gram matrix entries")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gauss-embed",
                                     description="Gauss-equation obstructions for 3D metric Lie algebras")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="verdict for a family point")
    _add_point_args(p)
    _add_common(p)

    for name, help_ in (("curvature", "curvature and its covariant derivative"),
                        ("derived", "derived Gauss system")):
        p = sub.add_parser(name, help=help_)
        _add_source_args(p)
        _add_common(p)

    p = sub.add_parser("gauss", help="solve the Gauss equation")
    _add_source_args(p)
    p.add_argument("--curvature", nargs=6, type=float,
                   metavar=("R1212", "R1313", "R2323", "R1213", "R1223", "R1323"))
    _add_common(p)

    p = sub.add_parser("scan", help="grid scan of a family; writes CSV")
    p.add_argument("--family", required=True)
    for coord in ("alpha", "lambda", "u", "v", "w"):
        p.add_argument(f"--{coord}-range", dest=f"{coord}_range", metavar="LO:HI:STEP")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--epsilon", type=float, default=None)

    p = sub.add_parser("selftest", help="run the invariant suites")
    p.add_argument("--seed", type=int, default=20240611)
    return parser


def _epsilon(args) -> float:
    eps = args.epsilon if args.epsilon is not None else _default_eps()
    if not eps > 0:
        raise UsageError(f"epsilon must be positive, got {eps!r}")
    return eps


def _point(args) -> FamilyPoint:
    if not args.family:
        raise UsageError("--family is required")
    try:
        return FamilyPoint(Family.from_slug(args.family), alpha=args.alpha, lam=args.lam,
                           u=args.u, v=args.v)
    except InvalidPoint as exc:
        raise UsageError(str(exc)) from None


def _source(args):
    """Resolve exactly one input route to a FamilyPoint, CanonicalFrame or structure tensor."""
    given = [name for name in ("family", "canonical", "structure") if getattr(args, name)]
    if getattr(args, "curvature", None) is not None:
        given.append("curvature")
    if len(given) != 1:
        raise UsageError("give exactly one of --family, --canonical, --structure"
                         + (", --curvature" if hasattr(args, "curvature") else ""))
    if args.family:
        return _point(args)
    if args.canonical:
        try:
            vals = [float(x) for x in args.canonical.split(",")]
        except ValueError:
            raise UsageError(f"--canonical needs five reals, got {args.canonical!r}") from None
        if len(vals) != 5:
            raise UsageError(f"--canonical needs five reals, got {len(vals)}")
        try:
            return CanonicalFrame(*vals)
        except InvalidFrame as exc:
            raise JacobiError(str(exc)) from None
    if args.structure:
        try:
            c = read_structure(args.structure)
            gram = read_gram(args.gram) if args.gram else None
        except (OSError, ValueError) as exc:
            raise UsageError(str(exc)) from None
        if not is_antisymmetric(c, 1e-12):
            raise UsageError("structure constants are not antisymmetric in the bracket slots")
        jac = jacobi_check(c)
        if jac > JACOBI_TOL:
            raise JacobiError(f"Jacobi identity violated: max Jacobiator component {jac:.3e}")
        if gram is not None:
            try:
                c, _ = orthonormalize(c, gram)
            except NotPositiveDefinite as exc:
                raise UsageError(str(exc)) from None
        return c
    return None


def _structure(source) -> np.ndarray:
    if isinstance(source, FamilyPoint):
        return structure_tensor_of(canonical_frame_of(source))
    if isinstance(source, CanonicalFrame):
        return structure_tensor_of(source)
    return source


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "json":
        print(dumps(payload))
        return
    for key, val in _flatten(to_jsonable(payload)):
        print(f"{key}: {val}")


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}.")
    else:
        yield prefix.rstrip("."), obj


def cmd_classify(args) -> int:
    eps = _epsilon(args)
    report = classifier.classify(_point(args), eps)
    _emit(report.to_dict(), args.format)
    return VERDICT_EXIT[report.verdict.status]


def cmd_curvature(args) -> int:
    c = _structure(_source(args))
    g = levi_civita(c)
    Rfull = riemann_full(c, g)
    R = CurvatureTensor.from_full(Rfull)
    dR = NablaR.from_full(nabla_r_full(c, g, Rfull))
    _emit({"R": R.as_dict(), "dR": dR.as_dict(), "T": gauss.thomas_T(R)}, args.format)
    return EXIT_OK


def cmd_gauss(args) -> int:
    eps = _epsilon(args)
    source = _source(args)
    if source is None:
        R = CurvatureTensor.from_values(args.curvature)
    else:
        R = CurvatureTensor.from_full(riemann_full(_structure(source)))
    out = gauss.solve(R, eps)
    payload = out.to_dict()
    payload["R"] = R.as_dict()
    _emit(payload, args.format)
    return EXIT_OK


def cmd_derived(args) -> int:
    eps = _epsilon(args)
    source = _source(args)
    c = _structure(source)
    outcome = gauss.solve(CurvatureTensor.from_full(riemann_full(c)), eps)
    if not outcome.solvable:
        payload = {"solvable": None, "residual": None, "relative_residual": None,
                   "h3": None, "closed_form": {}, "flags": ["GAUSS_UNSOLVABLE"]}
    else:
        payload = derived.check(source, outcome, eps).to_dict()
    payload["gauss_status"] = outcome.status.value
    _emit(payload, args.format)
    return EXIT_OK


def cmd_scan(args) -> int:
    eps = _epsilon(args)
    try:
        family = Family.from_slug(args.family)
    except InvalidPoint as exc:
        raise UsageError(str(exc)) from None
    ranges = {}
    for coord in ("alpha", "lambda", "u", "v", "w"):
        text = getattr(args, f"{coord}_range")
        if text is not None:
            ranges[coord] = parse_range(text)
    if args.threads is not None and args.threads < 1:
        raise UsageError("--threads must be positive")
    try:
        rows = classifier.region_scan(family, ranges, eps, args.threads)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "csv":
        text = classifier.rows_to_csv(rows)
    else:
        text = dumps({"columns": list(classifier.CSV_HEADER),
                      "rows": [r.to_dict() for r in rows]}) + "\n"
    try:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"gauss-embed: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_UNWRITABLE
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import run_all
    results = run_all(args.seed)
    for r in results:
        print(r.line())
    ok = all(r.passed for r in results)
    print("selftest:", "all suites passed" if ok else "FAILED")
    return EXIT_OK if ok else EXIT_SELFTEST_FAILED


COMMANDS = {
    "classify": cmd_classify,
    "curvature": cmd_curvature,
    "gauss": cmd_gauss,
    "derived": cmd_derived,
    "scan": cmd_scan,
    "selftest": cmd_selftest,
}


def _glue_dash_values(argv: list[str]) -> list[str]:
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _DASH_VALUE_OPTS:
            val = next(it, None)
            out.append(tok if val is None else f"{tok}={val}")
        else:
            out.append(tok)
    return out


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_dash_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"gauss-embed: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except JacobiError as exc:
        print(f"gauss-embed: {exc}", file=sys.stderr)
        return EXIT_JACOBI
    except GaussEmbedError as exc:
        print(f"gauss-embed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
