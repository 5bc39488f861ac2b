"""Embeddability verdicts for the normal-form families.

Verdicts come from exact inequalities on the family parameters; every
verdict is cross-checked by running the numeric pipeline
(structure tensor -> curvature -> Gauss solve -> derived check).
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import derived, gauss
from .curvature import riemann_closed_form, riemann_generic
from .errors import GaussEmbedError, InvalidPoint, PreconditionViolated
from .lie_algebra import (ROUND_SLACK, Family, FamilyPoint, canonical_frame_of,
                          structure_tensor_of)

__all__ = [
    "VerdictStatus",
    "Verdict",
    "ClassifierReport",
    "WindowResult",
    "ScanRow",
    "CSV_HEADER",
    "BOUNDARY_DISTANCE",
    "gauss_window",
    "window_boundaries",
    "boundary_distance",
    "pipeline",
    "classify",
    "grid_values",
    "region_scan",
    "rows_to_csv",
]

BOUNDARY_DISTANCE = 1e-6
CSV_HEADER = ("family", "alpha", "lambda", "u", "v", "w", "T", "S",
              "gauss_status", "derived_status", "verdict", "flag")


class VerdictStatus(str, enum.Enum):
    EMBEDDABLE_KNOWN = "EMBEDDABLE_KNOWN"
    GAUSS_OBSTRUCTED = "GAUSS_OBSTRUCTED"
    DERIVED_GAUSS_OBSTRUCTED = "DERIVED_GAUSS_OBSTRUCTED"


@dataclass(frozen=True)
class WindowResult:
    solvable: bool
    bounds: dict[str, float]
    rule: str


@dataclass
class Verdict:
    status: VerdictStatus
    witnesses: dict[str, object]
    pipeline_agrees: bool
    pipeline_status: VerdictStatus | None = None

    def to_dict(self) -> dict:
        out = {"status": self.status.value}
        out.update(self.witnesses)
        out["pipeline_status"] = None if self.pipeline_status is None else self.pipeline_status.value
        out["pipeline_agrees"] = self.pipeline_agrees
        return out


@dataclass
class ClassifierReport:
    point: FamilyPoint
    verdict: Verdict
    region_coordinates: dict[str, float]
    flags: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "family": self.point.family.slug,
            "point": self.point.params(),
            "region_coordinates": self.region_coordinates,
            "verdict": self.verdict.to_dict(),
            "flags": list(self.flags),
        }


# ---------------------------------------------------------------- windows

def _r3_alpha_lower(alpha: float) -> float:
    s = 1 + alpha * alpha
    return math.sqrt(math.sqrt(s * s + 12 * alpha * alpha) - s) / (math.sqrt(6) * (1 - alpha))


def _r3_alpha_upper(alpha: float) -> float:
    return math.sqrt(alpha) / (1 - alpha)


def _r3_prime_lower(alpha: float) -> float:
    a2 = alpha * alpha
    return math.sqrt((1 + 2 * a2 + 2 * math.sqrt(1 + a2 + a2 * a2)) / 3)


def _r3_prime_upper(alpha: float) -> float:
    return alpha + math.sqrt(1 + alpha * alpha)


def gauss_window(point: FamilyPoint) -> WindowResult:
    """Exact solvability of the Gauss equation from the published inequalities."""
    fam = point.family
    if fam is Family.R3:
        return WindowResult(True, {}, "flat")
    if fam is Family.H3:
        return WindowResult(False, {}, "never")
    if fam is Family.R3_SOLV:
        lo, hi = 1 / math.sqrt(3), 1.0
        return WindowResult(lo < point.lam < hi, {"lower": lo, "upper": hi}, "lower < lambda < upper")
    if fam is Family.R3_ALPHA:
        al, lam = point.alpha, point.lam
        if al == 1:
            return WindowResult(False, {}, "never")
        if al == 0:
            return WindowResult(lam == 0, {}, "lambda == 0")
        lo = _r3_alpha_lower(al)
        if al < 0:
            return WindowResult(abs(lam) < lo, {"upper": lo}, "|lambda| < upper")
        hi = _r3_alpha_upper(al)
        return WindowResult(lo < abs(lam) < hi, {"lower": lo, "upper": hi},
                            "lower < |lambda| < upper")
    if fam is Family.R3_PRIME_ALPHA:
        al, lam = point.alpha, point.lam
        if al == 0:
            return WindowResult(lam == 1, {}, "lambda == 1")
        lo, hi = _r3_prime_lower(al), _r3_prime_upper(al)
        return WindowResult(lo < lam < hi, {"lower": lo, "upper": hi}, "lower < lambda < upper")
    if fam is Family.SIMPLE:
        u, w = point.u, point.w
        if u == 0:
            return WindowResult(w > 1, {"w_lower": 1.0}, "w > 1")
        q = abs((1 - u * u) / u)
        t = 1 - u * u
        bounds = {"w_curve": q, "w_parabola": t}
        if abs(u) <= 1:
            ok = (t < w < q) or (w < -q)
            return WindowResult(ok, bounds, "parabola < w < curve or w < -curve")
        ok = (abs(w) < q) or (w < t)
        return WindowResult(ok, bounds, "|w| < curve or w < parabola")
    raise InvalidPoint(f"unhandled family {fam}")


def window_boundaries(point: FamilyPoint) -> list[float]:
    """Boundary values of the scanned coordinate (lambda, or w for SIMPLE) at this row."""
    fam = point.family
    if fam is Family.R3_SOLV:
        return [1 / math.sqrt(3), 1.0]
    if fam is Family.R3_ALPHA:
        al = point.alpha
        if al in (0, 1):
            return []
        lo = _r3_alpha_lower(al)
        if al < 0:
            return [-lo, lo]
        hi = _r3_alpha_upper(al)
        return sorted([-hi, -lo, lo, hi])
    if fam is Family.R3_PRIME_ALPHA:
        if point.alpha == 0:
            return []
        return [_r3_prime_lower(point.alpha), _r3_prime_upper(point.alpha)]
    if fam is Family.SIMPLE:
        u = point.u
        if u == 0:
            return [1.0]
        q = abs((1 - u * u) / u)
        return sorted({-q, q, 1 - u * u})
    return []


def boundary_distance(point: FamilyPoint) -> float:
    """Distance of the scanned coordinate to the nearest window boundary (inf if none)."""
    if point.family is Family.SIMPLE:
        u, w = point.u, point.w
        if u == 0:
            return abs(w - 1)
        t = 1 - u * u
        return min(abs(t + w * u) / abs(u), abs(t - w * u) / abs(u), abs(w - t))
    coord = point.lam
    bounds = window_boundaries(point)
    if not bounds:
        return math.inf
    return min(abs(coord - b) for b in bounds)


# ------------------------------------------------------------- verdicts

def _embeddable_known(point: FamilyPoint) -> bool:
    fam = point.family
    if fam is Family.R3:
        return True
    if fam is Family.R3_ALPHA:
        return point.alpha == 0 and point.lam == 0
    if fam is Family.R3_PRIME_ALPHA:
        return point.alpha == 0 and point.lam == 1
    if fam is Family.SIMPLE:
        return point.is_round_sphere()
    return False


def pipeline(point: FamilyPoint, eps: float = gauss.DEFAULT_EPS):
    """Numeric route: returns (GaussOutcome, DerivedObstructionReport or None, status)."""
    c = structure_tensor_of(canonical_frame_of(point))
    outcome = gauss.solve(riemann_generic(c), eps)
    if not outcome.solvable:
        return outcome, None, VerdictStatus.GAUSS_OBSTRUCTED
    report = derived.check(point, outcome, eps)
    status = (VerdictStatus.EMBEDDABLE_KNOWN if report.solvable
              else VerdictStatus.DERIVED_GAUSS_OBSTRUCTED)
    return outcome, report, status


def _closed_form_witnesses(point: FamilyPoint, frame, R, eps: float) -> dict[str, object]:
    out: dict[str, object] = {}
    if frame.t == 0:
        try:
            out["solvable_obstruction"] = derived.obstruction_solvable_closed_form(frame, R, eps)
        except PreconditionViolated:
            pass
    if point.family is Family.SIMPLE:
        from .curvature import nabla_r_closed_simple
        try:
            out["simple"] = derived.obstruction_simple_closed_form(
                point.u, point.v, R, nabla_r_closed_simple(point.u, point.v))
        except PreconditionViolated:
            pass
    return out


def region_coordinates(point: FamilyPoint) -> dict[str, float]:
    if point.family is Family.SIMPLE:
        return {"u": point.u, "w": point.w}
    if point.family in (Family.R3_ALPHA, Family.R3_PRIME_ALPHA):
        return {"alpha": point.alpha, "lambda": point.lam}
    if point.family is Family.R3_SOLV:
        return {"lambda": point.lam}
    return {}


def classify(point: FamilyPoint, eps: float = gauss.DEFAULT_EPS,
             cross_check: bool = True) -> ClassifierReport:
    if not isinstance(point, FamilyPoint):
        raise InvalidPoint(f"expected a FamilyPoint, got {type(point).__name__}")
    frame = canonical_frame_of(point)
    R = riemann_closed_form(frame)
    window = gauss_window(point)
    if _embeddable_known(point):
        status = VerdictStatus.EMBEDDABLE_KNOWN
    elif not window.solvable:
        status = VerdictStatus.GAUSS_OBSTRUCTED
    else:
        status = VerdictStatus.DERIVED_GAUSS_OBSTRUCTED

    T = gauss.thomas_T(R)
    S = (R.r1212 * R.r1313 - R.r1213 ** 2) / R.r2323 if R.r2323 != 0 else None
    witnesses: dict[str, object] = {
        "T": T,
        "S": S,
        "window": {"solvable": window.solvable, "rule": window.rule, **window.bounds},
        "closed_form": _closed_form_witnesses(point, frame, R, eps) if window.solvable else {},
    }
    flags: list[str] = []
    pipe_status = None
    agrees = True
    if cross_check:
        outcome, report, pipe_status = pipeline(point, eps)
        witnesses["gauss_status"] = outcome.status.value
        witnesses["derived_status"] = (None if report is None
                                       else ("SOLVABLE" if report.solvable else "UNSOLVABLE"))
        if report is not None:
            witnesses["derived_relative_residual"] = report.relative_residual
            flags.extend(report.flags)
        flags.extend(outcome.flags)
        agrees = pipe_status is status
        if not agrees:
            flags.append("PIPELINE_DISAGREES")
    if boundary_distance(point) <= BOUNDARY_DISTANCE:
        flags.append("BOUNDARY")
    return ClassifierReport(point, Verdict(status, witnesses, agrees, pipe_status),
                            region_coordinates(point), flags)


# ----------------------------------------------------------------- scans

@dataclass(frozen=True)
class ScanRow:
    family: str
    alpha: float | None
    lam: float | None
    u: float | None
    v: float | None
    w: float | None
    T: float | None
    S: float | None
    gauss_status: str
    derived_status: str
    verdict: str
    flag: str

    def as_tuple(self) -> tuple:
        return (self.family, self.alpha, self.lam, self.u, self.v, self.w, self.T, self.S,
                self.gauss_status, self.derived_status, self.verdict, self.flag)

    def to_dict(self) -> dict:
        return dict(zip(CSV_HEADER, self.as_tuple()))


def grid_values(lo: float, hi: float, step: float) -> list[float]:
    """Inclusive arithmetic grid, values rounded to 12 decimals so 0 lands on 0."""
    if not (math.isfinite(lo) and math.isfinite(hi) and math.isfinite(step)):
        raise ValueError("grid bounds must be finite")
    if step <= 0:
        raise ValueError(f"grid step must be positive, got {step!r}")
    if hi < lo:
        raise ValueError(f"empty grid: {lo!r} > {hi!r}")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + i * step, 12) + 0.0 for i in range(n)]


def _scan_one(args) -> ScanRow:
    family, alpha, lam, u, v, w, eps = args
    slug = family.slug
    if family is Family.SIMPLE and (abs(u - v) <= ROUND_SLACK or abs(u + v) <= ROUND_SLACK):
        return ScanRow(slug, None, None, u, v, w, None, None, "", "",
                       "EXCLUDED_NOT_SIMPLE", "EXCLUDED_NOT_SIMPLE")
    try:
        point = FamilyPoint(family, alpha=alpha, lam=lam, u=u, v=v)
    except InvalidPoint:
        return ScanRow(slug, alpha, lam, u, v, w, None, None, "", "", "INVALID", "OUT_OF_RANGE")
    try:
        report = classify(point, eps)
    except GaussEmbedError as exc:  # pragma: no cover - defensive
        return ScanRow(slug, alpha, lam, u, v, w, None, None, "", "", "ERROR",
                       type(exc).__name__)
    wit = report.verdict.witnesses
    g = "SOLVABLE" if wit["gauss_status"] != gauss.GaussStatus.NO_SOLUTION.value else "UNSOLVABLE"
    ds = wit["derived_status"] or ""
    return ScanRow(slug, point.alpha, point.lam, point.u, point.v, w,
                   wit["T"], wit["S"], g, ds, report.verdict.status.value,
                   ";".join(sorted(set(f for f in report.flags if " " not in f))))


def _scan_jobs(family: Family, ranges: dict[str, tuple[float, float, float]], eps: float):
    def grid(name):
        if name not in ranges:
            raise ValueError(f"family {family.slug} needs a {name} range")
        return grid_values(*ranges[name])

    if family in (Family.R3, Family.H3):
        return [(family, None, None, None, None, None, eps)]
    if family is Family.R3_SOLV:
        return [(family, None, lam, None, None, None, eps) for lam in grid("lambda")]
    if family in (Family.R3_ALPHA, Family.R3_PRIME_ALPHA):
        lams = grid("lambda")
        return [(family, al, lam, None, None, None, eps) for al in grid("alpha") for lam in lams]
    if family is Family.SIMPLE:
        # report the grid coordinate itself rather than 2(v-1) recomputed from v
        if "w" in ranges:
            second = [(round(w / 2.0 + 1.0, 12), w) for w in grid("w")]
        else:
            second = [(v, round(2.0 * (v - 1.0), 12) + 0.0) for v in grid("v")]
        return [(family, None, None, u, v, w, eps) for u in grid("u") for v, w in second]
    raise ValueError(f"unhandled family {family}")


def region_scan(family: Family, ranges: dict[str, tuple[float, float, float]],
                eps: float = gauss.DEFAULT_EPS, threads: int | None = None) -> list[ScanRow]:
    """Classify every grid point; rows come back in grid order regardless of workers."""
    jobs = _scan_jobs(family, ranges, eps)
    if not jobs:
        raise ValueError("empty grid")
    threads = threads or os.cpu_count() or 1
    if threads <= 1 or len(jobs) < 256:
        return [_scan_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_scan_one, jobs, chunksize=max(1, len(jobs) // (threads * 8))))


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(float(x) + 0.0)
    return str(x)


def rows_to_csv(rows: list[ScanRow]) -> str:
    lines = [",".join(CSV_HEADER)]
    lines.extend(",".join(_fmt(x) for x in r.as_tuple()) for r in rows)
    return "\n".join(lines) + "\n"
