"""Derived Gauss equation: a linear system in the symmetric 3-tensor ``h_ijk``.

For a fixed second fundamental form ``h_ij`` the equations

    nabla_p R_ijkl = h_pik h_jl + h_ik h_pjl - h_pil h_jk - h_il h_pjk

are linear in the ten independent components of ``h_ijk``. The system is
assembled on the 18 rows ``(p, slot)`` and tested for consistency by
least squares.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .curvature import (SLOT_NAMES, SLOTS, CurvatureTensor, NablaR, levi_civita,
                        nabla_r_full, riemann_full)
from .errors import PreconditionViolated
from .gauss import (GaussOutcome, GaussStatus, continuous_family_member,
                    special_precondition, zero_threshold)
from .lie_algebra import (CanonicalFrame, Family, FamilyPoint, canonical_frame_from_structure,
                          canonical_frame_of, structure_tensor_of)

__all__ = [
    "H3_INDEX",
    "ThirdFundamentalTensor",
    "DerivedSystem",
    "DerivedObstructionReport",
    "build_system",
    "solve_system",
    "obstruction_solvable_closed_form",
    "obstruction_simple_closed_form",
    "simple_l1",
    "simple_l2",
    "mixed_component_gap",
    "check",
    "SYSTEM_REL_TOL",
    "SWEEP_H11",
    "SWEEP_H12",
]

SYSTEM_REL_TOL = 1e-8

# independent components of a symmetric 3-tensor, i <= j <= k (zero-based)
H3_INDEX = tuple(itertools.combinations_with_replacement(range(3), 3))
_COLUMN = {}
for _col, _idx in enumerate(H3_INDEX):
    for _perm in set(itertools.permutations(_idx)):
        _COLUMN[_perm] = _col

SWEEP_H11 = (0.25, 0.5, 1.0, 2.0, 4.0, -0.25, -0.5, -1.0, -2.0, -4.0)
SWEEP_H12 = (0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0)


@dataclass(frozen=True)
class ThirdFundamentalTensor:
    """Fully symmetric ``h_ijk`` stored on the ten index triples ``i <= j <= k``."""

    values: np.ndarray

    def __call__(self, i: int, j: int, k: int) -> float:
        """One-based accessor; any permutation of the indices gives the same value."""
        return float(self.values[_COLUMN[(i - 1, j - 1, k - 1)]])

    def full(self) -> np.ndarray:
        out = np.zeros((3, 3, 3))
        for idx, col in _COLUMN.items():
            out[idx] = self.values[col]
        return out

    def as_dict(self) -> dict[str, float]:
        return {"".join(str(i + 1) for i in idx): float(self.values[c])
                for c, idx in enumerate(H3_INDEX)}


@dataclass(frozen=True)
class DerivedSystem:
    matrix: np.ndarray
    rhs: np.ndarray
    labels: tuple[tuple[int, str], ...]


@dataclass
class DerivedObstructionReport:
    solvable: bool
    residual: float
    relative_residual: float
    h3: ThirdFundamentalTensor | None = None
    closed_form: dict[str, object] = field(default_factory=dict)
    flags: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "solvable": self.solvable,
            "residual": self.residual,
            "relative_residual": self.relative_residual,
            "h3": None if self.h3 is None else self.h3.as_dict(),
            "closed_form": self.closed_form,
            "flags": list(self.flags),
        }


def build_system(h: np.ndarray, dR: NablaR) -> DerivedSystem:
    h = np.asarray(h, dtype=float)
    if np.max(np.abs(h - h.T)) > 0:
        raise PreconditionViolated("second fundamental form must be symmetric")
    A = np.zeros((18, len(H3_INDEX)))
    b = np.zeros(18)
    labels = []
    row = 0
    for p in range(3):
        for name, (i, j, k, l) in zip(SLOT_NAMES, SLOTS):
            A[row, _COLUMN[(p, i, k)]] += h[j, l]
            A[row, _COLUMN[(p, j, l)]] += h[i, k]
            A[row, _COLUMN[(p, i, l)]] -= h[j, k]
            A[row, _COLUMN[(p, j, k)]] -= h[i, l]
            b[row] = dR.component(p, i, j, k, l)
            labels.append((p + 1, name))
            row += 1
    return DerivedSystem(A, b, tuple(labels))


def solve_system(system: DerivedSystem, rel_tol: float = SYSTEM_REL_TOL) -> DerivedObstructionReport:
    """Least-squares consistency test (SVD, minimum-norm solution)."""
    A, b = system.matrix, system.rhs
    x, *_ = np.linalg.lstsq(A, b, rcond=None)
    resid = float(np.max(np.abs(A @ x - b))) if b.size else 0.0
    scale = max(1.0, float(np.max(np.abs(b))))
    solvable = resid <= rel_tol * scale
    return DerivedObstructionReport(
        solvable=solvable,
        residual=resid,
        relative_residual=resid / scale,
        h3=ThirdFundamentalTensor(x) if solvable else None,
    )


def obstruction_solvable_closed_form(frame: CanonicalFrame, R: CurvatureTensor,
                                     eps: float = 1e-9) -> float:
    """``(b+c)(R1313 - R1212) + (a-d) R1213``; nonzero rules out a derived solution."""
    if frame.t != 0:
        raise PreconditionViolated("requires a solvable canonical frame (t = 0)")
    z = zero_threshold(R, eps)
    if not (abs(R.r1212) > z and abs(R.r2323) > z
            and abs(R.r1223) <= z and abs(R.r1323) <= z):
        raise PreconditionViolated("requires R1212, R2323 != 0 and R1223 = R1323 = 0")
    S = (R.r1212 * R.r1313 - R.r1213 ** 2) / R.r2323
    if not S > 0:
        raise PreconditionViolated("Gauss equation has no solution")
    a, b, c, d, _ = frame.as_tuple()
    return (b + c) * (R.r1313 - R.r1212) + (a - d) * R.r1213


def simple_l1(u: float, v: float) -> float:
    return u ** 4 + (v - 1) * u ** 3 + (v - 3) * u ** 2 + (4 * v * v - 9 * v + 5) * u - v + 2


def simple_l2(u: float, v: float) -> float:
    return (v - 3) * u ** 3 + (3 * v - 5) * u ** 2 + (4 * v * v - 5 * v + 3) * u + v + 1


def obstruction_simple_closed_form(u: float, v: float, R: CurvatureTensor,
                                   dR_named: dict[str, float] | tuple[float, float, float],
                                   tol: float = 1e-9) -> dict[str, object]:
    """Triple ``(R2323 d1R1213, -R1313 d2R1223, R1212 d3R2313)`` plus ``l1``, ``l2``.

    A derived solution requires the three entries to coincide.
    """
    if u == v or u == -v:
        raise PreconditionViolated("u = +-v is not simple")
    prod = R.r1212 * R.r1313 * R.r2323
    if not prod > 0:
        raise PreconditionViolated("Gauss equation has no solution")
    if isinstance(dR_named, dict):
        d1, d2, d3 = dR_named["1:1213"], dR_named["2:1223"], dR_named["3:2313"]
    else:
        d1, d2, d3 = dR_named
    triple = (float(R.r2323 * d1), float(-R.r1313 * d2), float(R.r1212 * d3))
    scale = max(1.0, max(abs(x) for x in triple))
    equal = bool(abs(triple[0] - triple[1]) <= tol * scale
             and abs(triple[1] - triple[2]) <= tol * scale)
    out: dict[str, object] = {"triple": list(triple), "triple_equal": equal}
    if u != 0:
        out["l1"] = simple_l1(u, v)
        out["l2"] = simple_l2(u, v)
    return out


def mixed_component_gap(h: np.ndarray, dR: NablaR) -> float:
    """``h_213 - h_312`` solved from the rows (2,1223), (2,3123), (3,1223), (3,3123).

    Valid when ``h12 = h13 = 0`` and ``h22 h33 - h23^2 != 0``.
    """
    h = np.asarray(h, dtype=float)
    det = h[1, 1] * h[2, 2] - h[1, 2] ** 2
    d2_1223 = dR(2, 1, 2, 2, 3)
    d2_3123 = dR(2, 3, 1, 2, 3)
    d3_1223 = dR(3, 1, 2, 2, 3)
    d3_3123 = dR(3, 3, 1, 2, 3)
    h213 = -(h[2, 2] * d2_1223 + h[1, 2] * d2_3123) / det
    h312 = -(h[1, 1] * d3_3123 + h[1, 2] * d3_1223) / det
    return h213 - h312


def _source_data(source):
    """Resolve a family point, canonical frame or structure tensor."""
    point = source if isinstance(source, FamilyPoint) else None
    if point is not None:
        frame = canonical_frame_of(point)
        c = structure_tensor_of(frame)
    elif isinstance(source, CanonicalFrame):
        frame = source
        c = structure_tensor_of(frame)
    else:
        c = np.asarray(source, dtype=float)
        frame = canonical_frame_from_structure(c)
    return point, frame, c


def _simple_params(frame: CanonicalFrame) -> tuple[float, float] | None:
    if frame.a == 0 and frame.d == 0 and frame.t == 0.5:
        u = -2.0 * (frame.b + frame.c)
        v = 2.0 * (frame.b - frame.c)
        if u != v and u != -v:
            return u, v
    return None


def _closed_forms(frame: CanonicalFrame | None, R: CurvatureTensor, dR: NablaR,
                  eps: float) -> dict[str, object]:
    out: dict[str, object] = {}
    if frame is None:
        return out
    if frame.t == 0:
        try:
            out["solvable_obstruction"] = obstruction_solvable_closed_form(frame, R, eps)
        except PreconditionViolated:
            pass
    uv = _simple_params(frame)
    if uv is not None:
        named = (dR(1, 1, 2, 1, 3), dR(2, 1, 2, 2, 3), dR(3, 2, 3, 1, 3))
        try:
            out["simple"] = obstruction_simple_closed_form(uv[0], uv[1], R, named)
        except PreconditionViolated:
            pass
    return out


def _r3_alpha_lambda0(point: FamilyPoint | None, frame: CanonicalFrame | None) -> float | None:
    """Return alpha when the input is r3,alpha with lambda = 0 and alpha in [-1, 0)."""
    if point is not None:
        if point.family is Family.R3_ALPHA and point.lam == 0 and -1 <= point.alpha < 0:
            return point.alpha
        return None
    if frame is not None and frame.t == 0 and frame.a == 1 and frame.b == 0 \
            and frame.c == 0 and -1 <= frame.d < 0:
        return frame.d
    return None


def _exact_r3_alpha_argument(alpha: float, h: np.ndarray, dR: NablaR, eps: float) -> dict:
    # nabla_1 R_1212 = nabla_1 R_1313 = nabla_1 R_2323 = 0 force h111 = h122 = 0,
    # which is incompatible with nabla_2 R_1323 = alpha(alpha - 1) != 0
    h11, h22, h33 = h[0, 0], h[1, 1], h[2, 2]
    det = np.array([[h22, h11, 0.0], [h33, 0.0, h11], [0.0, h33, h22]])
    forced = abs(np.linalg.det(det)) > eps
    d2_1323 = dR(2, 1, 3, 2, 3)
    return {
        "alpha": alpha,
        "d2R1323": float(d2_1323),
        "expected_d2R1323": alpha * (alpha - 1.0),
        "h111_h122_forced_zero": bool(forced),
        "contradiction": bool(forced and abs(d2_1323) > eps),
    }


def check(source, outcome: GaussOutcome, eps: float = 1e-9,
          rel_tol: float = SYSTEM_REL_TOL) -> DerivedObstructionReport:
    """Derived-Gauss verdict for a Gauss solution of the metric Lie algebra ``source``."""
    if not outcome.solvable:
        raise PreconditionViolated("Gauss equation has no solution; nothing to derive")
    point, frame, c = _source_data(source)
    gamma = levi_civita(c)
    Rfull = riemann_full(c, gamma)
    dR = NablaR.from_full(nabla_r_full(c, gamma, Rfull))
    R = CurvatureTensor.from_full(Rfull)

    if outcome.status is GaussStatus.FLAT_TRIVIAL:
        report = solve_system(build_system(np.zeros((3, 3)), dR), rel_tol)
        report.closed_form = _closed_forms(frame, R, dR, eps)
        return report

    if outcome.status is GaussStatus.UNIQUE_PAIR:
        report = solve_system(build_system(outcome.h, dR), rel_tol)
        report.closed_form = _closed_forms(frame, R, dR, eps)
        alpha = _r3_alpha_lambda0(point, frame)
        if alpha is not None:
            exact = _exact_r3_alpha_argument(alpha, outcome.h, dR, eps)
            report.closed_form["r3_alpha_lambda0"] = exact
            report.flags.append("EXACT_SUBCASE")
            if exact["contradiction"]:
                report.solvable = False
                report.h3 = None
        return report

    # continuous family: basepoint first, then a finite sweep of the free parameters
    base = solve_system(build_system(outcome.h, dR), rel_tol)
    base.closed_form = _closed_forms(frame, R, dR, eps)
    if base.solvable or outcome.free_parameters != ("h11", "h12"):
        if not base.solvable:
            base.flags.append("EXHAUSTIVENESS_LIMITED")
        return base
    Rg = outcome.curvature
    best = base
    for h11, h12 in itertools.product(SWEEP_H11, SWEEP_H12):
        trial = solve_system(build_system(continuous_family_member(Rg, h11, h12), dR), rel_tol)
        if trial.solvable:
            trial.closed_form = base.closed_form
            trial.flags.append(f"SWEEP_POINT h11={h11!r} h12={h12!r}")
            return trial
        if trial.relative_residual < best.relative_residual:
            best = trial
    best.closed_form = base.closed_form
    best.flags.append("EXHAUSTIVENESS_LIMITED")
    return best
