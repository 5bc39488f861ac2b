"""Codimension-1 Gauss equation for three-dimensional curvature tensors.

Unknown: a symmetric 3x3 second fundamental form ``h``; equations
``h_ik h_jl - h_il h_jk = R_ijkl`` on the six independent slots.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .curvature import CurvatureTensor
from .errors import PreconditionViolated, TNotPositive, ZeroCurvature

__all__ = [
    "DEFAULT_EPS",
    "GaussStatus",
    "GaussOutcome",
    "gauss_residual",
    "gauss_residuals",
    "thomas_T",
    "thomas_inverse",
    "solve_special",
    "continuous_family_member",
    "symmetric_eigenvalues",
    "jacobowitz_test",
    "curvature_rank",
    "solve",
    "canonical_sign",
    "zero_threshold",
]

DEFAULT_EPS = 1e-9
RESIDUAL_TOL = 1e-9

# canonical sign order: h11, h12, h13, h22, h23, h33
_UPPER = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))


class GaussStatus(str, enum.Enum):
    NO_SOLUTION = "NO_SOLUTION"
    UNIQUE_PAIR = "UNIQUE_PAIR"
    CONTINUOUS_FAMILY = "CONTINUOUS_FAMILY"
    FLAT_TRIVIAL = "FLAT_TRIVIAL"

    @property
    def solvable(self) -> bool:
        return self is not GaussStatus.NO_SOLUTION


@dataclass(frozen=True)
class GaussOutcome:
    status: GaussStatus
    curvature: CurvatureTensor
    T: float
    S: float | None = None
    h: np.ndarray | None = None
    reason: str = ""
    free_parameters: tuple[str, ...] = ()
    flags: tuple[str, ...] = field(default=())

    @property
    def solvable(self) -> bool:
        return self.status.solvable

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "reason": self.reason or None,
            "T": self.T,
            "S": self.S,
            "h": None if self.h is None else self.h.tolist(),
            "free_parameters": list(self.free_parameters),
            "flags": list(self.flags),
        }


def zero_threshold(R: CurvatureTensor, eps: float = DEFAULT_EPS) -> float:
    return eps * max(1.0, R.sup_norm())


def _t_threshold(R: CurvatureTensor, eps: float) -> float:
    # T is cubic in the components; purely relative so small tensors keep their sign
    return eps * R.sup_norm() ** 3


def gauss_residuals(h: np.ndarray, R: CurvatureTensor) -> np.ndarray:
    """Left minus right side of the six Gauss equations."""
    h = np.asarray(h, dtype=float)
    lhs = np.array([
        h[0, 0] * h[1, 1] - h[0, 1] ** 2,
        h[0, 0] * h[2, 2] - h[0, 2] ** 2,
        h[1, 1] * h[2, 2] - h[1, 2] ** 2,
        h[0, 0] * h[1, 2] - h[0, 2] * h[0, 1],
        h[0, 1] * h[1, 2] - h[0, 2] * h[1, 1],
        h[0, 1] * h[2, 2] - h[0, 2] * h[1, 2],
    ])
    return lhs - np.array(R.values())


def gauss_residual(h: np.ndarray, R: CurvatureTensor) -> float:
    return float(np.max(np.abs(gauss_residuals(h, R))))


def thomas_T(R: CurvatureTensor) -> float:
    (a, b, c), (_, e, f), (_, _, g) = R.matrix()
    # symmetric 3x3 determinant, expanded to keep it exact for diagonal input
    return float(a * (e * g - f * f) - b * (b * g - f * c) + c * (b * f - e * c))


def canonical_sign(h: np.ndarray, tol: float = 0.0) -> np.ndarray:
    """Flip ``h`` so the first entry of (h11, h12, h13, h22, h23, h33) above tol is positive."""
    h = np.asarray(h, dtype=float)
    for idx in _UPPER:
        if abs(h[idx]) > tol:
            return h if h[idx] > 0 else -h
    return h


def _sym(h11, h12, h13, h22, h23, h33) -> np.ndarray:
    return np.array([[h11, h12, h13], [h12, h22, h23], [h13, h23, h33]], dtype=float)


def thomas_inverse(R: CurvatureTensor) -> GaussOutcome:
    T = thomas_T(R)
    if not T > 0:
        raise TNotPositive(f"T = {T!r} is not positive")
    r = R
    inv = 1.0 / math.sqrt(T)

    def det2(p, q, s, t):
        return p * t - q * s

    # R_1312 = R_1213, R_2312 = R_1223, R_2313 = R_1323 by pair symmetry
    h = inv * _sym(
        det2(r.r1212, r.r1213, r.r1213, r.r1313),
        det2(r.r1212, r.r1223, r.r1213, r.r1323),
        det2(r.r1213, r.r1223, r.r1313, r.r1323),
        det2(r.r1212, r.r1223, r.r1223, r.r2323),
        det2(r.r1213, r.r1223, r.r1323, r.r2323),
        det2(r.r1313, r.r1323, r.r1323, r.r2323),
    )
    return GaussOutcome(GaussStatus.UNIQUE_PAIR, R, T, _s_witness(R), canonical_sign(h))


def _s_witness(R: CurvatureTensor) -> float | None:
    if R.r2323 == 0:
        return None
    return (R.r1212 * R.r1313 - R.r1213 ** 2) / R.r2323


def special_precondition(R: CurvatureTensor, eps: float = DEFAULT_EPS) -> bool:
    z = zero_threshold(R, eps)
    return abs(R.r1223) <= z and abs(R.r1323) <= z and abs(R.r1212) > z


def continuous_family_member(R: CurvatureTensor, h11: float = 1.0, h12: float = 0.0) -> np.ndarray:
    """Member of the solution family when ``R_2323 = 0`` and ``R_1212 R_1313 = R_1213^2``."""
    if h11 == 0:
        raise PreconditionViolated("free parameter h11 must be nonzero")
    k = R.r1213 / R.r1212
    h22 = (R.r1212 + h12 * h12) / h11
    return _sym(h11, h12, k * h12, h22, k * h22, k * k * h22)


def solve_special(R: CurvatureTensor, eps: float = DEFAULT_EPS) -> GaussOutcome:
    """Solver for tensors with ``R_1223 = R_1323 = 0`` and ``R_1212 != 0``."""
    if not special_precondition(R, eps):
        raise PreconditionViolated("requires R1223 = R1323 = 0 and R1212 != 0")
    z = zero_threshold(R, eps)
    T = thomas_T(R)
    numerator = R.r1212 * R.r1313 - R.r1213 ** 2
    if abs(R.r2323) > z:
        S = numerator / R.r2323
        if not S > z:
            return GaussOutcome(GaussStatus.NO_SOLUTION, R, T, S, reason="S_NONPOSITIVE")
        h11 = math.sqrt(S)
        h = _sym(h11, 0.0, 0.0, R.r1212 / h11, R.r1213 / h11, R.r1313 / h11)
        return GaussOutcome(GaussStatus.UNIQUE_PAIR, R, T, S, canonical_sign(h))
    if abs(numerator) <= eps * max(1.0, R.sup_norm() ** 2):
        return GaussOutcome(GaussStatus.CONTINUOUS_FAMILY, R, T, None,
                            continuous_family_member(R), free_parameters=("h11", "h12"))
    return GaussOutcome(GaussStatus.NO_SOLUTION, R, T, None, reason="DEGENERATE_INCONSISTENT")


def symmetric_eigenvalues(M: np.ndarray) -> tuple[float, float, float]:
    """Eigenvalues of a real symmetric 3x3 matrix, descending, from the characteristic cubic."""
    A = np.asarray(M, dtype=float)
    p1 = A[0, 1] ** 2 + A[0, 2] ** 2 + A[1, 2] ** 2
    if p1 == 0:
        d = sorted(np.diag(A).tolist(), reverse=True)
        return d[0], d[1], d[2]
    q = np.trace(A) / 3.0
    p2 = (A[0, 0] - q) ** 2 + (A[1, 1] - q) ** 2 + (A[2, 2] - q) ** 2 + 2 * p1
    p = math.sqrt(p2 / 6.0)
    Bm = (A - q * np.eye(3)) / p
    r = float(np.linalg.det(Bm)) / 2.0
    # rounding can push r just outside [-1, 1]
    if r <= -1:
        phi = math.pi / 3
    elif r >= 1:
        phi = 0.0
    else:
        phi = math.acos(r) / 3
    e1 = q + 2 * p * math.cos(phi)
    e3 = q + 2 * p * math.cos(phi + 2 * math.pi / 3)
    e2 = 3 * q - e1 - e3
    return e1, e2, e3


def curvature_rank(R: CurvatureTensor, eps: float = DEFAULT_EPS) -> int:
    """Number of nonzero eigenvalues of the curvature matrix.

    Read off the cofactors and the determinant rather than the cubic roots:
    the trigonometric formula is only sqrt(eps)-accurate at repeated roots.
    """
    n = R.sup_norm()
    if n <= zero_threshold(R, eps):
        return 0
    if abs(thomas_T(R)) > _t_threshold(R, eps):
        return 3
    M = R.matrix()
    cof = max(abs(M[i, k] * M[j, l] - M[i, l] * M[j, k])
              for i, j in ((0, 1), (0, 2), (1, 2)) for k, l in ((0, 1), (0, 2), (1, 2)))
    return 1 if cof <= eps * n * n else 2


def jacobowitz_test(R: CurvatureTensor, eps: float = DEFAULT_EPS) -> bool:
    """Solvability of a non-flat tensor: T > 0 or exactly one nonzero eigenvalue."""
    if R.sup_norm() <= zero_threshold(R, eps):
        raise ZeroCurvature("curvature vanishes; flat case is handled upstream")
    if thomas_T(R) > _t_threshold(R, eps):
        return True
    return curvature_rank(R, eps) == 1


def solve(R: CurvatureTensor, eps: float = DEFAULT_EPS) -> GaussOutcome:
    """Dispatch to the appropriate solver and report a :class:`GaussOutcome`."""
    T = thomas_T(R)
    if R.sup_norm() <= eps:
        return GaussOutcome(GaussStatus.FLAT_TRIVIAL, R, T, None, np.zeros((3, 3)),
                            reason="FLAT")
    if special_precondition(R, eps):
        return solve_special(R, eps)
    if T > _t_threshold(R, eps):
        return thomas_inverse(R)
    if T < -_t_threshold(R, eps):
        return GaussOutcome(GaussStatus.NO_SOLUTION, R, T, _s_witness(R), reason="T_NEGATIVE")
    # T ~ 0 outside the special structure: only the rank criterion decides
    if curvature_rank(R, eps) == 1:
        # for a rank-one matrix the single nonzero eigenvalue is the trace
        return _rank_one_solution(R, T, float(np.trace(R.matrix())), eps)
    return GaussOutcome(GaussStatus.NO_SOLUTION, R, T, _s_witness(R),
                        reason="RANK_CONDITION_FAILED", flags=("UNVERIFIED",))


def _rank_one_solution(R: CurvatureTensor, T: float, ev: float, eps: float) -> GaussOutcome:
    # curvature matrix = ev * n n^T; the 2x2 minors of h must reproduce it, which
    # a rank-2 h does: pick h whose cofactor structure matches, then verify
    M = R.matrix()
    w, vecs = np.linalg.eigh(M)
    n = vecs[:, int(np.argmax(np.abs(w)))]
    # pair index (12,13,23) <-> complementary basis index (3,2,1) with signs (+,-,+)
    m = np.array([n[2], -n[1], n[0]])
    # h = s*(a a^T) + t*(b b^T) with a, b spanning m^perp gives minors ~ s t (a x b)(a x b)^T
    a = np.cross(m, [1.0, 0.0, 0.0])
    if np.linalg.norm(a) < 0.5:
        a = np.cross(m, [0.0, 1.0, 0.0])
    a /= np.linalg.norm(a)
    b = np.cross(m, a)
    h = np.outer(a, a) + ev * np.outer(b, b)
    h = canonical_sign(h)
    flags = ()
    if gauss_residual(h, R) > max(RESIDUAL_TOL, eps * max(1.0, R.sup_norm())):
        flags = ("UNVERIFIED",)
    return GaussOutcome(GaussStatus.CONTINUOUS_FAMILY, R, T, _s_witness(R), h,
                        reason="RANK_ONE", free_parameters=("scale",), flags=flags)
