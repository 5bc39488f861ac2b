"""Levi-Civita connection, curvature and its covariant derivative.

Two routes are provided and kept independent: a generic pipeline that works
from any orthonormal-frame structure tensor (Koszul formula, then the
definitions of ``R`` and ``nabla R``), and closed-form expressions valid for
canonical frames. Each route is the other's oracle in the test suite.

Sign convention: ``R(e_i,e_j,e_k,e_l) = -<R(e_i,e_j)e_k, e_l>`` with
``R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]``, so ``R_1212`` is the sectional
curvature of the ``e1, e2`` plane.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidFrame, PreconditionViolated
from .lie_algebra import CanonicalFrame

__all__ = [
    "SLOTS",
    "SLOT_NAMES",
    "CurvatureTensor",
    "NablaR",
    "levi_civita",
    "riemann_full",
    "riemann_generic",
    "riemann_closed_form",
    "nabla_r_full",
    "nabla_r_generic",
    "nabla_r_closed_solvable",
    "nabla_r_closed_simple",
]

# independent (i<j, k<l) slots, one-based names, lexicographic pair order
SLOT_NAMES = ("1212", "1313", "2323", "1213", "1223", "1323")
SLOTS = tuple(tuple(int(ch) - 1 for ch in name) for name in SLOT_NAMES)

_PAIR_INDEX = {(0, 1): 0, (0, 2): 1, (1, 2): 2}


def _pair(i: int, j: int) -> tuple[int, float]:
    if i == j:
        return -1, 0.0
    if i < j:
        return _PAIR_INDEX[(i, j)], 1.0
    return _PAIR_INDEX[(j, i)], -1.0


def _one_based(idx) -> tuple[int, ...]:
    out = tuple(int(x) - 1 for x in idx)
    if any(x < 0 or x > 2 for x in out):
        raise IndexError(f"indices must lie in 1..3, got {idx}")
    return out


@dataclass(frozen=True)
class CurvatureTensor:
    r1212: float = 0.0
    r1313: float = 0.0
    r2323: float = 0.0
    r1213: float = 0.0
    r1223: float = 0.0
    r1323: float = 0.0

    @classmethod
    def from_values(cls, values) -> "CurvatureTensor":
        vals = [float(x) for x in values]
        if len(vals) != 6:
            raise ValueError(f"expected 6 curvature components, got {len(vals)}")
        return cls(*vals)

    @classmethod
    def from_full(cls, full: np.ndarray) -> "CurvatureTensor":
        return cls(*(float(full[s]) for s in SLOTS))

    def values(self) -> tuple[float, ...]:
        return (self.r1212, self.r1313, self.r2323, self.r1213, self.r1223, self.r1323)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(SLOT_NAMES, self.values()))

    def matrix(self) -> np.ndarray:
        """Symmetric curvature matrix indexed by the pairs (12, 13, 23)."""
        return np.array([
            [self.r1212, self.r1213, self.r1223],
            [self.r1213, self.r1313, self.r1323],
            [self.r1223, self.r1323, self.r2323],
        ])

    def component(self, i: int, j: int, k: int, l: int) -> float:
        """Zero-based accessor for any index combination."""
        p, sp = _pair(i, j)
        q, sq = _pair(k, l)
        if p < 0 or q < 0:
            return 0.0
        return float(sp * sq * self.matrix()[p, q])

    def __call__(self, i: int, j: int, k: int, l: int) -> float:
        """One-based accessor, ``R(1, 2, 1, 2) == r1212``."""
        return self.component(*_one_based((i, j, k, l)))

    def full(self) -> np.ndarray:
        M = self.matrix()
        out = np.zeros((3, 3, 3, 3))
        for (i, j), p in _PAIR_INDEX.items():
            for (k, l), q in _PAIR_INDEX.items():
                val = M[p, q]
                out[i, j, k, l] = val
                out[j, i, k, l] = -val
                out[i, j, l, k] = -val
                out[j, i, l, k] = val
        return out

    def sup_norm(self) -> float:
        return max(abs(x) for x in self.values())

    def scaled(self, s: float) -> "CurvatureTensor":
        return CurvatureTensor(*(s * x for x in self.values()))


@dataclass(frozen=True)
class NablaR:
    """``dr[p, slot]`` for p in 0..2 and the six slots of :data:`SLOT_NAMES`."""

    dr: np.ndarray

    @classmethod
    def from_full(cls, full: np.ndarray) -> "NablaR":
        dr = np.array([[full[(p,) + s] for s in SLOTS] for p in range(3)])
        dr.setflags(write=False)
        return cls(dr)

    def component(self, p: int, i: int, j: int, k: int, l: int) -> float:
        a, sa = _pair(i, j)
        b, sb = _pair(k, l)
        if a < 0 or b < 0:
            return 0.0
        row = self.dr[p]
        M = np.array([[row[0], row[3], row[4]],
                      [row[3], row[1], row[5]],
                      [row[4], row[5], row[2]]])
        return float(sa * sb * M[a, b])

    def __call__(self, p: int, i: int, j: int, k: int, l: int) -> float:
        """One-based accessor, ``dR(2, 1, 2, 2, 3)`` is nabla_2 R_1223."""
        return self.component(*_one_based((p, i, j, k, l)))

    def full(self) -> np.ndarray:
        out = np.zeros((3, 3, 3, 3, 3))
        for p in range(3):
            out[p] = CurvatureTensor(*self.dr[p]).full()
        return out

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.dr)))

    def as_dict(self) -> dict[str, dict[str, float]]:
        return {str(p + 1): dict(zip(SLOT_NAMES, (float(x) for x in self.dr[p])))
                for p in range(3)}


def levi_civita(c: np.ndarray) -> np.ndarray:
    """``gamma[i, j, k] = <nabla_{e_i} e_j, e_k>`` from the Koszul formula.

    ``2<nabla_i e_j, e_k> = <[e_k,e_i],e_j> + <e_i,[e_k,e_j]> + <[e_i,e_j],e_k>``
    in an orthonormal frame.
    """
    c = np.asarray(c, dtype=float)
    # c[j,k,i] = <[e_k,e_i],e_j>, c[i,k,j] = <e_i,[e_k,e_j]>, c[k,i,j] = <[e_i,e_j],e_k>
    return 0.5 * (np.transpose(c, (2, 0, 1)) + np.transpose(c, (0, 2, 1))
                  + np.transpose(c, (1, 2, 0)))


def riemann_full(c: np.ndarray, gamma: np.ndarray | None = None) -> np.ndarray:
    """All 81 components of the (0,4) curvature tensor."""
    c = np.asarray(c, dtype=float)
    if gamma is None:
        gamma = levi_civita(c)
    # (R(e_i,e_j)e_k)_n = G[j,k,m]G[i,m,n] - G[i,k,m]G[j,m,n] - c[m,i,j]G[m,k,n]
    first = np.einsum("jkm,imn->ijkn", gamma, gamma)
    op = first - np.transpose(first, (1, 0, 2, 3)) - np.einsum("mij,mkn->ijkn", c, gamma)
    return -op


def riemann_generic(c: np.ndarray) -> CurvatureTensor:
    return CurvatureTensor.from_full(riemann_full(c))


def nabla_r_full(c: np.ndarray, gamma: np.ndarray | None = None,
                 R: np.ndarray | None = None) -> np.ndarray:
    """All 243 components of ``nabla R``; index order ``[p, i, j, k, l]``."""
    c = np.asarray(c, dtype=float)
    if gamma is None:
        gamma = levi_civita(c)
    if R is None:
        R = riemann_full(c, gamma)
    return -(np.einsum("pim,mjkl->pijkl", gamma, R)
             + np.einsum("pjm,imkl->pijkl", gamma, R)
             + np.einsum("pkm,ijml->pijkl", gamma, R)
             + np.einsum("plm,ijkm->pijkl", gamma, R))


def nabla_r_generic(c: np.ndarray) -> NablaR:
    return NablaR.from_full(nabla_r_full(c))


def riemann_closed_form(frame: CanonicalFrame) -> CurvatureTensor:
    a, b, c, d, t = frame.as_tuple()
    if (a + d) * t != 0:
        raise InvalidFrame("(a+d)t != 0")
    return CurvatureTensor(
        r1212=-(a * a + 3 * b * b - c * c + 2 * b * c - t * t - 2 * (b + c) * t),
        r1313=-(-b * b + 3 * c * c + d * d + 2 * b * c - t * t + 2 * (b + c) * t),
        r2323=b * b + c * c - a * d + 2 * b * c - 3 * t * t + 2 * (b - c) * t,
        r1213=-2 * (a * c + b * d + a * t),
        r1223=0.0,
        r1323=0.0,
    )


def nabla_r_closed_solvable(frame: CanonicalFrame) -> dict[str, float]:
    """The four named ``nabla R`` components of a solvable canonical frame.

    Keys are ``"p:ijkl"`` with one-based indices.
    """
    if frame.t != 0:
        raise PreconditionViolated("solvable closed form requires t = 0")
    a, b, c, d, _ = frame.as_tuple()
    R = riemann_closed_form(frame)
    s = b + c
    return {
        "2:1223": s * (R.r1212 - R.r2323) - a * R.r1213,
        "2:3123": a * (R.r1313 - R.r2323) - s * R.r1213,
        "3:1223": d * (R.r1212 - R.r2323) - s * R.r1213,
        "3:3123": s * (R.r1313 - R.r2323) - d * R.r1213,
    }


def nabla_r_closed_simple(u: float, v: float) -> dict[str, float]:
    """Named ``nabla R`` components of the simple frame with parameters (u, v)."""
    if u == v or u == -v:
        raise PreconditionViolated("u = +-v does not give a simple Lie algebra")
    return {
        "1:1213": 0.5 * u * (v - 1) ** 2,
        "2:1223": 0.25 * (u - 1) ** 2 * (u - v + 2),
        "3:2313": -0.25 * (u + 1) ** 2 * (u + v - 2),
    }
