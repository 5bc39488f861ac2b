"""Three-dimensional metric Lie algebras.

A metric Lie algebra is held in one of three interchangeable forms:

* a dense structure tensor ``c[k, i, j]`` (coefficient of ``e_k`` in
  ``[e_i, e_j]``, zero-based indices) together with a Gram matrix,
* a :class:`CanonicalFrame` ``(a, b, c, d, t)`` describing the brackets
  ``[e1,e2] = a e2 + 2b e3``, ``[e1,e3] = 2c e2 + d e3``, ``[e2,e3] = 2t e1``
  in an orthonormal basis,
* a :class:`FamilyPoint`, one of the normal forms of the classification.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidFrame, InvalidPoint, NotPositiveDefinite

__all__ = [
    "Family",
    "FamilyPoint",
    "CanonicalFrame",
    "MilnorFrame",
    "canonical_frame_of",
    "structure_tensor_of",
    "structure_from_brackets",
    "canonical_frame_from_structure",
    "orthonormalize",
    "jacobi_check",
    "is_antisymmetric",
    "read_structure",
    "read_gram",
    "ROUND_SLACK",
]

# exact-equality slack for recognising the round so(3) point
ROUND_SLACK = 1e-12


class Family(enum.Enum):
    R3 = "abelian"
    H3 = "h3"
    R3_SOLV = "r3"
    R3_ALPHA = "r3-alpha"
    R3_PRIME_ALPHA = "r3-prime-alpha"
    SIMPLE = "simple"

    @property
    def slug(self) -> str:
        return self.value

    @classmethod
    def from_slug(cls, slug: str) -> "Family":
        key = slug.strip().lower().replace("_", "-")
        aliases = {"r3-abelian": "abelian", "heisenberg": "h3", "r3-solv": "r3",
                   "r3-prime": "r3-prime-alpha"}
        key = aliases.get(key, key)
        for fam in cls:
            if fam.value == key:
                return fam
        raise InvalidPoint(f"unknown family {slug!r}")


@dataclass(frozen=True)
class CanonicalFrame:
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0
    t: float = 0.0

    def __post_init__(self):
        if (self.a + self.d) * self.t != 0:
            raise InvalidFrame(
                f"(a+d)t = {(self.a + self.d) * self.t!r} != 0; brackets violate Jacobi")

    @property
    def solvable(self) -> bool:
        return self.t == 0

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.a, self.b, self.c, self.d, self.t)

    def scaled(self, s: float) -> "CanonicalFrame":
        """Frame obtained by multiplying every structure constant by ``s``."""
        return CanonicalFrame(s * self.a, s * self.b, s * self.c, s * self.d, s * self.t)


@dataclass(frozen=True)
class MilnorFrame:
    """Unimodular brackets ``[e1,e2]=l3 e3, [e2,e3]=l1 e1, [e3,e1]=l2 e2``."""

    lambda1: float
    lambda2: float
    lambda3: float

    def structure(self) -> np.ndarray:
        return structure_from_brackets({
            (0, 1): (0.0, 0.0, self.lambda3),
            (1, 2): (self.lambda1, 0.0, 0.0),
            (2, 0): (0.0, self.lambda2, 0.0),
        })

    def normalized(self) -> tuple["MilnorFrame", float]:
        """Rescale so that ``lambda1 = 1``; returns the frame and the metric factor k."""
        l1 = self.lambda1
        if l1 == 0:
            raise InvalidPoint("lambda1 = 0: not a simple Milnor frame")
        # frame x_i = e_i / |l1| is orthonormal for k = l1^2
        s = 1.0 / abs(l1)
        sign = 1.0 if l1 > 0 else -1.0
        # a negative l1 is absorbed by flipping all basis vectors
        return (MilnorFrame(1.0, sign * self.lambda2 * s, sign * self.lambda3 * s),
                l1 * l1)


@dataclass(frozen=True)
class FamilyPoint:
    family: Family
    alpha: float | None = None
    lam: float | None = None
    u: float | None = None
    v: float | None = None

    def __post_init__(self):
        if isinstance(self.family, str):
            object.__setattr__(self, "family", Family.from_slug(self.family))
        validate_point(self)

    @property
    def w(self) -> float | None:
        if self.family is not Family.SIMPLE:
            return None
        return 2.0 * (self.v - 1.0)

    @classmethod
    def simple_from_uw(cls, u: float, w: float) -> "FamilyPoint":
        return cls(Family.SIMPLE, u=u, v=w / 2.0 + 1.0)

    def is_round_sphere(self) -> bool:
        return (self.family is Family.SIMPLE and abs(self.u) <= ROUND_SLACK
                and abs(self.v - 2.0) <= ROUND_SLACK)

    def params(self) -> dict[str, float]:
        out = {}
        for name in ("alpha", "lam", "u", "v"):
            val = getattr(self, name)
            if val is not None:
                out["lambda" if name == "lam" else name] = val
        return out

    def milnor(self) -> MilnorFrame:
        if self.family is not Family.SIMPLE:
            raise InvalidPoint("Milnor frame only defined for the simple family here")
        return MilnorFrame(1.0, (self.u + self.v) / 2.0, (self.v - self.u) / 2.0)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise InvalidPoint(msg)


def _finite(x, name: str) -> None:
    _require(x is not None, f"missing parameter {name}")
    _require(math.isfinite(x), f"{name} must be finite")


def validate_point(p: FamilyPoint) -> None:
    fam = p.family
    if fam in (Family.R3, Family.H3):
        return
    if fam is Family.R3_SOLV:
        _finite(p.lam, "lambda")
        _require(p.lam > 0, f"r3 requires lambda > 0, got {p.lam!r}")
    elif fam is Family.R3_ALPHA:
        _finite(p.alpha, "alpha")
        _require(-1 <= p.alpha <= 1, f"r3-alpha requires -1 <= alpha <= 1, got {p.alpha!r}")
        if p.alpha == 1:
            # r3,1 carries a unique metric up to scaling; lambda drops out
            if p.lam is None:
                object.__setattr__(p, "lam", 0.0)
        _finite(p.lam, "lambda")
    elif fam is Family.R3_PRIME_ALPHA:
        _finite(p.alpha, "alpha")
        _finite(p.lam, "lambda")
        _require(p.alpha >= 0, f"r3-prime-alpha requires alpha >= 0, got {p.alpha!r}")
        _require(p.lam >= 1, f"r3-prime-alpha requires lambda >= 1, got {p.lam!r}")
    elif fam is Family.SIMPLE:
        _finite(p.u, "u")
        _finite(p.v, "v")
        _require(p.u != p.v and p.u != -p.v,
                 f"u = +-v ({p.u!r}, {p.v!r}) does not give a simple Lie algebra")


def canonical_frame_of(point: FamilyPoint) -> CanonicalFrame:
    fam = point.family
    if fam is Family.R3:
        return CanonicalFrame()
    if fam is Family.H3:
        return CanonicalFrame(0.0, 0.5, 0.0, 0.0, 0.0)
    if fam is Family.R3_SOLV:
        return CanonicalFrame(1.0, point.lam, 0.0, 1.0, 0.0)
    if fam is Family.R3_ALPHA:
        al = point.alpha
        return CanonicalFrame(1.0, point.lam * (al - 1.0), 0.0, al, 0.0)
    if fam is Family.R3_PRIME_ALPHA:
        al, lam = point.alpha, point.lam
        return CanonicalFrame(al, -lam / 2.0, 1.0 / (2.0 * lam), al, 0.0)
    if fam is Family.SIMPLE:
        u, v = point.u, point.v
        return CanonicalFrame(0.0, (v - u) / 4.0, -(u + v) / 4.0, 0.0, 0.5)
    raise InvalidPoint(f"unhandled family {fam}")


def structure_from_brackets(brackets: dict[tuple[int, int], tuple[float, float, float]]) -> np.ndarray:
    """Dense antisymmetric structure tensor from ``{(i, j): [e_i, e_j]}`` (zero-based)."""
    c = np.zeros((3, 3, 3))
    for (i, j), vec in brackets.items():
        for k, val in enumerate(vec):
            c[k, i, j] += val
            c[k, j, i] -= val
    return c


def structure_tensor_of(frame: CanonicalFrame) -> np.ndarray:
    a, b, cc, d, t = frame.as_tuple()
    return structure_from_brackets({
        (0, 1): (0.0, a, 2.0 * b),
        (0, 2): (0.0, 2.0 * cc, d),
        (1, 2): (2.0 * t, 0.0, 0.0),
    })


def canonical_frame_from_structure(c: np.ndarray, tol: float = 1e-12) -> CanonicalFrame | None:
    """Read ``(a, b, c, d, t)`` back off an orthonormal-frame structure tensor.

    Returns None when the tensor is not of canonical shape.
    """
    c = np.asarray(c, dtype=float)
    a, b2 = c[1, 0, 1], c[2, 0, 1]
    c2, d = c[1, 0, 2], c[2, 0, 2]
    t2 = c[0, 1, 2]
    try:
        frame = CanonicalFrame(a, b2 / 2.0, c2 / 2.0, d, t2 / 2.0)
    except InvalidFrame:
        return None
    if np.max(np.abs(structure_tensor_of(frame) - c)) > tol:
        return None
    return frame


def is_antisymmetric(c: np.ndarray, tol: float = 0.0) -> bool:
    c = np.asarray(c, dtype=float)
    return bool(np.max(np.abs(c + np.swapaxes(c, 1, 2))) <= tol)


def jacobi_check(c: np.ndarray) -> float:
    """Largest absolute component of the Jacobiator over all basis triples."""
    c = np.asarray(c, dtype=float)
    # [[e_i,e_j],e_l]_m = sum_k c[k,i,j] c[m,k,l]
    nested = np.einsum("kij,mkl->ijlm", c, c)
    jac = nested + np.transpose(nested, (1, 2, 0, 3)) + np.transpose(nested, (2, 0, 1, 3))
    return float(np.max(np.abs(jac)))


def orthonormalize(c: np.ndarray, gram: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Gram-Schmidt in index order; returns the new structure tensor and B.

    The columns of ``B`` are the orthonormal basis vectors expressed in the
    old basis, so ``B.T @ gram @ B = I``.
    """
    c = np.asarray(c, dtype=float)
    g = np.asarray(gram, dtype=float)
    if g.shape != (3, 3):
        raise NotPositiveDefinite(f"Gram matrix must be 3x3, got shape {g.shape}")
    if np.max(np.abs(g - g.T)) > 1e-12 * max(1.0, float(np.max(np.abs(g)))):
        raise NotPositiveDefinite("Gram matrix is not symmetric")
    basis = np.eye(3)
    B = np.zeros((3, 3))
    for j in range(3):
        vec = basis[:, j].copy()
        for i in range(j):
            vec -= (B[:, i] @ g @ basis[:, j]) * B[:, i]
        pivot = vec @ g @ vec
        if not pivot > 0:
            raise NotPositiveDefinite(f"non-positive pivot {pivot!r} at basis vector {j + 1}")
        B[:, j] = vec / math.sqrt(pivot)
    if np.array_equal(B, np.eye(3)):
        return c.copy(), B
    Binv = np.linalg.inv(B)
    new = np.einsum("mk,kab,ai,bj->mij", Binv, c, B, B)
    return new, B


def _read_reals(path: str | Path, count: int) -> np.ndarray:
    text = Path(path).read_text()
    try:
        vals = [float(tok) for tok in text.split()]
    except ValueError as exc:
        raise ValueError(f"{path}: non-numeric token ({exc})") from None
    if len(vals) != count:
        raise ValueError(f"{path}: expected {count} reals, found {len(vals)}")
    return np.array(vals)


def read_structure(path: str | Path) -> np.ndarray:
    """27 whitespace-separated reals, row-major ``c[1][1][1] ... c[3][3][3]``."""
    return _read_reals(path, 27).reshape(3, 3, 3)


def read_gram(path: str | Path) -> np.ndarray:
    return _read_reals(path, 9).reshape(3, 3)
