"""Independent reference computations used only by the test suite."""

from __future__ import annotations

import itertools

import numpy as np
import sympy as sp
from scipy.optimize import least_squares


def exact_curvature(brackets: dict[tuple[int, int], tuple]) -> dict[str, sp.Expr]:
    """Exact R_ijkl in an orthonormal frame, from brackets given as rational vectors.

    Works vector by vector from the definitions instead of with index
    contractions, so it shares no code path with the package.
    """
    def bracket(x, y):
        out = sp.zeros(3, 1)
        for i, j in itertools.product(range(3), repeat=2):
            if (i, j) in brackets:
                out += x[i] * y[j] * sp.Matrix(brackets[(i, j)])
            elif (j, i) in brackets:
                out -= x[i] * y[j] * sp.Matrix(brackets[(j, i)])
        return out

    basis = [sp.Matrix([1 if k == i else 0 for k in range(3)]) for i in range(3)]

    def nabla(x, y):
        # Koszul: 2<nabla_x y, z> = <[x,y],z> - <[y,z],x> + <[z,x],y>
        out = sp.zeros(3, 1)
        for z in basis:
            val = (bracket(x, y).dot(z) - bracket(y, z).dot(x) + bracket(z, x).dot(y)) / 2
            out += val * z
        return out

    def riem(x, y, z):
        # left-invariant fields have constant coefficients, so nabla is bilinear
        return nabla(x, nabla(y, z)) - nabla(y, nabla(x, z)) - nabla(bracket(x, y), z)

    names = ("1212", "1313", "2323", "1213", "1223", "1323")
    out = {}
    for name in names:
        i, j, k, l = (int(ch) - 1 for ch in name)
        out[name] = sp.simplify(-riem(basis[i], basis[j], basis[k]).dot(basis[l]))
    return out


def canonical_brackets(a, b, c, d, t):
    return {(0, 1): (0, a, 2 * b), (0, 2): (0, 2 * c, d), (1, 2): (2 * t, 0, 0)}


def milnor_sectional(l1: float, l2: float, l3: float) -> tuple[float, float, float]:
    """(K12, K13, K23) of a Milnor frame from the mu_i = (l1+l2+l3)/2 - l_i formulas."""
    half = (l1 + l2 + l3) / 2
    m1, m2, m3 = half - l1, half - l2, half - l3
    # Ricci principal values 2 mu_j mu_k, and K_ij + K_ik = Ric_i
    r1, r2, r3 = 2 * m2 * m3, 2 * m1 * m3, 2 * m1 * m2
    k12 = (r1 + r2 - r3) / 2
    k13 = (r1 + r3 - r2) / 2
    k23 = (r2 + r3 - r1) / 2
    return k12, k13, k23


def _gauss_lhs(h6: np.ndarray) -> np.ndarray:
    h11, h12, h13, h22, h23, h33 = h6.T
    return np.stack([
        h11 * h22 - h12 ** 2,
        h11 * h33 - h13 ** 2,
        h22 * h33 - h23 ** 2,
        h11 * h23 - h13 * h12,
        h12 * h23 - h13 * h22,
        h12 * h33 - h13 * h23,
    ], axis=-1)


def brute_force_gauss(R_values, samples: int = 100_000, seed: int = 0,
                      refine: int = 30, box: float = 4.0) -> float:
    """Smallest relative Gauss residual found by random search plus local refinement.

    Random symmetric h are drawn in a box scaled by sqrt(|R|); the best few
    are polished with bounded least squares. A value near 0 means solvable.
    """
    R = np.asarray(R_values, dtype=float)
    scale = max(1.0, float(np.max(np.abs(R)))) ** 0.5
    rng = np.random.default_rng(seed)
    H = rng.uniform(-box * scale, box * scale, size=(samples, 6))
    res = np.max(np.abs(_gauss_lhs(H) - R), axis=1)
    best = H[np.argsort(res)[:refine]]
    found = float(np.min(res))
    for h0 in best:
        sol = least_squares(lambda h: _gauss_lhs(h[None, :])[0] - R, h0,
                            bounds=(-2 * box * scale, 2 * box * scale),
                            xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)
        found = min(found, float(np.max(np.abs(_gauss_lhs(sol.x[None, :])[0] - R))))
    return found / max(1.0, float(np.max(np.abs(R))))
