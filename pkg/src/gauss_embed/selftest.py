"""Seeded invariant suites behind ``gauss-embed selftest``."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import derived, gauss
from .classifier import BOUNDARY_DISTANCE, boundary_distance, classify
from .curvature import (levi_civita, nabla_r_closed_simple, nabla_r_closed_solvable,
                        nabla_r_full, nabla_r_generic, riemann_closed_form, riemann_full,
                        riemann_generic)
from .lie_algebra import (CanonicalFrame, Family, FamilyPoint, canonical_frame_of, jacobi_check,
                          structure_tensor_of)

TOL = 1e-10


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    checked: int
    worst: float
    seconds: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark} {self.name}: {self.checked} cases, worst {self.worst:.3g}, {self.seconds:.2f}s"


def random_frame(rng: np.random.Generator, scale: float = 2.0) -> CanonicalFrame:
    """Random admissible canonical frame; half solvable (t = 0), half with d = -a."""
    a, b, c, d, t = rng.uniform(-scale, scale, 5)
    if rng.random() < 0.5:
        return CanonicalFrame(a, b, c, d, 0.0)
    return CanonicalFrame(a, b, c, -a, t)


def random_simple_point(rng: np.random.Generator) -> FamilyPoint:
    while True:
        u, v = rng.uniform(-3, 3, 2)
        if abs(abs(u) - abs(v)) > 1e-3:
            return FamilyPoint(Family.SIMPLE, u=u, v=v)


def _suite_closed_vs_generic(rng):
    worst = 0.0
    n = 0
    for _ in range(300):
        f = random_frame(rng)
        c = structure_tensor_of(f)
        diff = np.max(np.abs(np.array(riemann_generic(c).values())
                             - np.array(riemann_closed_form(f).values())))
        worst = max(worst, float(diff))
        n += 1
    return n, worst, worst <= TOL


def _suite_nabla_closed(rng):
    worst = 0.0
    n = 0
    for _ in range(100):
        a, b, c, d = rng.uniform(-2, 2, 4)
        f = CanonicalFrame(a, b, c, d, 0.0)
        dR = nabla_r_generic(structure_tensor_of(f))
        ref = nabla_r_closed_solvable(f)
        got = {"2:1223": dR(2, 1, 2, 2, 3), "2:3123": dR(2, 3, 1, 2, 3),
               "3:1223": dR(3, 1, 2, 2, 3), "3:3123": dR(3, 3, 1, 2, 3)}
        worst = max(worst, max(abs(got[k] - ref[k]) for k in ref))
        p = random_simple_point(rng)
        dR = nabla_r_generic(structure_tensor_of(canonical_frame_of(p)))
        ref = nabla_r_closed_simple(p.u, p.v)
        got = {"1:1213": dR(1, 1, 2, 1, 3), "2:1223": dR(2, 1, 2, 2, 3),
               "3:2313": dR(3, 2, 3, 1, 3)}
        worst = max(worst, max(abs(got[k] - ref[k]) for k in ref))
        n += 2
    return n, worst, worst <= TOL


def _suite_bianchi(rng):
    worst = 0.0
    n = 0
    for _ in range(100):
        c = structure_tensor_of(random_frame(rng))
        g = levi_civita(c)
        R = riemann_full(c, g)
        dR = nabla_r_full(c, g, R)
        first = R + np.transpose(R, (0, 2, 3, 1)) + np.transpose(R, (0, 3, 1, 2))
        # second identity: cyclic sum over (p, k, l) of dR[p, i, j, k, l]
        second = dR + np.transpose(dR, (3, 1, 2, 4, 0)) + np.transpose(dR, (4, 1, 2, 0, 3))
        pair = R - np.transpose(R, (2, 3, 0, 1))
        worst = max(worst, float(np.max(np.abs(first))), float(np.max(np.abs(second))),
                    float(np.max(np.abs(pair))))
        n += 1
    return n, worst, worst <= TOL


def _suite_jacobi(rng):
    worst = 0.0
    for _ in range(200):
        worst = max(worst, jacobi_check(structure_tensor_of(random_frame(rng))))
    return 200, worst, worst <= TOL


def _suite_scaling(rng):
    worst = 0.0
    for _ in range(100):
        f = random_frame(rng)
        s = rng.uniform(0.2, 3.0)
        R1 = np.array(riemann_closed_form(f.scaled(s)).values())
        R0 = np.array(riemann_closed_form(f).values())
        worst = max(worst, float(np.max(np.abs(R1 - s * s * R0))) / max(1.0, s * s))
    return 100, worst, worst <= TOL


def _suite_gauss_residual(rng):
    worst = 0.0
    n = 0
    for _ in range(300):
        R = riemann_closed_form(random_frame(rng))
        out = gauss.solve(R)
        if out.status is gauss.GaussStatus.UNIQUE_PAIR:
            n += 1
            res = gauss.gauss_residual(out.h, R) / max(1.0, R.sup_norm())
            worst = max(worst, res)
            if not out.T > 0:
                return n, math.inf, False
    return n, worst, worst <= 1e-9 and n > 0


def _suite_thomas_special(rng):
    worst = 0.0
    n = 0
    for _ in range(400):
        R = riemann_closed_form(random_frame(rng))
        if not gauss.special_precondition(R) or gauss.thomas_T(R) <= 1e-6:
            continue
        sp = gauss.solve_special(R)
        th = gauss.thomas_inverse(R)
        if sp.h is None:
            return n, math.inf, False
        worst = max(worst, float(np.max(np.abs(sp.h - th.h))) / max(1.0, R.sup_norm()))
        n += 1
    return n, worst, worst <= 1e-9 and n > 0


def _suite_simple_identity(rng):
    worst = 0.0
    for u in np.linspace(-3, 3, 61):
        for v in np.linspace(-3, 3, 61):
            lhs = derived.simple_l1(u, v) - derived.simple_l2(u, v)
            rhs = (u + 1) ** 2 * (u * u - 2 * v + 1)
            worst = max(worst, abs(lhs - rhs))
    return 61 * 61, worst, worst <= TOL


def _random_family_point(rng) -> FamilyPoint:
    fam = rng.integers(4)
    if fam == 0:
        return FamilyPoint(Family.R3_SOLV, lam=rng.uniform(0.05, 2.0))
    if fam == 1:
        return FamilyPoint(Family.R3_ALPHA, alpha=rng.uniform(-1, 1), lam=rng.uniform(-1.5, 1.5))
    if fam == 2:
        return FamilyPoint(Family.R3_PRIME_ALPHA, alpha=rng.uniform(0, 2), lam=rng.uniform(1, 4))
    return random_simple_point(rng)


def _suite_pipeline(rng):
    n = 0
    bad = 0
    for _ in range(300):
        p = _random_family_point(rng)
        if boundary_distance(p) <= BOUNDARY_DISTANCE:
            continue
        n += 1
        if not classify(p).verdict.pipeline_agrees:
            bad += 1
    return n, float(bad), bad == 0


SUITES = (
    ("closed_vs_generic_curvature", _suite_closed_vs_generic),
    ("closed_vs_generic_nabla_r", _suite_nabla_closed),
    ("bianchi_and_pair_symmetry", _suite_bianchi),
    ("jacobi_identity", _suite_jacobi),
    ("curvature_scaling", _suite_scaling),
    ("gauss_residual_unique_pair", _suite_gauss_residual),
    ("thomas_vs_special_solver", _suite_thomas_special),
    ("simple_l1_minus_l2", _suite_simple_identity),
    ("classifier_pipeline_agreement", _suite_pipeline),
)


def run_all(seed: int = 20240611) -> list[SuiteResult]:
    results = []
    for i, (name, fn) in enumerate(SUITES):
        rng = np.random.default_rng([seed, i])
        t0 = time.perf_counter()
        n, worst, ok = fn(rng)
        results.append(SuiteResult(name, bool(ok), n, float(worst), time.perf_counter() - t0))
    return results
