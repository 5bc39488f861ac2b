import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from gauss_embed.classifier import (BOUNDARY_DISTANCE, CSV_HEADER, VerdictStatus,
                                    boundary_distance, classify, gauss_window, grid_values,
                                    region_scan, rows_to_csv, window_boundaries)
from gauss_embed.curvature import riemann_closed_form
from gauss_embed.errors import InvalidPoint
from gauss_embed.lie_algebra import CanonicalFrame, Family, FamilyPoint, canonical_frame_of
from strategies import simple_points

E = VerdictStatus.EMBEDDABLE_KNOWN
G = VerdictStatus.GAUSS_OBSTRUCTED
D = VerdictStatus.DERIVED_GAUSS_OBSTRUCTED


def S_of(point):
    """S in exact rational arithmetic, so its sign is reliable near cancellation."""
    F = Fraction
    if point.family is Family.R3_SOLV:
        frame = CanonicalFrame(F(1), F(point.lam), F(0), F(1), F(0))
    elif point.family is Family.R3_ALPHA:
        frame = CanonicalFrame(F(1), F(point.lam) * (F(point.alpha) - 1), F(0), F(point.alpha), F(0))
    else:
        lam, al = F(point.lam), F(point.alpha)
        frame = CanonicalFrame(al, -lam / 2, 1 / (2 * lam), al, F(0))
    R = riemann_closed_form(frame)
    return (R.r1212 * R.r1313 - R.r1213 ** 2) / R.r2323


def away_from_boundary(p, rel=1e-9):
    scale = max([abs(b) for b in window_boundaries(p)] + [1e-300])
    return boundary_distance(p) > rel * scale


def test_window_examples():
    w = gauss_window(FamilyPoint("r3", lam=0.8))
    assert w.solvable
    assert w.bounds["lower"] == pytest.approx(1 / math.sqrt(3))
    assert w.bounds["upper"] == 1.0
    assert gauss_window(FamilyPoint("r3-alpha", alpha=0, lam=0)).solvable
    assert not gauss_window(FamilyPoint("r3-alpha", alpha=0, lam=0.1)).solvable
    w = gauss_window(FamilyPoint("simple", u=1.5, v=1))
    assert w.solvable
    assert w.bounds["w_curve"] == pytest.approx(1.25 / 1.5)
    assert gauss_window(FamilyPoint("r3-alpha", alpha=-1, lam=0)).bounds["upper"] == \
        pytest.approx(math.sqrt(2) / (2 * math.sqrt(6)))


@pytest.mark.parametrize("point, status", [
    (FamilyPoint("abelian"), E),
    (FamilyPoint("h3"), G),
    (FamilyPoint("r3-alpha", alpha=1), G),
    (FamilyPoint("r3-alpha", alpha=0, lam=0), E),
    (FamilyPoint("r3-prime-alpha", alpha=0, lam=1), E),
    (FamilyPoint("simple", u=0, v=2), E),
    (FamilyPoint("simple", u=0, v=2 + 1e-13), E),
    (FamilyPoint("r3-prime-alpha", alpha=1, lam=2), D),
    (FamilyPoint("r3", lam=0.8), D),
    (FamilyPoint("r3", lam=0.5), G),
    (FamilyPoint("r3-prime-alpha", alpha=0, lam=2), G),
    (FamilyPoint("simple", u=0, v=3), D),
    (FamilyPoint("simple", u=0, v=2 + 1e-6), D),
])
def test_classify_examples(point, status):
    rep = classify(point)
    assert rep.verdict.status is status
    assert rep.verdict.pipeline_agrees


def test_h3_witness():
    rep = classify(FamilyPoint("h3"))
    assert rep.verdict.witnesses["S"] == -0.75
    assert rep.region_coordinates == {}


def test_region_coordinates():
    assert classify(FamilyPoint("simple", u=0.5, v=3)).region_coordinates == {"u": 0.5, "w": 4.0}
    assert classify(FamilyPoint("r3-alpha", alpha=0.5, lam=1)).region_coordinates == \
        {"alpha": 0.5, "lambda": 1}


def test_classify_rejects_non_points():
    with pytest.raises(InvalidPoint):
        classify("h3")


@given(st.floats(0.02, 2.0))
def test_r3_window_is_S_positive(lam):
    p = FamilyPoint("r3", lam=lam)
    assume(away_from_boundary(p))
    assert gauss_window(p).solvable == (S_of(p) > 0)


@given(st.floats(-1, 1), st.floats(-2, 2))
def test_r3_alpha_window_is_S_positive(alpha, lam):
    assume(alpha not in (0.0, 1.0) and lam != 0)
    p = FamilyPoint("r3-alpha", alpha=alpha, lam=lam)
    assume(away_from_boundary(p))
    assert gauss_window(p).solvable == (S_of(p) > 0)


@given(st.floats(0.01, 3), st.floats(1, 6))
def test_r3_prime_window_is_S_positive(alpha, lam):
    p = FamilyPoint("r3-prime-alpha", alpha=alpha, lam=lam)
    assume(away_from_boundary(p))
    assert gauss_window(p).solvable == (S_of(p) > 0)


@given(simple_points(-4, 4))
def test_simple_window_is_curvature_product_positive(p):
    assume(boundary_distance(p) > 1e-9)
    R = riemann_closed_form(canonical_frame_of(p))
    assert gauss_window(p).solvable == (R.r1212 * R.r1313 * R.r2323 > 0)


@given(st.floats(0.01, 0.99))
def test_S_sign_change_across_r3_alpha_window(alpha):
    lo, hi = window_boundaries(FamilyPoint("r3-alpha", alpha=alpha, lam=0.5))[2:]
    for lam in np.linspace(lo, hi, 9)[1:-1]:
        assert S_of(FamilyPoint("r3-alpha", alpha=alpha, lam=lam)) > 0
    for lam in (lo * 0.5, lo * 0.999, hi * 1.001, hi * 2):
        assert S_of(FamilyPoint("r3-alpha", alpha=alpha, lam=lam)) <= 0


def test_grid_values():
    assert grid_values(0.1, 1.2, 0.1) == [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2]
    g = grid_values(-1, 1, 0.05)
    assert len(g) == 41 and g[20] == 0.0 and math.copysign(1, g[20]) == 1
    for bad in [(1, 0, 0.1), (0, 1, 0), (0, 1, -0.1), (0, float("inf"), 0.1)]:
        with pytest.raises(ValueError):
            grid_values(*bad)


def test_r3_scan_window_points():
    rows = region_scan(Family.R3_SOLV, {"lambda": (0.1, 1.2, 0.1)}, threads=1)
    solvable = [r.lam for r in rows if r.gauss_status == "SOLVABLE"]
    assert solvable == [0.6, 0.7, 0.8, 0.9]
    assert [r.lam for r in rows if r.flag == "BOUNDARY"] == [1.0]


def test_simple_scan_excludes_lines():
    rows = region_scan(Family.SIMPLE, {"u": (-1, 1, 0.5), "w": (-4, 0, 1)}, threads=1)
    excluded = {(r.u, r.w) for r in rows if r.verdict == "EXCLUDED_NOT_SIMPLE"}
    # w = 2u - 2 and w = -2u - 2
    assert excluded == {(u, w) for u in (-1, -0.5, 0, 0.5, 1) for w in (-4, -3, -2, -1, 0)
                        if abs(w - (2 * u - 2)) < 1e-12 or abs(w - (-2 * u - 2)) < 1e-12}
    assert (0.0, -2.0) in excluded


def test_scan_requires_ranges_and_marks_out_of_range():
    with pytest.raises(ValueError):
        region_scan(Family.R3_ALPHA, {"alpha": (0, 1, 0.5)})
    rows = region_scan(Family.R3_PRIME_ALPHA, {"alpha": (0, 0, 1), "lambda": (0.5, 1.0, 0.5)})
    assert [r.flag for r in rows] == ["OUT_OF_RANGE", ""]


def test_scan_row_csv():
    rows = region_scan(Family.R3_SOLV, {"lambda": (0.5, 0.6, 0.1)})
    text = rows_to_csv(rows)
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert lines[1].startswith("r3,,0.5,,,,")
    assert len(lines) == 3
    assert "np." not in text
    assert all(type(r.T) is float for r in region_scan(Family.SIMPLE, {"u": (0, 1, 1), "w": (3, 3, 1)}))


def _family_grid(family, n=50):
    if family is Family.R3_SOLV:
        return [FamilyPoint(family, lam=x) for x in np.linspace(0.02, 2.0, n * n)]
    if family is Family.R3_ALPHA:
        return [FamilyPoint(family, alpha=a, lam=l)
                for a in np.linspace(-1, 1, n) for l in np.linspace(-1.5, 1.5, n)]
    if family is Family.R3_PRIME_ALPHA:
        return [FamilyPoint(family, alpha=a, lam=l)
                for a in np.linspace(0, 2, n) for l in np.linspace(1, 4, n)]
    pts = []
    for u in np.linspace(-3, 3, n):
        for w in np.linspace(-6, 6, n):
            v = w / 2 + 1
            if abs(abs(u) - abs(v)) > 1e-9:
                pts.append(FamilyPoint(family, u=u, v=v))
    return pts


@pytest.mark.parametrize("family", [Family.R3_SOLV, Family.R3_ALPHA, Family.R3_PRIME_ALPHA,
                                    Family.SIMPLE])
def test_pipeline_agreement_on_grid(family):
    checked = 0
    for p in _family_grid(family):
        if boundary_distance(p) <= BOUNDARY_DISTANCE:
            continue
        rep = classify(p)
        assert rep.verdict.pipeline_agrees, (p, rep.verdict)
        checked += 1
    assert checked > 2000


def test_simple_plane_symmetry():
    rows = region_scan(Family.SIMPLE, {"u": (-3, 3, 0.1), "w": (-6, 6, 0.1)}, threads=1)
    table = {(r.u, r.w): r.gauss_status for r in rows if r.verdict != "EXCLUDED_NOT_SIMPLE"
             and "BOUNDARY" not in r.flag}
    for (u, w), status in table.items():
        mirror = table.get((round(-u, 12) + 0.0, w))
        if mirror is not None:
            assert mirror == status, (u, w)


def test_parallel_scan_matches_serial():
    rg = {"u": (-1, 1, 0.1), "w": (-2, 2, 0.1)}
    assert region_scan(Family.SIMPLE, rg, threads=1) == region_scan(Family.SIMPLE, rg, threads=2)
