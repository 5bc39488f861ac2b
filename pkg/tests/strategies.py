"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from gauss_embed.lie_algebra import CanonicalFrame, Family, FamilyPoint

coef = st.floats(-2.0, 2.0, allow_nan=False, allow_infinity=False)


@st.composite
def solvable_frames(draw):
    return CanonicalFrame(draw(coef), draw(coef), draw(coef), draw(coef), 0.0)


@st.composite
def trace_free_frames(draw):
    a = draw(coef)
    return CanonicalFrame(a, draw(coef), draw(coef), -a, draw(coef))


admissible_frames = st.one_of(solvable_frames(), trace_free_frames())


@st.composite
def simple_points(draw, lo=-3.0, hi=3.0):
    u = draw(st.floats(lo, hi))
    v = draw(st.floats(lo, hi).filter(lambda v: abs(abs(v) - abs(u)) > 1e-3))
    return FamilyPoint(Family.SIMPLE, u=u, v=v)
