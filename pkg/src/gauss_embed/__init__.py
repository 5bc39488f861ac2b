"""Curvature, Gauss-equation and derived-Gauss obstructions for three-dimensional
metric Lie algebras, with a classifier for codimension-1 local embeddability."""

from .classifier import VerdictStatus, classify, gauss_window, region_scan
from .curvature import CurvatureTensor, NablaR, riemann_closed_form, riemann_generic
from .derived import check as derived_check
from .errors import (GaussEmbedError, InvalidFrame, InvalidPoint, NotPositiveDefinite,
                     PreconditionViolated, TNotPositive, ZeroCurvature)
from .gauss import GaussStatus, solve
from .lie_algebra import CanonicalFrame, Family, FamilyPoint, MilnorFrame

__version__ = "0.1.0"

__all__ = [
    "CanonicalFrame", "CurvatureTensor", "Family", "FamilyPoint", "GaussEmbedError",
    "GaussStatus", "InvalidFrame", "InvalidPoint", "MilnorFrame", "NablaR",
    "NotPositiveDefinite", "PreconditionViolated", "TNotPositive", "VerdictStatus",
    "ZeroCurvature", "classify", "derived_check", "gauss_window", "region_scan",
    "riemann_closed_form", "riemann_generic", "solve",
]
