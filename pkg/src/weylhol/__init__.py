"""Exact verification of holonomy algebras of Weyl connections in Lorentzian signature."""

from .curvature import (
    berger_check,
    curvature_space,
    decompose_curvature,
    first_prolongation,
    reconstruct,
    weak_berger_check,
    weak_curvature_space,
)
from .errors import DomainError, StructureError, TruncationError, ValidationError
from .families import FamilySpec, co_rp, conformal_algebra, make_family, orthogonal_algebra
from .jets import JetScalar, jet_exp, jet_invert, jet_multiply, jet_partial
from .lie import CoElement, LieSubalgebra, WittFrame, lie_closure, matrix_span
from .linalg import Q, RationalMatrix, Subspace
from .presets import conformal_preset, preset_from_json, table_preset
from .suites import Check, VerificationReport, run_suite
from .weyl import build_walker, curvature, holonomy_generate, weyl_connection

__all__ = [
    "berger_check", "curvature_space", "decompose_curvature", "first_prolongation", "reconstruct",
    "weak_berger_check", "weak_curvature_space",
    "DomainError", "StructureError", "TruncationError", "ValidationError",
    "FamilySpec", "co_rp", "conformal_algebra", "make_family", "orthogonal_algebra",
    "JetScalar", "jet_exp", "jet_invert", "jet_multiply", "jet_partial",
    "CoElement", "LieSubalgebra", "WittFrame", "lie_closure", "matrix_span",
    "Q", "RationalMatrix", "Subspace",
    "conformal_preset", "preset_from_json", "table_preset",
    "Check", "VerificationReport", "run_suite",
    "build_walker", "curvature", "holonomy_generate", "weyl_connection",
]
