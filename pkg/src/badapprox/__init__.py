"""Badly approximable vectors in number fields: exact fields, forms, certified bounds, lattice flows."""

from __future__ import annotations

from .approx import Approximant, LiouvilleCertificate, QualityReport, dirichlet_count, liouville_certificate, \
    quality, scan
from .embed import EmbeddingSet, house
from .exactnum import CMStructure, FieldElem, NumberField, RatPoly, cm_structure, is_square, relative_norm
from .flow import FlowProfile, TrajectoryPoint, balance_check, mahler_min, profile
from .forms import AnisotropyVerdict, GroupElem, HermForm, QuadForm, Status, act, anisotropy, discriminant, evaluate
from .interval import ComplexInterval, RealInterval
from .vectors import CirclePoint, QuadSurd, TargetVector, corollary_vector, external_vector, herm_circle, quad_zeros

__version__ = "0.1.0"

__all__ = [
    "Approximant", "LiouvilleCertificate", "QualityReport", "dirichlet_count", "liouville_certificate",
    "quality", "scan", "EmbeddingSet", "house", "CMStructure", "FieldElem", "NumberField", "RatPoly",
    "cm_structure", "is_square", "relative_norm", "FlowProfile", "TrajectoryPoint", "balance_check",
    "mahler_min", "profile", "AnisotropyVerdict", "GroupElem", "HermForm", "QuadForm", "Status", "act",
    "anisotropy", "discriminant", "evaluate", "ComplexInterval", "RealInterval", "CirclePoint", "QuadSurd",
    "TargetVector", "corollary_vector", "external_vector", "herm_circle", "quad_zeros",
]
