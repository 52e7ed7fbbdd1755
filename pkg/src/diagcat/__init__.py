"""Exact-arithmetic engine for partition and cobordism diagram categories."""

from .scalar import FieldSpec, FieldElement, Poly, Rational
from .partition import PartitionDiagram, DiagramClass, compose, tensor
from .homspace import LinMorphism, hom_basis

__version__ = "0.1.0"

__all__ = [
    "FieldSpec",
    "FieldElement",
    "Poly",
    "Rational",
    "PartitionDiagram",
    "DiagramClass",
    "compose",
    "tensor",
    "LinMorphism",
    "hom_basis",
    "__version__",
]
