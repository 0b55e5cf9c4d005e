"""Numerical and symbolic verification of q-covariant oscillator systems."""
from .errors import (
    ConfigError,
    ConstructionFailedError,
    DomainError,
    GuardInfeasibleError,
    IncompletePresentationError,
    InternalInconsistencyError,
    InvalidBaseError,
    PresentationSyntaxError,
    QCovError,
    ShapeError,
    UnsupportedRegimeError,
)
from .galg import CheckReport, GradedOperator, GradedSpace, graded_kron, guarded_residual, identity
from .qnum import QContext, bracket_box, bracket_sym

__version__ = "0.1.0"

__all__ = [
    "CheckReport",
    "ConfigError",
    "ConstructionFailedError",
    "DomainError",
    "GradedOperator",
    "GradedSpace",
    "GuardInfeasibleError",
    "IncompletePresentationError",
    "InternalInconsistencyError",
    "InvalidBaseError",
    "PresentationSyntaxError",
    "QCovError",
    "QContext",
    "ShapeError",
    "UnsupportedRegimeError",
    "bracket_box",
    "bracket_sym",
    "graded_kron",
    "guarded_residual",
    "identity",
]
