"""q-numbers: brackets, factorials and the coefficient sequences of the catalog."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, InvalidBaseError

__all__ = [
    "QContext",
    "bracket_box",
    "bracket_sym",
    "qfact_box",
    "qdoublefact_box",
    "coeff_cn_su2",
    "coeff_cm_su11",
]


@dataclass(frozen=True)
class QContext:
    """Deformation parameter plus tolerance policy.

    The derived scalars are properties so that they can never drift
    away from ``q``.
    """

    q: float
    tol_rel: float = 1e-10
    tol_abs: float = 1e-12

    def __post_init__(self):
        q = float(self.q)
        if not math.isfinite(q) or q <= 0.0:
            raise DomainError(f"q must be a positive finite real, got {self.q!r}")
        if q == 1.0:
            raise DomainError("q = 1 is excluded: the deformation degenerates")
        if not (self.tol_rel > 0 and self.tol_abs > 0):
            raise DomainError("tolerances must be positive")
        object.__setattr__(self, "q", q)

    @property
    def lam(self) -> float:
        return self.q - 1.0 / self.q

    @property
    def omega(self) -> float:
        return math.sqrt(self.q) - 1.0 / math.sqrt(self.q)

    @property
    def mu(self) -> float:
        return math.sqrt(self.q) + 1.0 / math.sqrt(self.q)

    def with_q(self, q: float) -> "QContext":
        return QContext(q, self.tol_rel, self.tol_abs)

    def sqrt_context(self) -> "QContext":
        """Context whose q**2 equals this q.

        The SU_q(1,1) section renames q**2 -> q for the big-A oscillator;
        the Fock catalog is written in the un-renamed convention, so
        that section builds its oscillator at sqrt(q).
        """
        return self.with_q(math.sqrt(self.q))

    def inverse(self) -> "QContext":
        return self.with_q(1.0 / self.q)


def bracket_box(x: int, p: float) -> float:
    """Box bracket (1 - p**x) / (1 - p)."""
    if p == 1:
        raise InvalidBaseError("bracket_box needs a base different from 1")
    return (1.0 - p**x) / (1.0 - p)


def bracket_sym(x: int, ctx: QContext) -> float:
    """Symmetric bracket (q**x - q**-x) / (q - 1/q)."""
    q = ctx.q
    return (q**x - q ** (-x)) / (q - 1.0 / q)


def qfact_box(n: int, p: float) -> float:
    if n < 0:
        raise DomainError(f"qfact_box needs n >= 0, got {n}")
    out = 1.0
    for k in range(1, n + 1):
        out *= bracket_box(k, p)
    return out


def qdoublefact_box(n: int, p: float) -> float:
    """[n]!! = [n][n-2]...; the n = 0 and n = -1 values are both 1."""
    if n < -1:
        raise DomainError(f"qdoublefact_box needs n >= -1, got {n}")
    out = 1.0
    for k in range(n, 0, -2):
        out *= bracket_box(k, p)
    return out


def coeff_cn_su2(n: int, ctx: QContext) -> float:
    """sqrt(1 - q**(2n)), the SU_q(2) Fock ladder coefficient."""
    if n < 0:
        raise DomainError(f"coeff_cn_su2 needs n >= 0, got {n}")
    rad = 1.0 - ctx.q ** (2 * n)
    if rad < 0:
        raise DomainError(f"negative radicand 1 - q^{2 * n} at q = {ctx.q}")
    return math.sqrt(rad)


def coeff_cm_su11(m: int, ctx: QContext) -> float:
    """sqrt(1 + q**(-2m-1)), the SU_q(1,1) shift coefficient on l2(Z)."""
    rad = 1.0 + ctx.q ** (-2 * m - 1)
    return math.sqrt(rad)
