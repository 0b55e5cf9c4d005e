"""Graded dense linear algebra.

Spaces carry per-basis-vector parity and level metadata.  Levels come in
two flavours: ``level`` is the total excitation number, while ``modes``
keeps one column per truncated oscillator leg so that truncation guards
can be applied leg by leg (a guard on the total level alone does not
protect a two-mode space where one mode sits at its cutoff).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _accel
from .errors import DomainError, GuardInfeasibleError, ShapeError

__all__ = [
    "GradedSpace",
    "GradedOperator",
    "CheckReport",
    "graded_kron",
    "guarded_residual",
    "operator_residual",
    "auto_guard",
    "tridiag_eigenvalues",
    "dagger",
    "norm",
    "commutator",
    "anticommutator",
    "supercommutator",
    "identity",
    "operator_to_json",
    "operator_from_json",
]


@dataclass(frozen=True, eq=False)
class GradedSpace:
    parity: np.ndarray
    level: np.ndarray
    modes: np.ndarray = None
    mode_max: tuple = ()
    mode_open_below: tuple = ()

    def __post_init__(self):
        parity = np.asarray(self.parity, dtype=np.int64)
        level = np.asarray(self.level, dtype=np.int64)
        if parity.ndim != 1 or level.shape != parity.shape:
            raise ShapeError("parity and level must be 1-d arrays of equal length")
        if parity.size == 0:
            raise ShapeError("a graded space needs at least one basis vector")
        if np.any((parity != 0) & (parity != 1)):
            raise DomainError("parities must be 0 or 1")
        modes = self.modes
        if modes is None:
            modes = np.zeros((parity.size, 0), dtype=np.int64)
        modes = np.asarray(modes, dtype=np.int64).reshape(parity.size, -1)
        if modes.shape[1] != len(self.mode_max) or len(self.mode_max) != len(self.mode_open_below):
            raise ShapeError("mode metadata is inconsistent")
        for arr in (parity, level, modes):
            arr.setflags(write=False)
        object.__setattr__(self, "parity", parity)
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "mode_max", tuple(int(m) for m in self.mode_max))
        object.__setattr__(self, "mode_open_below", tuple(bool(b) for b in self.mode_open_below))

    @property
    def dim(self) -> int:
        return int(self.parity.size)

    @classmethod
    def fock(cls, dim: int) -> "GradedSpace":
        """Truncated bosonic Fock space |0>..|dim-1>."""
        n = np.arange(dim)
        return cls(np.zeros(dim, int), n, n[:, None], (dim - 1,), (False,))

    @classmethod
    def window(cls, half_width: int) -> "GradedSpace":
        """Symmetric window m in [-M, M] of l2(Z); truncated at both ends."""
        n = np.arange(2 * half_width + 1)
        return cls(np.zeros(n.size, int), n, n[:, None], (2 * half_width,), (True,))

    @classmethod
    def exact(cls, parity: Sequence[int]) -> "GradedSpace":
        """A finite space that is not a truncation (spin irrep, fermion)."""
        parity = np.asarray(parity, dtype=np.int64)
        return cls(parity, np.zeros(parity.size, int))

    def tensor(self, other: "GradedSpace") -> "GradedSpace":
        """Leg-major product: the first leg is the slowest index."""
        da, db = self.dim, other.dim
        par = (np.repeat(self.parity, db) + np.tile(other.parity, da)) % 2
        lev = np.repeat(self.level, db) + np.tile(other.level, da)
        modes = np.hstack([np.repeat(self.modes, db, axis=0), np.tile(other.modes, (da, 1))])
        return GradedSpace(
            par,
            lev,
            modes,
            self.mode_max + other.mode_max,
            self.mode_open_below + other.mode_open_below,
        )

    def interior(self, guard: int) -> np.ndarray:
        """Mask of basis states at least ``guard`` levels from every cutoff."""
        mask = np.ones(self.dim, dtype=bool)
        for i, (top, open_below) in enumerate(zip(self.mode_max, self.mode_open_below)):
            col = self.modes[:, i]
            mask &= col <= top - guard
            if open_below:
                mask &= col >= guard
        return mask

    def same_as(self, other: "GradedSpace") -> bool:
        return (
            self is other
            or (
                self.dim == other.dim
                and np.array_equal(self.parity, other.parity)
                and np.array_equal(self.modes, other.modes)
                and self.mode_max == other.mode_max
            )
        )


@dataclass(frozen=True, eq=False)
class GradedOperator:
    matrix: np.ndarray
    space: GradedSpace
    parity: int = 0
    level_shift: int | None = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (self.space.dim, self.space.dim):
            raise ShapeError(f"matrix shape {m.shape} does not match space dim {self.space.dim}")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "parity", int(self.parity) % 2)

    @property
    def dim(self) -> int:
        return self.space.dim

    def _check(self, other):
        if not isinstance(other, GradedOperator):
            return
        if not self.space.same_as(other.space):
            raise ShapeError("operators live on different spaces")

    def __matmul__(self, other):
        self._check(other)
        shift = None
        if self.level_shift is not None and other.level_shift is not None:
            shift = self.level_shift + other.level_shift
        return GradedOperator(self.matrix @ other.matrix, self.space, self.parity + other.parity, shift)

    def __add__(self, other):
        self._check(other)
        shift = self.level_shift if self.level_shift == other.level_shift else None
        return GradedOperator(self.matrix + other.matrix, self.space, self.parity, shift)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __neg__(self):
        return (-1.0) * self

    def __mul__(self, scalar):
        return GradedOperator(scalar * self.matrix, self.space, self.parity, self.level_shift)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)

    def __pow__(self, n: int):
        out = identity(self.space)
        for _ in range(n):
            out = out @ self
        return out

    @property
    def H(self) -> "GradedOperator":
        return dagger(self)

    def homogeneity_defect(self) -> float:
        """Largest entry that violates the declared parity or level shift."""
        par = self.space.parity
        bad = ((par[:, None] + par[None, :]) % 2) != self.parity
        if self.level_shift is not None:
            lev = self.space.level
            bad |= (lev[:, None] - lev[None, :]) != self.level_shift
        vals = np.abs(self.matrix[bad])
        return float(vals.max()) if vals.size else 0.0


@dataclass
class CheckReport:
    check_id: str
    residual: float
    tolerance: float
    passed: bool = field(init=False)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.residual = float(self.residual)
        self.tolerance = float(self.tolerance)
        self.passed = bool(self.residual <= self.tolerance)
        self.meta = {str(k): str(v) for k, v in self.meta.items()}

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "meta": dict(sorted(self.meta.items())),
        }

    @classmethod
    def combine(cls, check_id: str, reports: Iterable["CheckReport"], **meta) -> "CheckReport":
        """Worst residual-to-tolerance ratio over ``reports``."""
        reports = list(reports)
        if not reports:
            return cls(check_id, 0.0, 1.0, meta=meta)
        worst = max(reports, key=lambda r: (not r.passed, r.residual / r.tolerance if r.tolerance else np.inf))
        meta = {"worst": worst.check_id, "n_checks": len(reports), **meta}
        return cls(check_id, worst.residual, worst.tolerance, meta=meta)


def identity(space: GradedSpace) -> GradedOperator:
    return GradedOperator(np.eye(space.dim), space, 0, 0)


def graded_kron(a: GradedOperator, b: GradedOperator) -> GradedOperator:
    """(A (x) B)(v (x) w) = (-1)**(p(B) p(v)) Av (x) Bw on homogeneous v, w."""
    signs = _accel.koszul_col_signs(a.space.parity, b.parity, b.dim)
    m = np.kron(a.matrix, b.matrix) * signs[None, :]
    shift = None
    if a.level_shift is not None and b.level_shift is not None:
        shift = a.level_shift + b.level_shift
    return GradedOperator(m, a.space.tensor(b.space), a.parity + b.parity, shift)


def dagger(a: GradedOperator) -> GradedOperator:
    shift = None if a.level_shift is None else -a.level_shift
    return GradedOperator(a.matrix.conj().T, a.space, a.parity, shift)


def norm(a) -> float:
    """Max column-sum norm."""
    m = a.matrix if isinstance(a, GradedOperator) else np.asarray(a)
    return _accel.colsum_norm(m)


def commutator(a: GradedOperator, b: GradedOperator) -> GradedOperator:
    return a @ b - b @ a


def anticommutator(a: GradedOperator, b: GradedOperator) -> GradedOperator:
    return a @ b + b @ a


def supercommutator(a: GradedOperator, b: GradedOperator) -> GradedOperator:
    """[a, b} = ab - (-1)**(p(a) p(b)) ba."""
    if a.parity and b.parity:
        return anticommutator(a, b)
    return commutator(a, b)


def _word_matrix(space, factors):
    m = np.eye(space.dim, dtype=np.complex128)
    for f in factors:
        if not f.space.same_as(space):
            raise ShapeError("relation mixes operators from different spaces")
        m = m @ f.matrix
    return m


def auto_guard(expr) -> int:
    """Largest distance any word travels from its starting level.

    Both directions count, since a window leg is truncated on both
    sides.  Factors without a declared level shift count as +1, which
    is the worst case for the ladder-built operators of the catalog.
    """
    guard = 0
    for _, factors in expr:
        pos = 0
        for f in reversed(factors):
            pos += 1 if f.level_shift is None else f.level_shift
            guard = max(guard, abs(pos))
    return guard


def guarded_residual(
    expr,
    guard: int | None = None,
    *,
    tol: float = 1e-10,
    check_id: str = "relation",
    space: GradedSpace | None = None,
    normalize: bool = True,
) -> CheckReport:
    """Residual of a relation on the guarded interior of a truncated space.

    ``expr`` is a list of ``(coefficient, [factors])``; an empty factor
    list stands for the identity.  The residual is the max column-sum
    norm of P M P, divided by max(1, sum |c| * |P word P|) when
    ``normalize`` is set so that coefficients growing like q**-m on an
    l2(Z) window do not swamp the tolerance.
    """
    if space is None:
        for _, factors in expr:
            if factors:
                space = factors[0].space
                break
    if space is None:
        return CheckReport(check_id, 0.0, tol, meta={"guard": guard, "note": "scalar expression"})
    if guard is None:
        guard = auto_guard(expr)
    if guard < 0:
        raise DomainError("guard must be non-negative")
    mask = space.interior(guard)
    if not mask.any():
        raise GuardInfeasibleError(f"guard {guard} leaves an empty interior on dim {space.dim}")
    total = np.zeros((space.dim, space.dim), dtype=np.complex128)
    scale = 0.0
    for coeff, factors in expr:
        w = _word_matrix(space, factors)
        total += coeff * w
        scale += abs(coeff) * _accel.colsum_norm(w[np.ix_(mask, mask)])
    absolute = _accel.colsum_norm(total[np.ix_(mask, mask)])
    denom = max(1.0, scale) if normalize else 1.0
    meta = {
        "guard": guard,
        "dim": space.dim,
        "interior": int(mask.sum()),
        "absolute": repr(absolute),
        "scale": repr(scale),
    }
    return CheckReport(check_id, absolute / denom, tol, meta=meta)


def operator_residual(lhs, rhs, guard: int | None = None, *, tol: float = 1e-10, check_id: str = "identity") -> CheckReport:
    """Guarded residual of ``lhs - rhs`` for two already-built operators."""
    return guarded_residual([(1.0, [lhs]), (-1.0, [rhs])], guard, tol=tol, check_id=check_id)


def tridiag_eigenvalues(diag, offdiag, rtol: float = 1e-12) -> np.ndarray:
    """Eigenvalues of a real symmetric tridiagonal matrix by Sturm bisection."""
    d = np.asarray(diag, dtype=np.float64)
    e = np.asarray(offdiag, dtype=np.float64)
    if d.size == 0:
        raise DomainError("empty tridiagonal matrix")
    if e.size != d.size - 1:
        raise ShapeError(f"offdiag must have length {d.size - 1}, got {e.size}")
    if d.size == 1:
        return d.copy()
    return np.sort(_accel.bisect_eigenvalues(d, e, rtol))


def operator_to_json(op, op_parity: int | None = None, extra: dict | None = None) -> dict:
    """Matrix exchange format; row-major [re, im] pairs."""
    if isinstance(op, GradedOperator):
        m, par, lev, op_parity = op.matrix, op.space.parity, op.space.level, op.parity
    else:
        m = np.asarray(op, dtype=np.complex128)
        par = np.zeros(m.shape[0], int)
        lev = np.zeros(m.shape[0], int)
    obj = {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "parity": [int(p) for p in par],
        "level": [int(v) for v in lev],
        "data": [[float(z.real), float(z.imag)] for z in m.ravel()],
    }
    if op_parity is not None:
        obj["op_parity"] = int(op_parity)
    if extra:
        obj.update(extra)
    return obj


def operator_from_json(obj) -> GradedOperator:
    """Inverse of :func:`operator_to_json`; accepts a dict or JSON text."""
    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    for key in ("rows", "cols", "parity", "data"):
        if key not in obj:
            raise ShapeError(f"matrix JSON is missing key {key!r}")
    rows, cols = int(obj["rows"]), int(obj["cols"])
    if rows != cols:
        raise ShapeError(f"matrix must be square, got {rows}x{cols}")
    data = obj["data"]
    if len(data) != rows * cols:
        raise ShapeError(f"expected {rows * cols} entries, got {len(data)}")
    arr = np.array([complex(re, im) for re, im in data], dtype=np.complex128).reshape(rows, cols)
    level = obj.get("level", [0] * rows)
    if len(obj["parity"]) != rows or len(level) != rows:
        raise ShapeError("parity/level length does not match rows")
    space = GradedSpace(np.array(obj["parity"]), np.array(level))
    return GradedOperator(arr, space, obj.get("op_parity", 0))
