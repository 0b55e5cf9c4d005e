"""Catalog of matrix representations.

Every representation carries its own defining relations as
``(check_id, expr)`` pairs over generator names, so the relation suite
can treat the whole catalog uniformly.
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import least_squares

from .errors import ConstructionFailedError, DomainError, UnsupportedRegimeError
from .galg import (
    CheckReport,
    GradedOperator,
    GradedSpace,
    graded_kron,
    guarded_residual,
    identity,
    operator_to_json,
)
from .qnum import QContext, bracket_box, bracket_sym, coeff_cm_su11, coeff_cn_su2

__all__ = [
    "Rep",
    "FockRep",
    "SpinRep",
    "fock_qosc",
    "suq2_irrep",
    "suq2_group_rep",
    "suq11_group_rep",
    "super_osc_rep",
    "multimode_rep",
    "grassmann_suq11_rep",
    "contraction_errors",
    "export_rep",
    "FOCK_VARIANTS",
]

FOCK_VARIANTS = ("small_a", "big_A", "alpha")


@dataclass(frozen=True, eq=False)
class Rep:
    name: str
    space: GradedSpace
    gens: dict
    ctx: QContext
    relations: tuple = ()
    meta: dict = field(default_factory=dict)

    def __getitem__(self, key) -> GradedOperator:
        return self.gens[key]

    def expr(self, terms):
        """Resolve ``[(coeff, [names])]`` into operator factors."""
        return [(c, [self.gens[n] for n in names]) for c, names in terms]

    def check_relations(self, guard: int | None = None, tol: float = 1e-10) -> list[CheckReport]:
        out = []
        for check_id, terms in self.relations:
            rep = guarded_residual(self.expr(terms), guard, tol=tol, check_id=f"{self.name}:{check_id}")
            rep.meta["q"] = repr(self.ctx.q)
            out.append(rep)
        return out


@dataclass(frozen=True, eq=False)
class FockRep(Rep):
    variant: str = ""


@dataclass(frozen=True, eq=False)
class SpinRep(Rep):
    j: float = 0.0


def _op(m, space, parity=0, shift=None):
    return GradedOperator(m, space, parity, shift)


def _diag_powers(space, q, n):
    return {
        "N": _op(np.diag(n.astype(float)), space, 0, 0),
        "q^N": _op(np.diag(q**n), space, 0, 0),
        "q^-N": _op(np.diag(q ** (-n)), space, 0, 0),
        "q^N/2": _op(np.diag(q ** (n / 2.0)), space, 0, 0),
        "q^-N/2": _op(np.diag(q ** (-n / 2.0)), space, 0, 0),
        "q^2N": _op(np.diag(q ** (2 * n)), space, 0, 0),
        "q^-2N": _op(np.diag(q ** (-2 * n)), space, 0, 0),
        "1": identity(space),
    }


def _lowering(values):
    """Matrix with m[n-1, n] = values[n-1]; lowers the level by one."""
    dim = len(values) + 1
    m = np.zeros((dim, dim))
    m[np.arange(dim - 1), np.arange(1, dim)] = values
    return m


def fock_qosc(variant: str, dim: int, ctx: QContext) -> FockRep:
    """One of the three q-oscillator conventions on a truncated Fock space.

    All three live at the same q: ``A|n> = sqrt([n; q^2])|n-1>``,
    ``alpha = q^-N A`` and ``a = q^-N/2 A``.
    """
    if variant not in FOCK_VARIANTS:
        raise DomainError(f"unknown oscillator variant {variant!r}; expected one of {FOCK_VARIANTS}")
    if dim < 2:
        raise DomainError("a Fock representation needs dim >= 2")
    q = ctx.q
    space = GradedSpace.fock(dim)
    n = np.arange(dim)
    gens = _diag_powers(space, q, n)
    k = np.arange(1, dim)
    big = np.sqrt([bracket_box(int(i), q * q) for i in k])
    if variant == "big_A":
        low, names = big, ("A", "A+")
        rel = [
            ("AA+ - q^2 A+A = 1", [(1.0, ["A", "A+"]), (-q * q, ["A+", "A"]), (-1.0, [])]),
            ("[N,A] = -A", [(1.0, ["N", "A"]), (-1.0, ["A", "N"]), (1.0, ["A"])]),
        ]
    elif variant == "alpha":
        low, names = np.sqrt([bracket_box(int(i), q**-2) for i in k]), ("alpha", "alpha+")
        rel = [
            ("[alpha,alpha+] = q^-2N", [(1.0, ["alpha", "alpha+"]), (-1.0, ["alpha+", "alpha"]), (-1.0, ["q^-2N"])]),
            ("[N,alpha] = -alpha", [(1.0, ["N", "alpha"]), (-1.0, ["alpha", "N"]), (1.0, ["alpha"])]),
        ]
    else:
        low, names = q ** (-(k - 1) / 2.0) * big, ("a", "a+")
        rel = [
            ("aa+ - q a+a = q^-N", [(1.0, ["a", "a+"]), (-q, ["a+", "a"]), (-1.0, ["q^-N"])]),
            ("[N,a] = -a", [(1.0, ["N", "a"]), (-1.0, ["a", "N"]), (1.0, ["a"])]),
        ]
    lo = _op(_lowering(low), space, 0, -1)
    gens[names[0]] = lo
    gens[names[1]] = lo.H
    up = names[1]
    rel.append((f"[N,{up}] = {up}", [(1.0, ["N", up]), (-1.0, [up, "N"]), (-1.0, [up])]))
    return FockRep(f"fock-{variant}", space, gens, ctx, tuple(rel), {"dim": dim}, variant=variant)


def suq2_irrep(j: float, ctx: QContext) -> SpinRep:
    """Spin-j irrep V_j; basis index i carries J-eigenvalue m = j - i."""
    two_j = 2 * j
    if two_j < 0 or abs(two_j - round(two_j)) > 1e-12:
        raise DomainError(f"j must be a non-negative half-integer, got {j}")
    two_j = int(round(two_j))
    j = two_j / 2.0
    dim = two_j + 1
    space = GradedSpace.exact(np.zeros(dim, int))
    m = j - np.arange(dim)
    xp = np.zeros((dim, dim))
    for i in range(1, dim):
        mm = m[i]
        # X+ |m> = N+(m, j) |m+1>, and |m+1> sits at index i-1
        xp[i - 1, i] = math.sqrt(bracket_sym(j - mm, ctx) * bracket_sym(j + mm + 1, ctx))
    q = ctx.q
    gens = {
        "X+": _op(xp, space),
        "J": _op(np.diag(m), space, 0, 0),
        "q^J": _op(np.diag(q**m), space, 0, 0),
        "q^-J": _op(np.diag(q ** (-m)), space, 0, 0),
        "q^2J": _op(np.diag(q ** (2 * m)), space, 0, 0),
        "q^-2J": _op(np.diag(q ** (-2 * m)), space, 0, 0),
        "1": identity(space),
    }
    gens["X-"] = gens["X+"].H
    lam = ctx.lam
    rel = (
        ("[J,X+] = X+", [(1.0, ["J", "X+"]), (-1.0, ["X+", "J"]), (-1.0, ["X+"])]),
        ("[J,X-] = -X-", [(1.0, ["J", "X-"]), (-1.0, ["X-", "J"]), (1.0, ["X-"])]),
        ("[X+,X-] = [2J]", [(1.0, ["X+", "X-"]), (-1.0, ["X-", "X+"]), (-1.0 / lam, ["q^2J"]), (1.0 / lam, ["q^-2J"])]),
    )
    return SpinRep(f"suq2-V{two_j}/2", space, gens, ctx, rel, {"j": j}, j=j)


def suq2_group_rep(dim: int, ctx: QContext) -> FockRep:
    """The Fock representation of SU_q(2); b|n> = q^n |n>."""
    if ctx.q >= 1:
        raise UnsupportedRegimeError("the SU_q(2) Fock representation needs 0 < q < 1")
    if dim < 2:
        raise DomainError("dim must be >= 2")
    q = ctx.q
    space = GradedSpace.fock(dim)
    n = np.arange(dim)
    gens = _diag_powers(space, q, n)
    a = _op(_lowering([coeff_cn_su2(i, ctx) for i in range(1, dim)]), space, 0, -1)
    b = _op(np.diag(q ** n.astype(float)), space, 0, 0)
    gens.update({"a": a, "a+": a.H, "b": b, "b+": b.H})
    rel = (
        ("ab = qba", [(1.0, ["a", "b"]), (-q, ["b", "a"])]),
        ("ab+ = qb+a", [(1.0, ["a", "b+"]), (-q, ["b+", "a"])]),
        ("bb+ = b+b", [(1.0, ["b", "b+"]), (-1.0, ["b+", "b"])]),
        ("aa+ + q^2 b+b = 1", [(1.0, ["a", "a+"]), (q * q, ["b+", "b"]), (-1.0, [])]),
        ("a+a + b+b = 1", [(1.0, ["a+", "a"]), (1.0, ["b+", "b"]), (-1.0, [])]),
    )
    return FockRep("suq2-group", space, gens, ctx, rel, {"dim": dim}, variant="suq2")


def suq11_group_rep(M: int, phi: float, ctx: QContext) -> FockRep:
    """SU_q(1,1) on the window m in [-M, M] of l2(Z); index i = m + M."""
    if M < 1:
        raise DomainError("window half-width M must be >= 1")
    q = ctx.q
    space = GradedSpace.window(M)
    m = np.arange(-M, M + 1)
    b = _op(np.diag(cmath.exp(1j * phi) * q ** (-m.astype(float))), space, 0, 0)
    # a|m> = c_m |m+1>: a raises the window index
    a = _op(_lowering([coeff_cm_su11(int(mm), ctx) for mm in m[:-1]]).T, space, 0, 1)
    gens = {"a": a, "a*": a.H, "b": b, "b*": b.H, "1": identity(space)}
    lam = ctx.lam
    rel = (
        ("ab = qba", [(1.0, ["a", "b"]), (-q, ["b", "a"])]),
        ("ab* = qb*a", [(1.0, ["a", "b*"]), (-q, ["b*", "a"])]),
        ("bb* = b*b", [(1.0, ["b", "b*"]), (-1.0, ["b*", "b"])]),
        ("[a,a*] = lam b*b", [(1.0, ["a", "a*"]), (-1.0, ["a*", "a"]), (-lam, ["b*", "b"])]),
        ("aa* = 1 + q b*b", [(1.0, ["a", "a*"]), (-1.0, []), (-q, ["b*", "b"])]),
        ("a*a = 1 + b*b/q", [(1.0, ["a*", "a"]), (-1.0, []), (-1.0 / q, ["b*", "b"])]),
        ("det_q T = aa* - q bb* = 1", [(1.0, ["a", "a*"]), (-q, ["b", "b*"]), (-1.0, [])]),
    )
    return FockRep("suq11-group", space, gens, ctx, rel, {"M": M, "phi": phi}, variant="suq11")


def _fermion():
    space = GradedSpace.exact([0, 1])
    f = _op(np.array([[0.0, 1.0], [0.0, 0.0]]), space, 1)
    return space, f


def super_osc_rep(dimB: int, ctx: QContext) -> FockRep:
    """s-A_q on boson (x) fermion: A = A (x) 1, B = q^N (x) f."""
    if dimB < 2:
        raise DomainError("dimB must be >= 2")
    q = ctx.q
    bos = fock_qosc("big_A", dimB, ctx)
    fspace, f = _fermion()
    one_f = identity(fspace)
    A = graded_kron(bos["A"], one_f)
    B = graded_kron(bos["q^N"], f)
    space = A.space
    gens = {
        "A": A,
        "A+": A.H,
        "B": B,
        "B+": B.H,
        "N": graded_kron(bos["N"], one_f),
        "q^N": graded_kron(bos["q^N"], one_f),
        "q^-N": graded_kron(bos["q^-N"], one_f),
        "1": identity(space),
    }
    rel = (
        ("AA+ - q^2 A+A = 1", [(1.0, ["A", "A+"]), (-q * q, ["A+", "A"]), (-1.0, [])]),
        ("BB+ + B+B = 1 + (q^2-1) A+A", [(1.0, ["B", "B+"]), (1.0, ["B+", "B"]), (-1.0, []), (1 - q * q, ["A+", "A"])]),
        ("AB = qBA", [(1.0, ["A", "B"]), (-q, ["B", "A"])]),
        ("AB+ = qB+A", [(1.0, ["A", "B+"]), (-q, ["B+", "A"])]),
        ("B^2 = 0", [(1.0, ["B", "B"])]),
        ("B+^2 = 0", [(1.0, ["B+", "B+"])]),
    )
    return FockRep("super-osc", space, gens, ctx, rel, {"dimB": dimB}, variant="super")


def _two_mode(dim, ctx, dressing):
    osc = fock_qosc("big_A", dim, ctx)
    one = osc["1"]
    if dressing == "mode2-dressed-by-N1":
        A1 = graded_kron(osc["A"], one)
        A2 = graded_kron(osc["q^N"], osc["A"])
    else:
        A1 = graded_kron(osc["A"], osc["q^N"])
        A2 = graded_kron(one, osc["A"])
    return osc, A1, A2


def multimode_rep(n: int, dim: int, ctx: QContext) -> FockRep:
    """Two covariant modes; the q^N dressing side is picked by brute force.

    The candidate that satisfies R A(x)A = q A(x)A for the sl_q(2)
    R-matrix is kept; the residual of the other one is recorded.
    """
    if n != 2:
        raise UnsupportedRegimeError("only the two-mode system is supported")
    from .rmx import rmatrix_slq2, zf_check

    R = rmatrix_slq2(ctx)
    table = {}
    best = None
    for dressing in ("mode1-dressed-by-N2", "mode2-dressed-by-N1"):
        osc, A1, A2 = _two_mode(dim, ctx, dressing)
        rep = zf_check(R, [A1, A2], which="AA")
        table[dressing] = rep.residual
        if best is None or rep.residual < best[0]:
            best = (rep.residual, dressing, osc, A1, A2)
    resid, dressing, osc, A1, A2 = best
    if resid > 1e-10:
        raise ConstructionFailedError("no q^N dressing satisfies the exchange relation", table)
    q = ctx.q
    space = A1.space
    one = osc["1"]
    N1 = graded_kron(osc["N"], one)
    N2 = graded_kron(one, osc["N"])
    Ntot = N1 + N2
    h = (np.diag(q ** (2.0 * np.diag(Ntot.matrix).real)) - np.eye(space.dim)) / (q * q - 1)
    gens = {
        "A1": A1,
        "A1+": A1.H,
        "A2": A2,
        "A2+": A2.H,
        "N1": N1,
        "N2": N2,
        "H_modes": GradedOperator(h, space, 0, 0),
        "1": identity(space),
    }
    rel = (
        ("A1A2 = q A2A1", [(1.0, ["A1", "A2"]), (-q, ["A2", "A1"])]),
        ("H = (q^2(N1+N2) - 1)/(q^2 - 1)", [(1.0, ["A1+", "A1"]), (1.0, ["A2+", "A2"]), (-1.0, ["H_modes"])]),
    )
    meta = {"dim": dim, "dressing": dressing, "dressing_table": table}
    return FockRep("two-mode", space, gens, ctx, rel, meta, variant="multimode")


# -- Grassmann realization of SU_q(1|1)

_G_BASIS = ("1", "eta", "eta*", "eta eta*")
_G_PARITY = (0, 1, 1, 0)


def _grassmann_ops():
    L_eta = np.zeros((4, 4))
    L_eta[1, 0] = 1.0  # 1 -> eta
    L_eta[3, 2] = 1.0  # eta* -> eta eta*
    L_etas = np.zeros((4, 4))
    L_etas[2, 0] = 1.0  # 1 -> eta*
    L_etas[3, 1] = -1.0  # eta -> eta* eta = -eta eta*
    d_eta = np.zeros((4, 4))
    d_eta[0, 1] = 1.0
    d_eta[2, 3] = 1.0
    d_etas = np.zeros((4, 4))
    d_etas[0, 2] = 1.0
    d_etas[1, 3] = -1.0
    return {"L_eta": L_eta, "L_eta*": L_etas, "d_eta": d_eta, "d_eta*": d_etas}


def _grassmann_relations(q):
    return (
        ("a beta = q beta a", [(1.0, ["a", "beta"]), (-q, ["beta", "a"])]),
        ("a beta* = q beta* a", [(1.0, ["a", "beta*"]), (-q, ["beta*", "a"])]),
        ("a* beta = beta a*/q", [(1.0, ["a*", "beta"]), (-1.0 / q, ["beta", "a*"])]),
        ("a* beta* = beta* a*/q", [(1.0, ["a*", "beta*"]), (-1.0 / q, ["beta*", "a*"])]),
        ("[a,a*] = (1-q^2) beta* beta", [(1.0, ["a", "a*"]), (-1.0, ["a*", "a"]), (q * q - 1, ["beta*", "beta"])]),
        ("beta beta* = -q^2 beta* beta", [(1.0, ["beta", "beta*"]), (q * q, ["beta*", "beta"])]),
        ("aa* = 1 + beta beta*", [(1.0, ["a", "a*"]), (-1.0, []), (-1.0, ["beta", "beta*"])]),
        ("a*a = 1 - beta* beta", [(1.0, ["a*", "a"]), (-1.0, []), (1.0, ["beta*", "beta"])]),
        ("beta^2 = 0", [(1.0, ["beta", "beta"])]),
        ("beta*^2 = 0", [(1.0, ["beta*", "beta*"])]),
        ("Lambda beta = q beta Lambda", [(1.0, ["Lambda", "beta"]), (-q, ["beta", "Lambda"])]),
        ("Lambda beta* = q beta* Lambda", [(1.0, ["Lambda", "beta*"]), (-q, ["beta*", "Lambda"])]),
    )


def _grassmann_gens(space, q, phi, beta_star):
    deg = np.array([0, 1, 1, 2])
    lam_op = np.diag(q ** deg.astype(float))
    lam_inv = np.diag(q ** (-deg.astype(float)))
    beta = lam_op @ _grassmann_ops()["L_eta"]
    bsb = beta_star @ beta
    one = np.eye(4)
    a = cmath.exp(1j * phi) * lam_op @ (one - bsb / 2)
    a_star = (one - bsb / 2) @ lam_inv * cmath.exp(-1j * phi)
    mk = lambda m, p: GradedOperator(m, space, p)
    return {
        "Lambda": mk(lam_op, 0),
        "Lambda^-1": mk(lam_inv, 0),
        "beta": mk(beta, 1),
        "beta*": mk(beta_star, 1),
        "a": mk(a, 0),
        "a*": mk(a_star, 0),
        "1": identity(space),
    }


def grassmann_suq11_rep(phi: float, ctx: QContext, tol: float = 1e-10) -> Rep:
    """4-dim representation of SU_q(1|1) on the Grassmann algebra of eta, eta*.

    beta = Lambda L_eta with Lambda = q^D.  beta* is not the Hilbert
    adjoint; it is picked from c * Lambda^e * (-1)^(sD) * O with O a
    left multiplication or derivative and c fitted by least squares,
    with |c| = 1 imposed to exclude the trivial solution c = 0.
    """
    q = ctx.q
    space = GradedSpace.exact(_G_PARITY)
    deg = np.array([0, 1, 1, 2])
    rels = _grassmann_relations(q)
    table = {}
    best = None
    for oname, O in _grassmann_ops().items():
        if oname == "L_eta":
            continue
        for e in (-1, 0, 1):
            for s in (0, 1):
                base = np.diag(q ** (e * deg.astype(float))) @ np.diag((-1.0) ** (s * deg)) @ O

                def resid(x, base=base):
                    c = complex(x[0], x[1])
                    rep = Rep("g", space, _grassmann_gens(space, q, phi, c * base), ctx, rels)
                    out = []
                    for _, terms in rels:
                        m = sum(co * _prod(rep, names) for co, names in terms)
                        out.extend(np.concatenate([m.real.ravel(), m.imag.ravel()]))
                    out.append(abs(c) ** 2 - 1.0)
                    return np.array(out)

                sol = least_squares(resid, x0=[1.0, 0.0], xtol=1e-15, ftol=1e-15, gtol=1e-15)
                r = float(np.max(np.abs(resid(sol.x))))
                key = f"{oname}*Lambda^{e}*sign^{s}"
                table[key] = r
                if best is None or r < best[0]:
                    best = (r, key, complex(sol.x[0], sol.x[1]) * base)
    r, key, beta_star = best
    if r > tol:
        raise ConstructionFailedError(f"no ansatz reached tolerance {tol}; best {key} at {r:.3e}", table)
    gens = _grassmann_gens(space, q, phi, beta_star)
    return Rep("grassmann-suq11", space, gens, ctx, rels, {"ansatz": key, "phi": phi, "best_residual": r})


def _prod(rep, names):
    m = np.eye(rep.space.dim, dtype=complex)
    for n in names:
        m = m @ rep.gens[n].matrix
    return m


def contraction_errors(js, levels: int, ctx: QContext) -> list[float]:
    """Distance between sqrt(lam) X+ / q^j on V_j and the alpha ladder.

    |n> is identified with |j - n; j>, so X+ lowers n.  The limit only
    exists for q > 1 (for q < 1 the ratio diverges like q**(-4j)), so
    contexts with q < 1 are inverted first.  Returns the max deviation
    over levels 0..``levels`` for each j.
    """
    cq = ctx if ctx.q > 1 else ctx.inverse()
    q = cq.q
    target = np.array([math.sqrt(bracket_box(n, q**-2)) for n in range(1, levels + 1)])
    out = []
    for j in js:
        rep = suq2_irrep(j, cq)
        xp = rep["X+"].matrix.real
        # <n-1| X+ |n> lives at index pair (n-1, n) in the m = j - i basis
        vals = np.array([xp[n - 1, n] for n in range(1, levels + 1)])
        approx = math.sqrt(cq.lam) * vals / q**j
        out.append(float(np.max(np.abs(approx - target))))
    return out


def export_rep(rep: Rep, directory) -> Path:
    """One matrix JSON per generator plus a manifest."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    entries = []
    for i, name in enumerate(sorted(rep.gens)):
        op = rep.gens[name]
        fname = f"gen{i:02d}.json"
        (directory / fname).write_text(json.dumps(operator_to_json(op), sort_keys=True))
        entries.append({"name": name, "file": fname, "parity": op.parity, "level_shift": op.level_shift})
    manifest = {"representation": rep.name, "q": rep.ctx.q, "generators": entries}
    path = directory / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True))
    return path
