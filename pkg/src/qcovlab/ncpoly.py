"""Noncommutative polynomials and a quadratic rewriting engine.

Coefficients are complex numbers at one sampled q.  Presentations are
therefore built per :class:`QContext`; identities are tested by
rebuilding everything at several sampled q and asking for vanishing
normal forms at each sample.

Symbols carry an integer tensor leg.  Symbols on different legs are
swapped into leg order with the Koszul sign; symbols on the same leg
are rewritten by the rules of that leg's presentation.
"""
from __future__ import annotations

import cmath
import itertools
import re
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

import numpy as np

from .errors import (
    IncompletePresentationError,
    InternalInconsistencyError,
    PresentationSyntaxError,
)
from .galg import CheckReport
from .qnum import QContext

__all__ = [
    "oscillator_z",
    "k_c1",
    "k_c2",
    "k_c2_literal",
    "osp_c2",
    "osp_c2_ba",
    "GenSymbol",
    "NcPoly",
    "AlgebraPresentation",
    "PresentationTemplate",
    "RewriteSystem",
    "CoactionMap",
    "parse_presentation",
    "sample_contexts",
    "normal_form",
    "is_zero",
    "is_central",
    "coaction_check",
    "coassociativity_counit_check",
    "invariance_check",
    "confluence_check",
    "CATALOG",
    "presentation",
    "psi_oscillator_suq2",
    "psi_oscillator_suq11",
    "phi_super_oscillator",
    "select_super_signs",
    "super_hamiltonian",
    "suq2_coproduct",
    "suq2_counit",
    "identity_coaction",
    "osp_plane_coaction",
]

PRUNE = 1e-14
STEP_CEILING = 2_000_000


@dataclass(frozen=True, order=True)
class GenSymbol:
    name: str
    parity: int = 0
    leg: int = 0

    def on_leg(self, leg: int) -> "GenSymbol":
        return GenSymbol(self.name, self.parity, leg)

    def __repr__(self):
        return self.name if self.leg == 0 else f"{self.name}@{self.leg}"


Word = tuple


class NcPoly:
    """Finite sum of coefficient * word; words are tuples of GenSymbol."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | Iterable = ()):
        acc = defaultdict(complex)
        items = terms.items() if isinstance(terms, Mapping) else terms
        for word, c in items:
            acc[tuple(word)] += c
        self.terms = {w: c for w, c in acc.items() if abs(c) > PRUNE}

    @classmethod
    def const(cls, c) -> "NcPoly":
        return cls({(): complex(c)})

    @classmethod
    def gen(cls, sym: GenSymbol) -> "NcPoly":
        return cls({(sym,): 1.0})

    def __add__(self, other):
        other = _as_poly(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return NcPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return NcPoly({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if isinstance(other, NcPoly):
            out = defaultdict(complex)
            for (w1, c1), (w2, c2) in itertools.product(self.terms.items(), other.terms.items()):
                out[w1 + w2] += c1 * c2
            return NcPoly(out)
        return NcPoly({w: c * other for w, c in self.terms.items()})

    def __rmul__(self, other):
        if isinstance(other, NcPoly):
            return other * self
        return NcPoly({w: other * c for w, c in self.terms.items()})

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)

    def __pow__(self, n: int):
        out = NcPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, NcPoly) and (self - other).is_zero()

    def is_zero(self, tol: float = PRUNE) -> bool:
        return all(abs(c) <= tol for c in self.terms.values())

    def max_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def l1(self) -> float:
        return float(sum(abs(c) for c in self.terms.values()))

    @property
    def parity(self) -> int | None:
        pars = {sum(s.parity for s in w) % 2 for w in self.terms}
        if len(pars) > 1:
            return None
        return pars.pop() if pars else 0

    def symbols(self) -> set:
        return {s for w in self.terms for s in w}

    def substitute(self, images: Mapping) -> "NcPoly":
        """Replace every symbol found in ``images`` by its image polynomial."""
        out = NcPoly()
        for w, c in self.terms.items():
            term = NcPoly.const(c)
            for s in w:
                term = term * (images[s] if s in images else NcPoly.gen(s))
            out = out + term
        return out

    def map_legs(self, mapping: Mapping[int, int]) -> "NcPoly":
        return NcPoly({tuple(s.on_leg(mapping.get(s.leg, s.leg)) for s in w): c for w, c in self.terms.items()})

    def evaluate(self, values: Mapping) -> "NcPoly":
        """Replace symbols by scalars (a counit-like map)."""
        out = defaultdict(complex)
        for w, c in self.terms.items():
            kept = []
            for s in w:
                if s in values:
                    c = c * values[s]
                else:
                    kept.append(s)
            out[tuple(kept)] += c
        return NcPoly(out)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in sorted(self.terms.items(), key=lambda t: (len(t[0]), repr(t[0]))):
            word = "*".join(repr(s) for s in w) or "1"
            parts.append(f"({c:.6g}) {word}")
        return " + ".join(parts)


def _as_poly(x):
    return x if isinstance(x, NcPoly) else NcPoly.const(x)


@dataclass(frozen=True)
class AlgebraPresentation:
    """Generators in normal order plus length-two rewrite rules."""

    name: str
    generators: tuple
    rules: Mapping
    ctx: QContext | None = None

    def __post_init__(self):
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {self.name}")

    def sym(self, name: str) -> GenSymbol:
        for g in self.generators:
            if g.name == name:
                return g
        raise KeyError(f"{self.name} has no generator {name!r}")

    def __getitem__(self, name) -> NcPoly:
        return NcPoly.gen(self.sym(name))

    @property
    def leg(self) -> int:
        return self.generators[0].leg if self.generators else 0

    def on_leg(self, leg: int) -> "AlgebraPresentation":
        gens = tuple(g.on_leg(leg) for g in self.generators)
        rules = {
            (x.on_leg(leg), y.on_leg(leg)): rhs.map_legs({x.leg: leg}) for (x, y), rhs in self.rules.items()
        }
        return AlgebraPresentation(self.name, gens, rules, self.ctx)

    def relations(self) -> list[tuple[str, NcPoly]]:
        """Each rule g*h -> r as the polynomial g*h - r."""
        out = []
        for (x, y), rhs in self.rules.items():
            out.append((f"{x.name}*{y.name}", NcPoly.gen(x) * NcPoly.gen(y) - rhs))
        return out


class RewriteSystem:
    """Rules of several presentations, one per leg, plus Koszul swaps."""

    def __init__(self, presentations: Iterable[AlgebraPresentation]):
        self.presentations = tuple(presentations)
        self.rules = {}
        self.order = {}
        legs = set()
        for pres in self.presentations:
            if pres.leg in legs:
                raise ValueError(f"two presentations on leg {pres.leg}")
            legs.add(pres.leg)
            for i, g in enumerate(pres.generators):
                self.order[g] = i
            self.rules.update(pres.rules)
        self._memo = {}

    def _redex(self, word):
        for i in range(len(word) - 1):
            x, y = word[i], word[i + 1]
            rhs = self.rules.get((x, y))
            if rhs is not None:
                return i, rhs
            if x.leg > y.leg:
                sign = -1.0 if (x.parity and y.parity) else 1.0
                return i, NcPoly({(y, x): sign})
            if x.leg == y.leg and self.order.get(x, -1) > self.order.get(y, -1):
                raise IncompletePresentationError((x.name, y.name))
        return None, None

    def normal_form(self, poly: NcPoly) -> NcPoly:
        for s in poly.symbols():
            if s not in self.order:
                raise IncompletePresentationError((s.name, "<not in alphabet>"))
        done = defaultdict(complex)
        frontier = dict(poly.terms)
        steps = 0
        while frontier:
            nxt = defaultdict(complex)
            for word, c in frontier.items():
                steps += 1
                if steps > STEP_CEILING:
                    raise InternalInconsistencyError("rewriting did not terminate within the step ceiling")
                pos, rhs = self._redex(word)
                if pos is None:
                    done[word] += c
                    continue
                pre, post = word[:pos], word[pos + 2 :]
                for w2, c2 in rhs.terms.items():
                    nxt[pre + w2 + post] += c * c2
            frontier = {w: c for w, c in nxt.items() if abs(c) > PRUNE}
        return NcPoly(done)


def normal_form(poly: NcPoly, system) -> NcPoly:
    if isinstance(system, AlgebraPresentation):
        system = RewriteSystem([system])
    return system.normal_form(poly)


# -- sampling and checks


def sample_contexts(seed: int = 20240601, n: int = 5, low: float = 0.2, high: float = 0.9) -> list[QContext]:
    """Fixed pseudo-random q samples in (0, 1)."""
    rng = np.random.default_rng(seed)
    return [QContext(float(q)) for q in np.sort(rng.uniform(low, high, n))]


SystemFactory = Callable[[QContext], RewriteSystem]
PolyFactory = Callable[[QContext], NcPoly]


def _zero_report(check_id, pairs, tol, extra=None):
    """``pairs`` is a list of (ctx, unreduced, reduced) triples."""
    worst, worst_q, worst_nf = 0.0, None, None
    for ctx, raw, nf in pairs:
        scale = max(1.0, raw.l1())
        r = nf.max_coeff() / scale
        if worst_q is None or r > worst:
            worst, worst_q, worst_nf = r, ctx.q, nf
    meta = {"samples": ",".join(f"{c.q:.6f}" for c, _, _ in pairs), "worst_q": worst_q}
    if worst_nf is not None and not worst_nf.is_zero(tol):
        meta["normal_form"] = repr(worst_nf)[:400]
    meta.update(extra or {})
    return CheckReport(check_id, worst, tol, meta=meta)


def is_zero(poly: PolyFactory, system: SystemFactory, ctxs, *, check_id="is-zero", tol=1e-12) -> CheckReport:
    """Normal form vanishes at every sampled q.

    The residual is the largest surviving coefficient divided by
    max(1, l1 norm of the unreduced input), so that identities with
    coefficients like q**-6 are judged relative to their size.
    """
    pairs = []
    for ctx in ctxs:
        p = poly(ctx)
        pairs.append((ctx, p, normal_form(p, system(ctx))))
    return _zero_report(check_id, pairs, tol)


def supercommutator(x: NcPoly, y: NcPoly) -> NcPoly:
    px, py = x.parity or 0, y.parity or 0
    sign = -1.0 if (px and py) else 1.0
    return x * y - sign * (y * x)


def is_central(elem: PolyFactory, pres: Callable[[QContext], AlgebraPresentation], ctxs, *, check_id="central", tol=1e-12) -> CheckReport:
    names = [g.name for g in pres(ctxs[0]).generators]
    reports = []
    for name in names:
        reports.append(
            is_zero(
                lambda c, name=name: supercommutator(elem(c), pres(c)[name]),
                lambda c: RewriteSystem([pres(c)]),
                ctxs,
                check_id=f"{check_id}:[.,{name}]",
                tol=tol,
            )
        )
    return CheckReport.combine(check_id, reports)


@dataclass
class CoactionMap:
    """Generator images of a coaction.

    ``source`` builds the covariant algebra (on leg ``source_leg``);
    ``system`` builds the combined two-leg rewrite system and
    ``images`` returns, at a context, a dict from source symbols to
    polynomials in that system.
    """

    name: str
    source: Callable[[QContext], AlgebraPresentation]
    system: SystemFactory
    images: Callable[[QContext], dict]
    leg_order: tuple = ("group", "algebra")
    group: Callable[[QContext], AlgebraPresentation] | None = None
    meta: dict = field(default_factory=dict)

    def apply(self, poly: NcPoly, ctx: QContext) -> NcPoly:
        return poly.substitute(self.images(ctx))


def coaction_check(cm: CoactionMap, ctxs, target_relations=None, *, tol=1e-12, check_id=None) -> CheckReport:
    """Images of the source relations reduce to zero.

    ``target_relations`` maps a context to ``[(name, poly)]``; by
    default the rewrite rules of the source presentation are used.
    """
    check_id = check_id or f"coaction:{cm.name}"
    rels = target_relations or (lambda c: cm.source(c).relations())
    names = [n for n, _ in rels(ctxs[0])]
    reports = []
    for i, rname in enumerate(names):
        reports.append(
            is_zero(
                lambda c, i=i: cm.apply(rels(c)[i][1], c),
                cm.system,
                ctxs,
                check_id=f"{check_id}:{rname}",
                tol=tol,
            )
        )
    return CheckReport.combine(check_id, reports, map=cm.name)


def coassociativity_counit_check(
    cm: CoactionMap,
    coproduct: Callable[[QContext], dict],
    counit: Callable[[QContext], dict],
    ctxs,
    *,
    tol=1e-12,
    check_id=None,
) -> CheckReport:
    """Coassociativity and the counit law on every source generator.

    Algebra-first maps (algebra on leg 0, group on leg 1) are checked as
    (psi (x) id) psi = (id (x) Delta) psi on legs (A, G, G); group-first
    maps (group on leg 0, algebra on leg 1) as (id (x) psi) psi =
    (Delta (x) id) psi on legs (G, G, A).  ``coproduct`` sends group
    symbols on leg 0 to polynomials on legs 0 and 1; ``counit`` maps
    group generator names to scalars.
    """
    check_id = check_id or f"coassoc:{cm.name}"
    algebra_first = cm.leg_order[0] == "algebra"
    if algebra_first:
        grp_leg, delta_legs = 1, {0: 1, 1: 2}
        lhs_group_move, rhs_src_move = {1: 2}, {}
    else:
        grp_leg, delta_legs = 0, {0: 0, 1: 1}
        lhs_group_move, rhs_src_move = {}, {1: 2}

    def sys3(c):
        grp = cm.group(c)
        if algebra_first:
            return RewriteSystem([cm.source(c).on_leg(0), grp.on_leg(1), grp.on_leg(2)])
        return RewriteSystem([grp.on_leg(0), grp.on_leg(1), cm.source(c).on_leg(2)])

    def defect(c, name):
        src = cm.source(c)
        img = cm.images(c)
        x = img[src.sym(name)]
        delta = {s.on_leg(grp_leg): p.map_legs(delta_legs) for s, p in coproduct(c).items()}
        rhs = x.map_legs(rhs_src_move).substitute(delta)
        if algebra_first:
            # group factor moves to the outer leg, algebra factor is coacted again
            moved = x.map_legs(lhs_group_move)
            lhs = moved.substitute(img)
        else:
            # algebra factor moves to leg 2 and is coacted with its group part on leg 1
            moved = x.map_legs({1: 2})
            inner = {s.on_leg(2): p.map_legs({0: 1, 1: 2}) for s, p in img.items()}
            lhs = moved.substitute(inner)
        return lhs - rhs

    reports = []
    names = [g.name for g in cm.source(ctxs[0]).generators]
    for name in names:
        reports.append(
            is_zero(lambda c, name=name: defect(c, name), sys3, ctxs, check_id=f"{check_id}:coassoc:{name}", tol=tol)
        )

        def counit_poly(c, name=name):
            src = cm.source(c)
            values = {s.on_leg(grp_leg): complex(counit(c)[s.name]) for s in cm.group(c).generators}
            x = cm.images(c)[src.sym(name)]
            return x.evaluate(values) - src[name]

        reports.append(
            is_zero(counit_poly, lambda c: RewriteSystem([cm.source(c)]), ctxs, check_id=f"{check_id}:counit:{name}", tol=tol)
        )
    return CheckReport.combine(check_id, reports, map=cm.name)


def invariance_check(cm: CoactionMap, elem: PolyFactory, ctxs, *, tol=1e-12, check_id=None, on_incomplete="raise") -> CheckReport:
    """phi(elem) - 1 (x) elem reduces to zero.

    With ``on_incomplete="report"`` a missing rewrite rule yields a
    failing report naming the pair instead of raising.
    """
    check_id = check_id or f"invariant:{cm.name}"
    try:
        rep = is_zero(lambda c: cm.apply(elem(c), c) - elem(c), cm.system, ctxs, check_id=check_id, tol=tol)
    except IncompletePresentationError as exc:
        if on_incomplete == "raise":
            raise
        return CheckReport(
            check_id, float("inf"), tol, meta={"status": "incomplete-presentation", "pair": "*".join(exc.pair)}
        )
    rep.meta["map"] = cm.name
    return rep


def confluence_check(pres_factory, ctxs, *, tol=1e-12, check_id=None) -> CheckReport:
    """Every overlap x*y*z with rules on (x,y) and (y,z) resolves.

    Both one-step reductions are carried to normal form and compared.
    """
    p0 = pres_factory(ctxs[0])
    check_id = check_id or f"confluence:{p0.name}"
    pairs = list(p0.rules)
    overlaps = [(x, y, z) for (x, y) in pairs for (y2, z) in pairs if y2 == y]
    reports = []
    for x, y, z in overlaps:

        def diff(c, x=x, y=y, z=z):
            pres = pres_factory(c)
            sx, sy, sz = (pres.sym(s.name) for s in (x, y, z))
            left = pres.rules[(sx, sy)] * NcPoly.gen(sz)
            right = NcPoly.gen(sx) * pres.rules[(sy, sz)]
            return left - right

        reports.append(
            is_zero(
                diff,
                lambda c: RewriteSystem([pres_factory(c)]),
                ctxs,
                check_id=f"{check_id}:{x.name}*{y.name}*{z.name}",
                tol=tol,
            )
        )
    return CheckReport.combine(check_id, reports, overlaps=len(overlaps))


# -- text format
#
#   name: alpha
#   generators: alpha+ alpha Q Qi
#   odd: B B+
#   alpha*alpha+ -> alpha+*alpha + Qi*Qi
#   Q*alpha -> q^-1 alpha*Q
#
# Scalars: numbers, q, lam, omega, mu, i, sqrt(...), ^, *, /, parentheses.

_SCALAR_NAMES = {"q", "lam", "omega", "mu", "i"}
_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][-+]?\d+)?|\.\d+)|(?P<arrow>->)|(?P<id>[A-Za-z_][A-Za-z0-9_']*\+?)|(?P<op>[-+*/^()]))"
)


@dataclass
class _Tok:
    kind: str
    text: str
    col: int


def _tokenize(text, line_no, col0=0):
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1 + col0
            raise PresentationSyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r}", line_no, col)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append(_Tok(kind, m.group(kind), start + 1 + col0))
        pos = m.end()
    return toks


class _Parser:
    """Recursive descent over one rule line."""

    def __init__(self, toks, line_no, gens, line_len):
        self.toks = toks
        self.i = 0
        self.line = line_no
        self.gens = gens
        self.end_col = line_len + 1

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def err(self, msg, tok=None):
        tok = tok or self.peek()
        raise PresentationSyntaxError(msg, self.line, tok.col if tok else self.end_col)

    def take(self, text=None, kind=None):
        tok = self.peek()
        if tok is None or (text and tok.text != text) or (kind and tok.kind != kind):
            self.err(f"expected {text or kind}")
        self.i += 1
        return tok

    def _split_id(self, tok):
        """Identifiers may swallow a trailing '+' that is really a sum."""
        if tok is not None and tok.kind == "id" and tok.text.endswith("+") and tok.text not in self.gens:
            base = tok.text[:-1]
            self.toks[self.i] = _Tok("id", base, tok.col)
            self.toks.insert(self.i + 1, _Tok("op", "+", tok.col + len(base)))
        return self.peek()

    def lhs(self):
        t1 = self._split_id(self.peek())
        if t1 is None or t1.kind != "id" or t1.text not in self.gens:
            self.err("rule must start with a generator")
        self.i += 1
        self.take("*")
        t2 = self._split_id(self.peek())
        if t2 is None or t2.kind != "id" or t2.text not in self.gens:
            self.err("expected a generator after '*'")
        self.i += 1
        return t1.text, t2.text

    def sum(self):
        terms = []
        sign = 1.0
        tok = self.peek()
        if tok is not None and tok.text in "+-" and tok.kind == "op":
            sign = -1.0 if tok.text == "-" else 1.0
            self.i += 1
        while True:
            coef, word = self.term()
            terms.append((_scale(coef, sign), word))
            tok = self.peek()
            if tok is None:
                break
            if tok.kind == "op" and tok.text in "+-":
                sign = -1.0 if tok.text == "-" else 1.0
                self.i += 1
                continue
            self.err(f"unexpected token {tok.text!r}")
        return terms

    def term(self):
        coefs, word = [], []
        while True:
            tok = self._split_id(self.peek())
            if tok is None or (tok.kind == "op" and tok.text in "+-)"):
                break
            if tok.kind == "op" and tok.text == "*":
                if not coefs and not word:
                    self.err("dangling '*'")
                self.i += 1
                continue
            if tok.kind == "op" and tok.text == "/":
                self.i += 1
                f = self.power()
                coefs.append(lambda c, f=f: 1.0 / f(c))
                continue
            if tok.kind == "id" and tok.text in self.gens:
                self.i += 1
                word.append(tok.text)
                continue
            coefs.append(self.power())
        if not coefs and not word:
            self.err("empty term")
        return _product(coefs), tuple(word)

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok is not None and tok.text == "^":
            self.i += 1
            neg = False
            if self.peek() is not None and self.peek().text == "-":
                self.i += 1
                neg = True
            e = self.atom()
            return lambda c, b=base, e=e, n=neg: b(c) ** (-e(c) if n else e(c))
        return base

    def atom(self):
        tok = self.peek()
        if tok is None:
            self.err("unexpected end of line")
        if tok.kind == "num":
            self.i += 1
            v = float(tok.text)
            return lambda c, v=v: v
        if tok.kind == "op" and tok.text == "(":
            self.i += 1
            inner = self.expr()
            self.take(")")
            return inner
        if tok.kind == "id" and tok.text == "sqrt":
            self.i += 1
            self.take("(")
            inner = self.expr()
            self.take(")")
            return lambda c, f=inner: cmath.sqrt(f(c))
        if tok.kind == "id" and tok.text in _SCALAR_NAMES:
            self.i += 1
            return _SCALARS[tok.text]
        if tok.kind == "id" and tok.text in self.gens:
            self.err(f"generator {tok.text!r} inside a scalar expression")
        self.err(f"unknown symbol {tok.text!r}")

    def expr(self):
        """Scalar expression with + and - inside parentheses."""
        sign = 1.0
        tok = self.peek()
        if tok is not None and tok.text == "-":
            self.i += 1
            sign = -1.0
        parts = [(sign, self.mul())]
        while self.peek() is not None and self.peek().text in "+-" and self.peek().kind == "op":
            s = -1.0 if self.take().text == "-" else 1.0
            parts.append((s, self.mul()))
        return lambda c, parts=parts: sum(s * f(c) for s, f in parts)

    def mul(self):
        f = self.power()
        while self.peek() is not None and self.peek().text in "*/":
            op = self.take().text
            g = self.power()
            f = (lambda c, f=f, g=g: f(c) * g(c)) if op == "*" else (lambda c, f=f, g=g: f(c) / g(c))
        return f


_SCALARS = {
    "q": lambda c: c.q,
    "lam": lambda c: c.lam,
    "omega": lambda c: c.omega,
    "mu": lambda c: c.mu,
    "i": lambda c: 1j,
}


def _product(fs):
    if not fs:
        return lambda c: 1.0
    return lambda c: np.prod([f(c) for f in fs])


def _scale(f, s):
    return lambda c: s * f(c)


@dataclass(frozen=True)
class PresentationTemplate:
    """A parsed presentation whose coefficients are functions of q."""

    name: str
    generators: tuple  # (name, parity)
    rules: tuple  # ((g, h), ((coef_fn, word), ...))
    source: str = ""

    def at(self, ctx: QContext, leg: int = 0) -> AlgebraPresentation:
        syms = {n: GenSymbol(n, p, leg) for n, p in self.generators}
        rules = {}
        for (g, h), terms in self.rules:
            rules[(syms[g], syms[h])] = NcPoly(
                (tuple(syms[w] for w in word), complex(f(ctx))) for f, word in terms
            )
        return AlgebraPresentation(self.name, tuple(syms[n] for n, _ in self.generators), rules, ctx)

    __call__ = at


def parse_presentation(text: str) -> PresentationTemplate:
    """Parse the rule DSL; errors carry line and column."""
    name = "anonymous"
    gens: list[str] = []
    odd: set = set()
    raw_rules = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        head = re.match(r"\s*(name|generators|odd)\s*:(.*)$", line)
        if head:
            key, val = head.group(1), head.group(2)
            if key == "name":
                name = val.strip()
            elif key == "generators":
                gens = val.split()
                if len(set(gens)) != len(gens):
                    raise PresentationSyntaxError("duplicate generator", line_no, head.start(2) + 1)
                for g in gens:
                    if g in _SCALAR_NAMES or g == "sqrt" or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*\+?", g):
                        col = line.index(g) + 1
                        raise PresentationSyntaxError(f"invalid generator name {g!r}", line_no, col)
            else:
                odd |= set(val.split())
            continue
        if "->" not in line:
            raise PresentationSyntaxError("expected 'g*h -> ...' or a header", line_no, 1)
        raw_rules.append((line_no, line))
    if not gens:
        raise PresentationSyntaxError("missing 'generators:' header", 1, 1)
    unknown = odd - set(gens)
    if unknown:
        raise PresentationSyntaxError(f"odd generator(s) not declared: {sorted(unknown)}", 1, 1)
    gen_set = set(gens)
    rules = []
    seen = set()
    for line_no, line in raw_rules:
        toks = _tokenize(line, line_no)
        p = _Parser(toks, line_no, gen_set, len(line))
        g, h = p.lhs()
        p.take(kind="arrow")
        if p.peek() is None:
            p.err("missing right-hand side")
        terms = p.sum()
        if (g, h) in seen:
            raise PresentationSyntaxError(f"second rule for {g}*{h}", line_no, 1)
        seen.add((g, h))
        rules.append(((g, h), tuple(terms)))
    return PresentationTemplate(name, tuple((g, int(g in odd)) for g in gens), tuple(rules), text)


# -- catalog

_CATALOG_TEXT = {
    "alpha-osc": """
name: alpha-osc
generators: alpha+ alpha Q Qi
alpha*alpha+ -> alpha+*alpha + Qi*Qi
Q*alpha -> q^-1 alpha*Q
Q*alpha+ -> q alpha+*Q
Qi*alpha -> q alpha*Qi
Qi*alpha+ -> q^-1 alpha+*Qi
Q*Qi -> 1
Qi*Q -> 1
""",
    "A-osc": """
name: A-osc
generators: A+ A Q Qi
A*A+ -> q^2 A+*A + 1
Q*A -> q^-1 A*Q
Q*A+ -> q A+*Q
Qi*A -> q A*Qi
Qi*A+ -> q^-1 A+*Qi
Q*Qi -> 1
Qi*Q -> 1
""",
    "a-osc": """
name: a-osc
generators: a+ a Q Qi
a*a+ -> q a+*a + Qi
Q*a -> q^-1 a*Q
Q*a+ -> q a+*Q
Qi*a -> q a*Qi
Qi*a+ -> q^-1 a+*Qi
Q*Qi -> 1
Qi*Q -> 1
""",
    "A-osc-renamed": """
name: A-osc-renamed
generators: A+ A
A*A+ -> q A+*A + 1
""",
    "suq2-algebra": """
name: suq2-algebra
generators: Xm Xp K Ki
Xp*Xm -> Xm*Xp + (1/lam) K*K - (1/lam) Ki*Ki
K*Xp -> q Xp*K
K*Xm -> q^-1 Xm*K
Ki*Xp -> q^-1 Xp*Ki
Ki*Xm -> q Xm*Ki
K*Ki -> 1
Ki*K -> 1
""",
    "suq11-group": """
name: suq11-group
generators: b b+ a a+
b+*b -> b*b+
a*b -> q b*a
a*b+ -> q b+*a
a+*b -> q^-1 b*a+
a+*b+ -> q^-1 b+*a+
a*a+ -> 1 + q b*b+
a+*a -> 1 + q^-1 b*b+
""",
    "suq11-super-group": """
name: suq11-super-group
generators: beta+ beta a+ a
odd: beta beta+
beta*beta+ -> -q^2 beta+*beta
beta*beta -> 0
beta+*beta+ -> 0
a*beta -> q beta*a
a*beta+ -> q beta+*a
a+*beta -> q^-1 beta*a+
a+*beta+ -> q^-1 beta+*a+
a*a+ -> 1 - q^2 beta+*beta
a+*a -> 1 - beta+*beta
""",
    "super-osc": """
name: super-osc
generators: A+ B+ B A
odd: B B+
A*A+ -> q^2 A+*A + 1
A*B+ -> q B+*A
A*B -> q B*A
B*A+ -> q A+*B
B+*A+ -> q A+*B+
B*B+ -> -B+*B + 1 + (q^2 - 1) A+*A
B*B -> 0
B+*B+ -> 0
""",
    "k-algebra": """
name: k-algebra
generators: beta alpha delta gamma
alpha*beta -> q^-2 beta*alpha
delta*alpha -> alpha*delta
delta*beta -> beta*delta + q^-3 lam beta*alpha
gamma*delta -> delta*gamma + q^-3 lam alpha*gamma
gamma*beta -> beta*gamma - q^-1 lam alpha*delta + q^-1 lam alpha*alpha
gamma*alpha -> q^-2 alpha*gamma
""",
    "osp-plane": """
name: osp-plane
generators: b a xi
odd: xi
xi*a -> q^-1 a*xi
xi*b -> q b*xi
a*b -> b*a + mu xi*xi
""",
    "osp-subalgebra": """
name: osp-subalgebra
generators: T12 T32 T13 T31
odd: T12 T32
T13*T12 -> q^-1 T12*T13
T13*T32 -> q T32*T13
T31*T12 -> q^-1 T12*T31
T31*T32 -> q T32*T31
T31*T13 -> T13*T31
T32*T12 -> -q^-1 T12*T32 + lam q^(-0.5) T13*T31
""",
}

CATALOG = {name: parse_presentation(text) for name, text in _CATALOG_TEXT.items()}


def presentation(name: str) -> PresentationTemplate:
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown presentation {name!r}; known: {sorted(CATALOG)}") from None


# -- coaction catalog


def _sqrt_lam(ctx):
    # principal branch: imaginary for q < 1
    return cmath.sqrt(ctx.lam)


def psi_oscillator_suq2() -> CoactionMap:
    """psi(alpha) = alpha q^-J + sqrt(lam) q^-N X+ and friends; algebra leg first."""
    src, grp = CATALOG["alpha-osc"], CATALOG["suq2-algebra"]

    def images(c):
        s, g = src.at(c, 0), grp.at(c, 1)
        r = _sqrt_lam(c)
        return {
            s.sym("alpha"): s["alpha"] * g["Ki"] + r * s["Qi"] * g["Xp"],
            s.sym("alpha+"): s["alpha+"] * g["Ki"] + r * s["Qi"] * g["Xm"],
            s.sym("Q"): s["Q"] * g["Ki"],
            s.sym("Qi"): s["Qi"] * g["K"],
        }

    return CoactionMap(
        "psi-osc-suq2",
        lambda c: src.at(c, 0),
        lambda c: RewriteSystem([src.at(c, 0), grp.at(c, 1)]),
        images,
        ("algebra", "group"),
        lambda c: grp.at(c, 0),
    )


def suq2_coproduct(convention: str = "standard"):
    """Two candidate coproducts of su_q(2) on legs 0 and 1.

    ``standard``: Delta(X+-) = X+- (x) q^-J + q^J (x) X+-;
    ``flipped``: Delta(X+-) = X+- (x) q^J + q^-J (x) X+-.
    """
    grp = CATALOG["suq2-algebra"]

    def delta(c):
        g0, g1 = grp.at(c, 0), grp.at(c, 1)
        left, right = ("K", "Ki") if convention == "standard" else ("Ki", "K")
        out = {g0.sym(k): g0[k] * g1[k] for k in ("K", "Ki")}
        for x in ("Xp", "Xm"):
            out[g0.sym(x)] = g0[x] * g1[right] + g0[left] * g1[x]
        return out

    return delta


def suq2_counit(c):
    return {"K": 1.0, "Ki": 1.0, "Xp": 0.0, "Xm": 0.0}


def psi_oscillator_suq11() -> CoactionMap:
    """psi(A) = aA + bA+, psi(A+) = a+A+ + b+A; group leg first."""
    src, grp = CATALOG["A-osc-renamed"], CATALOG["suq11-group"]

    def images(c):
        g, s = grp.at(c, 0), src.at(c, 1)
        return {
            s.sym("A"): g["a"] * s["A"] + g["b"] * s["A+"],
            s.sym("A+"): g["a+"] * s["A+"] + g["b+"] * s["A"],
        }

    return CoactionMap(
        "psi-osc-suq11",
        lambda c: src.at(c, 1),
        lambda c: RewriteSystem([grp.at(c, 0), src.at(c, 1)]),
        images,
        ("group", "algebra"),
        lambda c: grp.at(c, 0),
    )


def phi_super_oscillator(signs=(1, 1)) -> CoactionMap:
    """(A, B) -> T (A, B) for SU_q(1|1) with d = a(1 + beta+ beta), gamma = a beta+ a.

    The adjoint images carry the signs ``signs`` on their odd parts;
    the consistent choice is found by :func:`select_super_signs`.
    """
    src, grp = CATALOG["super-osc"], CATALOG["suq11-super-group"]
    s1, s2 = signs

    def images(c):
        g, s = grp.at(c, 0), src.at(c, 1)
        a, ad, be, bed = g["a"], g["a+"], g["beta"], g["beta+"]
        d = a * (1 + bed * be)
        dd = (1 + bed * be) * ad
        gam = a * bed * a
        gamd = ad * be * ad
        return {
            s.sym("A"): a * s["A"] + be * s["B"],
            s.sym("B"): gam * s["A"] + d * s["B"],
            s.sym("A+"): ad * s["A+"] + s1 * bed * s["B+"],
            s.sym("B+"): s2 * gamd * s["A+"] + dd * s["B+"],
        }

    return CoactionMap(
        f"phi-super{tuple(signs)}",
        lambda c: src.at(c, 1),
        lambda c: RewriteSystem([grp.at(c, 0), src.at(c, 1)]),
        images,
        ("group", "algebra"),
        lambda c: grp.at(c, 0),
        {"signs": signs},
    )


def super_hamiltonian(c):
    s = CATALOG["super-osc"].at(c, 1)
    return s["A+"] * s["A"] + s["B+"] * s["B"]


def select_super_signs(ctxs):
    """Brute force over the odd-part signs of the adjoint images."""
    table = {}
    for signs in itertools.product((1, -1, 1j, -1j), repeat=2):
        cm = phi_super_oscillator(signs)
        cov = coaction_check(cm, ctxs)
        inv = invariance_check(cm, super_hamiltonian, ctxs)
        table[signs] = (cov.residual, inv.residual)
    best = min(table, key=lambda s: max(table[s]))
    return best, table


def identity_coaction(template_name: str = "alpha-osc") -> CoactionMap:
    """v -> v (x) 1 over the su_q(2) group leg; trivially coassociative."""
    src, grp = CATALOG[template_name], CATALOG["suq2-algebra"]
    return CoactionMap(
        f"identity-{template_name}",
        lambda c: src.at(c, 0),
        lambda c: RewriteSystem([src.at(c, 0), grp.at(c, 1)]),
        lambda c: {g: NcPoly.gen(g) for g in src.at(c, 0).generators},
        ("algebra", "group"),
        lambda c: grp.at(c, 0),
    )


def osp_plane_coaction() -> CoactionMap:
    """X -> T X with only the four-element subalgebra of T available.

    Entries outside that subalgebra (T11, T21, ...) have no exchange
    rules, so reductions stop with an incomplete-presentation error.
    """
    src = CATALOG["osp-plane"]
    sub = CATALOG["osp-subalgebra"]
    extra = ("T11", "T21", "T22", "T23", "T33")

    def group(c):
        g = sub.at(c, 0)
        syms = g.generators + tuple(GenSymbol(n, 1 if n in ("T21", "T23") else 0, 0) for n in extra)
        return AlgebraPresentation("osp-T-partial", syms, g.rules, c)

    def images(c):
        g, s = group(c), src.at(c, 1)
        T = lambda i, j: NcPoly.gen(g.sym(f"T{i}{j}"))
        X = [s["a"], s["xi"], s["b"]]
        return {
            s.sym(name): sum((T(i + 1, j + 1) * X[j] for j in range(3)), NcPoly())
            for i, name in enumerate(("a", "xi", "b"))
        }

    return CoactionMap(
        "osp-plane-T",
        lambda c: src.at(c, 1),
        lambda c: RewriteSystem([group(c), src.at(c, 1)]),
        images,
        ("group", "algebra"),
        group,
    )


# -- distinguished elements


def oscillator_z(c, leg: int = 0):
    """z = alpha+ alpha - [N; q^-2], written with Qi = q^-N."""
    p = CATALOG["alpha-osc"].at(c, leg)
    return p["alpha+"] * p["alpha"] - (1 - p["Qi"] * p["Qi"]) * (1.0 / (1 - c.q**-2))


def k_c1(c):
    p = CATALOG["k-algebra"].at(c)
    return p["alpha"] * (1.0 / c.q) + p["delta"] * c.q


def k_c2(c):
    """alpha delta - q^2 gamma beta: central, unlike the beta gamma order."""
    p = CATALOG["k-algebra"].at(c)
    return p["alpha"] * p["delta"] - p["gamma"] * p["beta"] * (c.q**2)


def k_c2_literal(c):
    p = CATALOG["k-algebra"].at(c)
    return p["alpha"] * p["delta"] - p["beta"] * p["gamma"] * (c.q**2)


def osp_c2(c, leg: int = 0):
    p = CATALOG["osp-plane"].at(c, leg)
    q = c.q
    norm = q * q * (q**1.5 + q**-1.5)
    return (p["xi"] * p["xi"] * (q / c.omega) - p["a"] * p["b"]) * (c.lam / norm)


def osp_c2_ba(c, leg: int = 0):
    p = CATALOG["osp-plane"].at(c, leg)
    q = c.q
    norm = q * q * (q**1.5 + q**-1.5)
    return (p["xi"] * p["xi"] * (1.0 / (q * c.omega)) - p["b"] * p["a"]) * (c.lam / norm)
