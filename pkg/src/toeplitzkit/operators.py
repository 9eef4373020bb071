"""Operator expressions on the common rank space l2(N).

Atoms are generators and their adjoints for a given representation, basis
unitaries, and exact scalars.  ``Sum`` and ``Prod`` combine them; ``Prod``
applies its rightmost factor first.  ``DirectSum`` acts blockwise when the
rank space is split along summand layouts.  Every node can be evaluated on a
finitely supported rank vector and has a syntactic adjoint.
"""
from __future__ import annotations

from dataclasses import dataclass

from .basismaps import BasisUnitary
from .layout import BasisName, Layout
from .representation import Representation
from .scalars import ONE, ZERO, Number, Scalar
from .words import SparseVector


class OperatorExpr:
    def apply(self, vec: SparseVector) -> SparseVector:
        raise NotImplementedError

    def adjoint(self) -> "OperatorExpr":
        raise NotImplementedError

    def __mul__(self, other: "OperatorExpr") -> "OperatorExpr":
        return prod(self, other)

    def __add__(self, other: "OperatorExpr") -> "OperatorExpr":
        return add(self, other)

    def atoms(self):
        yield self


@dataclass(frozen=True)
class Gen(OperatorExpr):
    rep: Representation
    i: int

    def apply(self, vec):
        return self.rep.gen_on_ranks(self.i, vec) if vec else vec

    def adjoint(self):
        return GenAdj(self.rep, self.i)


@dataclass(frozen=True)
class GenAdj(OperatorExpr):
    rep: Representation
    i: int

    def apply(self, vec):
        return self.rep.adj_on_ranks(self.i, vec) if vec else vec

    def adjoint(self):
        return Gen(self.rep, self.i)


@dataclass(frozen=True)
class BasisU(OperatorExpr):
    W: BasisUnitary
    dagger: bool = False

    def apply(self, vec):
        w = self.W.adjoint() if self.dagger else self.W
        return w.apply(vec)

    def adjoint(self):
        return BasisU(self.W, not self.dagger)


@dataclass(frozen=True)
class Const(OperatorExpr):
    c: Scalar

    def __post_init__(self):
        object.__setattr__(self, "c", Scalar.coerce(self.c))

    def apply(self, vec):
        return vec.scale(self.c)

    def adjoint(self):
        return Const(self.c.conjugate())


@dataclass(frozen=True)
class Sum(OperatorExpr):
    terms: tuple

    def apply(self, vec):
        out = SparseVector.zero()
        for t in self.terms:
            out = out + t.apply(vec)
        return out

    def adjoint(self):
        return Sum(tuple(t.adjoint() for t in self.terms))

    def atoms(self):
        for t in self.terms:
            yield from t.atoms()


@dataclass(frozen=True)
class Prod(OperatorExpr):
    factors: tuple

    def apply(self, vec):
        for f in reversed(self.factors):
            if not vec:
                break
            vec = f.apply(vec)
        return vec

    def adjoint(self):
        return Prod(tuple(f.adjoint() for f in reversed(self.factors)))

    def atoms(self):
        for f in self.factors:
            yield from f.atoms()


@dataclass(frozen=True)
class DirectSum(OperatorExpr):
    """``X_1 (+) X_2 (+) ...`` with ``parts[k] = (source_k, target_k, X_k)``."""

    source: Layout
    target: Layout
    parts: tuple

    def __post_init__(self):
        src = self.parts[0][0]
        tgt = self.parts[0][1]
        for a, b, _ in self.parts[1:]:
            src, tgt = src.concat(a), tgt.concat(b)
        if src != self.source or tgt != self.target:
            raise ValueError("summand layouts do not concatenate to the sum layouts")
        owner, s_off, t_off = [], [], []
        s = t = 0
        for k, (a, b, _) in enumerate(self.parts):
            s_off.append(s)
            t_off.append(t)
            owner.extend([k] * a.num_blocks)
            s += a.num_blocks
            t += b.num_blocks
        object.__setattr__(self, "_owner", tuple(owner))
        object.__setattr__(self, "_s_off", tuple(s_off))
        object.__setattr__(self, "_t_off", tuple(t_off))

    def apply(self, vec):
        pieces = [dict() for _ in self.parts]
        for r, c in vec.items():
            name = self.source.unrank(r)
            k = self._owner[name.block]
            local = self.parts[k][0].rank(BasisName(name.block - self._s_off[k], name.k, name.word))
            pieces[k][local] = c
        out = {}
        for k, piece in enumerate(pieces):
            if not piece:
                continue
            src_k, tgt_k, expr = self.parts[k]
            res = expr.apply(SparseVector._trusted(piece))
            for r, c in res.items():
                b = tgt_k.unrank(r)
                out[self.target.rank(BasisName(b.block + self._t_off[k], b.k, b.word))] = c
        return SparseVector._trusted(out)

    def adjoint(self):
        return DirectSum(
            self.target, self.source, tuple((b, a, x.adjoint()) for a, b, x in self.parts)
        )

    def atoms(self):
        for _, _, x in self.parts:
            yield from x.atoms()


def const(c: Number) -> Const:
    return Const(Scalar.coerce(c))


def scalar_value(x: OperatorExpr):
    """The scalar an expression denotes if it is a bare constant, else ``None``."""
    return x.c if isinstance(x, Const) else None


def prod(*factors: OperatorExpr) -> OperatorExpr:
    """Product with constant folding; rightmost factor acts first."""
    flat = []
    coef = ONE
    for f in factors:
        parts = f.factors if isinstance(f, Prod) else (f,)
        for p in parts:
            if isinstance(p, Const):
                coef = coef * p.c
            elif isinstance(p, BasisU) and p.W.is_identity():
                continue
            else:
                flat.append(p)
    if not coef:
        return Const(ZERO)
    if not flat:
        return Const(coef)
    if coef != ONE:
        flat.insert(0, Const(coef))
    if len(flat) == 1:
        return flat[0]
    return Prod(tuple(flat))


def add(*terms: OperatorExpr) -> OperatorExpr:
    """Sum with constant folding and zero elimination."""
    flat = []
    coef = ZERO
    for t in terms:
        parts = t.terms if isinstance(t, Sum) else (t,)
        for p in parts:
            if isinstance(p, Const):
                coef = coef + p.c
            else:
                flat.append(p)
    if not flat:
        return Const(coef)
    if coef:
        flat.append(Const(coef))
    if len(flat) == 1:
        return flat[0]
    return Sum(tuple(flat))


def identity_op() -> Const:
    return Const(ONE)


def apply_rank(x: OperatorExpr, r: int) -> SparseVector:
    return x.apply(SparseVector.basis(r))
