"""Normal-form arithmetic in the dense *-subalgebra of E_n.

Elements are finite sums ``sum c * v_alpha v_beta^*`` stored as a map
``(alpha, beta) -> c``.  Products reduce with ``v_i^* v_j = delta_ij I``:

    (v_a v_b*)(v_c v_d*) = v_{a c'} v_d*   if c = b c'
                         = v_a v_{d b'}*   if b = c b'
                         = 0               otherwise

The rule is confluent, so equal elements have equal term maps.
"""
from __future__ import annotations

from typing import Mapping

from .representation import Representation
from .scalars import ONE, Matrix, Number, Scalar, is_unitary, matrix
from .words import SparseVector, Word, check_word, length_lex_key, strip_prefix


class AlgebraElement:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping = ()):
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ValueError("n must be a positive integer")
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (alpha, beta), c in items:
            key = (check_word(alpha, n), check_word(beta, n))
            c = Scalar.coerce(c)
            s = acc.get(key, None)
            s = c if s is None else s + c
            if s:
                acc[key] = s
            else:
                acc.pop(key, None)
        self.n = n
        self.terms = acc

    @classmethod
    def unit(cls, n: int) -> "AlgebraElement":
        return cls(n, {((), ()): ONE})

    @classmethod
    def zero(cls, n: int) -> "AlgebraElement":
        return cls(n)

    @classmethod
    def generator(cls, n: int, i: int) -> "AlgebraElement":
        return cls(n, {((i,), ()): ONE})

    @classmethod
    def monomial(cls, n: int, alpha: Word, beta: Word, coef: Number = 1) -> "AlgebraElement":
        return cls(n, {(tuple(alpha), tuple(beta)): coef})

    def _same(self, other: "AlgebraElement"):
        if not isinstance(other, AlgebraElement):
            raise TypeError("expected an AlgebraElement")
        if other.n != self.n:
            raise ValueError("rank mismatch")

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._same(other)
        return AlgebraElement(self.n, list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> "AlgebraElement":
        return self.scale(-1)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scale(self, c: Number) -> "AlgebraElement":
        c = Scalar.coerce(c)
        return AlgebraElement(self.n, [(k, c * v) for k, v in self.terms.items()])

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return nf_mul(self, other)
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    def adjoint(self) -> "AlgebraElement":
        return nf_adjoint(self)

    def sorted_terms(self):
        return sorted(
            self.terms.items(),
            key=lambda kv: (length_lex_key(kv[0][0]), length_lex_key(kv[0][1])),
        )

    def __repr__(self) -> str:
        if not self.terms:
            return f"AlgebraElement(n={self.n}, 0)"
        parts = []
        for (a, b), c in self.sorted_terms():
            mono = "".join(f"v{x}" for x in a) + "".join(f"v{x}*" for x in reversed(b))
            parts.append(f"({c}){mono or 'I'}")
        return f"AlgebraElement(n={self.n}, {' + '.join(parts)})"


def _mul_monomials(a: Word, b: Word, c: Word, d: Word):
    rest = strip_prefix(b, c)
    if rest is not None:
        return a + rest, d
    rest = strip_prefix(c, b)
    if rest is not None:
        return a, d + rest
    return None


def nf_mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    if x.n != y.n:
        raise ValueError("rank mismatch")
    acc: dict = {}
    for (a, b), c1 in x.terms.items():
        for (c, d), c2 in y.terms.items():
            key = _mul_monomials(a, b, c, d)
            if key is None:
                continue
            coef = c1 * c2
            prev = acc.get(key)
            acc[key] = coef if prev is None else prev + coef
    return AlgebraElement(x.n, acc)


def nf_adjoint(x: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(x.n, {(b, a): c.conjugate() for (a, b), c in x.terms.items()})


def defect_element(n: int) -> AlgebraElement:
    """``p_n = I - sum_i v_i v_i^*``."""
    terms = {((), ()): ONE}
    for i in range(1, n + 1):
        terms[((i,), (i,))] = -ONE
    return AlgebraElement(n, terms)


def gamma_u(x: AlgebraElement, u: Matrix) -> AlgebraElement:
    """Quasifree automorphism: ``v_i -> sum_j v_j u[j][i]`` extended multiplicatively."""
    u = matrix(u)
    n = x.n
    if len(u) != n or any(len(r) != n for r in u):
        raise ValueError(f"U must be {n}x{n}")
    if not is_unitary(u):
        raise ValueError("not unitary")
    images = [
        AlgebraElement(n, {((j + 1,), ()): u[j][i] for j in range(n) if u[j][i]})
        for i in range(n)
    ]
    cache: dict = {}

    def image_of_word(w: Word) -> AlgebraElement:
        if w not in cache:
            out = AlgebraElement.unit(n)
            for letter in w:
                out = nf_mul(out, images[letter - 1])
            cache[w] = out
        return cache[w]

    acc = AlgebraElement.zero(n)
    for (a, b), c in x.terms.items():
        term = nf_mul(image_of_word(a), nf_adjoint(image_of_word(b))).scale(c)
        acc = acc + term
    return acc


def evaluate(x: AlgebraElement, rep: Representation, xi: SparseVector) -> SparseVector:
    """Apply the represented element to a name-keyed vector, exactly."""
    if x.n != rep.n:
        raise ValueError("rank mismatch")
    out = SparseVector.zero()
    adj_cache: dict = {}
    for (a, b), c in x.terms.items():
        v = adj_cache.get(b)
        if v is None:
            v = xi
            for letter in b:
                if not v:
                    break
                v = rep.apply_generator_adjoint(letter, v)
            adj_cache[b] = v
        for letter in reversed(a):
            if not v:
                break
            v = rep.apply_generator(letter, v)
        out = out + v.scale(c)
    return out


