"""Endomorphisms of B(H) induced by Toeplitz families.

``alpha(a) = sum_i T_i a T_i*`` is computed exactly on finite-rank operators
written in the common rank basis.  Equality of two such endomorphisms is
decided through scalar free equivalence (the commutant of B(H) is C, which
has IBN); conjugacy is decided where the structure allows and otherwise
reported as unknown.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .basismaps import IDENTITY, BasisUnitary, compose, phase_map
from .equivalence import (
    RELATION,
    SCALAR_EXACT,
    Check,
    Counterexample,
    FreeWitness,
    Inconclusive,
    QuasifreeWitness,
    Refuted,
    ScalarVerified,
    VerificationReport,
    check_same_space,
    scalar_free_check,
    verify_quasifree,
)
from .hilbert_modules import FDAlgebra, fd_to_k0, ibn
from .operators import OperatorExpr
from .representation import Representation
from .scalars import Matrix, Number, Scalar, is_unitary, mat_adjoint, mat_mul, matrix
from .symbolic import AlgebraElement, evaluate, gamma_u
from .words import SparseVector
from .wold import multiplicity


class SparseOperator:
    """Finite-rank operator ``sum c |k><b|`` on l2(N), keyed by ranks."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping = ()):
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (k, b), c in items:
            if k < 0 or b < 0:
                raise ValueError("ranks are nonnegative")
            c = Scalar.coerce(c)
            s = acc.get((k, b))
            s = c if s is None else s + c
            if s:
                acc[(k, b)] = s
            else:
                acc.pop((k, b), None)
        self.terms = acc

    @classmethod
    def rank_one(cls, k: int, b: int, c: Number = 1) -> "SparseOperator":
        return cls({(k, b): c})

    @classmethod
    def outer(cls, x: SparseVector, y: SparseVector) -> "SparseOperator":
        """``|x><y|``."""
        return cls([((p, q), cx * cy.conjugate()) for p, cx in x.items() for q, cy in y.items()])

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseOperator):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "SparseOperator") -> "SparseOperator":
        return SparseOperator(list(self.terms.items()) + list(other.terms.items()))

    def __sub__(self, other: "SparseOperator") -> "SparseOperator":
        return self + other.scale(-1)

    def scale(self, c: Number) -> "SparseOperator":
        c = Scalar.coerce(c)
        return SparseOperator([(kb, c * v) for kb, v in self.terms.items()])

    def __mul__(self, other: "SparseOperator") -> "SparseOperator":
        by_ket: dict = {}
        for (k, b), c in other.terms.items():
            by_ket.setdefault(k, []).append((b, c))
        out = []
        for (k, b), c in self.terms.items():
            for b2, c2 in by_ket.get(b, ()):
                out.append(((k, b2), c * c2))
        return SparseOperator(out)

    def adjoint(self) -> "SparseOperator":
        return SparseOperator([((b, k), c.conjugate()) for (k, b), c in self.terms.items()])

    def apply(self, vec: SparseVector) -> SparseVector:
        out: dict = {}
        for (k, b), c in self.terms.items():
            x = vec[b]
            if x:
                out[k] = out.get(k, Scalar.coerce(0)) + c * x
        return SparseVector(out)

    def sorted_items(self):
        return sorted(self.terms.items())

    def __repr__(self) -> str:
        body = " + ".join(f"({c})|{k}><{b}|" for (k, b), c in self.sorted_items())
        return f"SparseOperator({body or '0'})"


@dataclass(frozen=True)
class Endomorphism:
    rep: Representation

    @property
    def unital(self) -> bool:
        return multiplicity(self.rep) == 0

    def __call__(self, a: SparseOperator) -> SparseOperator:
        return endo_apply(self, a)


def endo_apply(alpha: Endomorphism, a: SparseOperator) -> SparseOperator:
    """``sum_i T_i a T_i*``, expanded termwise."""
    rep = alpha.rep
    size = rep.layout.size()
    if size is not None and any(max(kb) >= size for kb in a.terms):
        raise ValueError("operator is not supported on the representation space")
    images: dict = {}

    def img(i, r):
        if (i, r) not in images:
            images[(i, r)] = rep.gen_on_ranks(i, SparseVector.basis(r))
        return images[(i, r)]

    out = []
    for (k, b), c in a.terms.items():
        for i in range(1, rep.n + 1):
            for (p, q), z in SparseOperator.outer(img(i, k), img(i, b)).terms.items():
                out.append(((p, q), c * z))
    return SparseOperator(out)


# -- equality ------------------------------------------------------------------


@dataclass(frozen=True)
class Equal:
    witness: FreeWitness


@dataclass(frozen=True)
class NotEqual:
    reason: str
    operator: Optional[SparseOperator] = None
    alpha_image: Optional[SparseOperator] = None
    beta_image: Optional[SparseOperator] = None


@dataclass(frozen=True)
class DepthCertified:
    witness: object
    depth: int


def commutant_has_ibn() -> bool:
    """The commutant of B(H) is C; its IBN is read off K_0 like any other algebra."""
    return ibn(fd_to_k0(FDAlgebra((1,))))


def find_discrepancy(omega: Representation, tau: Representation, depth: int):
    """First rank-one ``|r><s|`` with ``alpha != beta``, ordered by ``(max(r, s), r, s)``."""
    names = len(omega.layout.names(depth))
    alpha, beta = Endomorphism(omega), Endomorphism(tau)
    pairs = sorted(((r, s) for r in range(names) for s in range(names)), key=lambda t: (max(t), t))
    for r, s in pairs:
        a = SparseOperator.rank_one(r, s)
        x, y = endo_apply(alpha, a), endo_apply(beta, a)
        if x != y:
            return a, x, y
    return None


def decide_endo_equal(omega: Representation, tau: Representation, depth: int = 3):
    if not commutant_has_ibn():
        raise AssertionError("C must have IBN")
    if omega.n != tau.n:
        return NotEqual(f"n = {omega.n} differs from m = {tau.n}; C has IBN")
    res = scalar_free_check(omega, tau, depth)
    if isinstance(res, ScalarVerified):
        return Equal(res.witness)
    if isinstance(res, Inconclusive):
        return DepthCertified(res.witness, depth)
    assert isinstance(res, Refuted)
    found = find_discrepancy(omega, tau, depth)
    reason = f"no scalar free witness: {res.counterexample.identity} fails at {res.counterexample.basis}"
    if found is None:
        return NotEqual(reason + "; no rank-one discrepancy within depth")
    return NotEqual(reason, *found)


# -- conjugacy -----------------------------------------------------------------


@dataclass(frozen=True)
class Conjugate:
    witness: QuasifreeWitness


@dataclass(frozen=True)
class NotConjugate:
    reason: str


@dataclass(frozen=True)
class Unknown:
    reason: str
    report: Optional[VerificationReport] = None


def _uniform_twist(rep: Representation) -> Optional[Matrix]:
    twists = {rep.effective_twist(b) for b in range(len(rep.blocks))}
    return twists.pop() if len(twists) == 1 else None


def pure_shift_witness(omega: Representation, tau: Representation) -> Optional[QuasifreeWitness]:
    """``W = D_omega D_tau*`` and ``U = B* A`` for twists ``A`` of omega and ``B`` of tau.

    Needs equal Fock counts and one twist per representation; returns ``None``
    otherwise.
    """
    if not (omega.is_pure_shift() and tau.is_pure_shift()) or omega.layout != tau.layout:
        return None
    a, b = _uniform_twist(omega), _uniform_twist(tau)
    if a is None or b is None:
        return None
    d_tau_adj = phase_map(tau.layout, {r: z.conjugate() for r, z in tau.conj})
    d_omega = phase_map(omega.layout, dict(omega.conj))
    W = compose(d_omega, d_tau_adj)
    W = IDENTITY if W.is_identity() else W
    return QuasifreeWitness(W, FreeWitness.from_matrix(mat_mul(mat_adjoint(b), a)))


def decide_endo_conjugate(
    omega: Representation,
    tau: Representation,
    witness: Optional[QuasifreeWitness] = None,
    depth: int = 4,
):
    if omega.n != tau.n:
        return NotConjugate(f"n = {omega.n} differs from m = {tau.n}")
    if witness is not None:
        if witness.U.flavor != "scalar":
            return Unknown("supplied witness has operator entries; conjugacy needs scalar U")
        report = verify_quasifree(omega, tau, witness, depth)
        if not report.passed:
            return Unknown("supplied witness fails verification", report)
        if omega.is_pure_shift() and tau.is_pure_shift():
            return Conjugate(witness)
        return DepthCertified(witness, depth)
    m_o, m_t = multiplicity(omega), multiplicity(tau)
    if m_o != m_t:
        return NotConjugate(f"multiplicities differ ({m_o} vs {m_t})")
    if omega.is_pure_shift() and tau.is_pure_shift():
        q = pure_shift_witness(omega, tau)
        if q is not None:
            return Conjugate(q)
        return Unknown("pure shift pair with blockwise twists; no basis-unitary witness built")
    return Unknown("essential parts present; no complete invariant available")


# -- intertwiners and gamma_U -----------------------------------------------------


def intertwiner_check(X: OperatorExpr, alpha: Endomorphism, depth: int) -> VerificationReport:
    """``X a e_b = alpha(a) X e_b`` for ``a = |k><c|`` and basis ``e_b``, all to depth."""
    rep = alpha.rep
    names = rep.layout.names(depth)
    count = len(names)
    basis = [SparseVector.basis(r) for r in range(count)]
    xe = [X.apply(e) for e in basis]
    t = [[rep.gen_on_ranks(i, e) for i in range(1, rep.n + 1)] for e in basis]
    label = "X a = alpha(a) X"
    first = None
    for k in range(count):
        for c in range(count):
            for b in range(count):
                lhs = xe[k] if b == c else SparseVector.zero()
                rhs = SparseVector.zero()
                for i in range(rep.n):
                    z = t[c][i].inner(xe[b])
                    if z:
                        rhs = rhs + t[k][i].scale(z)
                if lhs != rhs:
                    first = Counterexample(
                        f"{label} at a = |{names[k]}><{names[c]}|", b, str(names[b]), lhs, rhs
                    )
                    break
            if first:
                break
        if first:
            break
    return VerificationReport(depth, (Check(label, count, first is None),), first)


def laca_gamma_check(
    omega: Representation, tau: Representation, W: BasisUnitary, U: Matrix, depth: int
) -> VerificationReport:
    """``omega(v_i) = W tau(gamma_U(v_i)) W*`` on basis vectors, through the symbolic side."""
    U = matrix(U)
    if not is_unitary(U):
        raise ValueError("not unitary")
    check_same_space(omega, tau)
    n = omega.n
    gens = [gamma_u(AlgebraElement.generator(n, i), U) for i in range(1, n + 1)]
    w_adj = W.adjoint()
    names = omega.layout.names(depth)
    first = None
    for r in range(len(names)):
        e = SparseVector.basis(r)
        pulled = tau.to_names(w_adj.apply(e))
        for i in range(n):
            lhs = omega.gen_on_ranks(i + 1, e)
            rhs = W.apply(tau.to_ranks(evaluate(gens[i], tau, pulled)))
            if lhs != rhs and first is None:
                first = Counterexample(RELATION, r, str(names[r]), lhs, rhs)
    checks = (Check(RELATION, len(names), first is None), Check(SCALAR_EXACT, 0, True))
    return VerificationReport(depth, checks, first)
