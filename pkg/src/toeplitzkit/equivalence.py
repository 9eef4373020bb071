"""Free and quasifree equivalence: witnesses, verification, constructions.

All representations act on the common space l2(N) through their rank
enumerations.  A free witness ``U = [u_jk]`` for ``(omega, tau)`` asserts

    omega(v_i) = sum_j tau(v_j) u_ji,

and a quasifree witness ``(W, U)`` asserts

    omega(v_i) = sum_j W tau(v_j) W* u_ji.

Verification is exact on every basis vector of ``omega`` up to a depth; a
reported counterexample is an exact refutation of the witness.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from .basismaps import (
    IDENTITY,
    BasisDirectSum,
    BasisUnitary,
    compose,
    wold_matching,
)
from .operators import (
    BasisU,
    Const,
    DirectSum,
    Gen,
    GenAdj,
    OperatorExpr,
    add,
    prod,
)
from .representation import Representation
from .scalars import Matrix, identity, is_unitary, mat_mul, matrix
from .words import SparseVector
from .wold import multiplicity


# -- witnesses ---------------------------------------------------------------


@dataclass(frozen=True)
class FreeWitness:
    """``entries[j][k]`` is ``u_{j+1, k+1}``, an operator expression."""

    n: int
    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.entries)
        if len(rows) != self.n or any(len(r) != self.n for r in rows):
            raise ValueError(f"witness must be {self.n}x{self.n}")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_matrix(cls, m: Matrix) -> "FreeWitness":
        m = matrix(m)
        return cls(len(m), tuple(tuple(Const(x) for x in row) for row in m))

    @classmethod
    def identity(cls, n: int) -> "FreeWitness":
        return cls.from_matrix(identity(n))

    @property
    def flavor(self) -> str:
        scalar = all(isinstance(x, Const) for row in self.entries for x in row)
        return "scalar" if scalar else "bounded"

    def scalar_matrix(self) -> Optional[Matrix]:
        if self.flavor != "scalar":
            return None
        return tuple(tuple(x.c for x in row) for row in self.entries)

    @property
    def unitary_certified(self) -> Optional[bool]:
        """Exact ``U*U = UU* = I`` in M_n(C) for scalar witnesses; ``None`` otherwise."""
        m = self.scalar_matrix()
        return None if m is None else is_unitary(m)

    def entry(self, j: int, k: int) -> OperatorExpr:
        """1-based access to ``u_jk``."""
        return self.entries[j - 1][k - 1]


@dataclass(frozen=True)
class QuasifreeWitness:
    W: BasisUnitary
    U: FreeWitness


# -- reports ------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    identity: str
    basis_count: int
    passed: bool


@dataclass(frozen=True)
class Counterexample:
    identity: str
    rank: int
    basis: str
    lhs: Any
    rhs: Any


@dataclass(frozen=True)
class VerificationReport:
    verified_depth: int
    checks: tuple
    counterexample: Optional[Counterexample] = None

    @property
    def passed(self) -> bool:
        return self.counterexample is None and all(c.passed for c in self.checks)


# -- outcomes -------------------------------------------------------------------


@dataclass(frozen=True)
class Equivalent:
    witness: QuasifreeWitness


@dataclass(frozen=True)
class NotEquivalent:
    mult_omega: int
    mult_tau: int


@dataclass(frozen=True)
class ScalarVerified:
    """Scalar witness that holds on every vector, by construction of both families."""

    witness: FreeWitness
    depth: int
    report: VerificationReport


@dataclass(frozen=True)
class Inconclusive:
    """Scalar witness verified exactly up to ``depth`` only."""

    witness: FreeWitness
    depth: int
    report: VerificationReport


@dataclass(frozen=True)
class Refuted:
    counterexample: Counterexample
    candidate: Matrix = field(default=None)


# -- helpers ---------------------------------------------------------------------


def check_same_space(omega: Representation, tau: Representation):
    if omega.n != tau.n:
        raise ValueError("rank mismatch")
    if omega.layout.size() != tau.layout.size():
        raise ValueError("representations act on Hilbert spaces of different dimension")


def relation_rhs(tau: Representation, W: BasisUnitary, U: FreeWitness, i: int) -> OperatorExpr:
    """``sum_j W tau(v_j) W* u_ji``."""
    w = BasisU(W)
    return add(*(prod(w, Gen(tau, j), w.adjoint(), U.entry(j, i)) for j in range(1, tau.n + 1)))


RELATION = "omega(v_i) = sum_j W tau(v_j) W* u_ji"
UNITARY_LEFT = "sum_i u_ij* u_ik = delta_jk I"
UNITARY_RIGHT = "sum_i u_ji u_ki* = delta_jk I"
SCALAR_EXACT = "U unitary in M_n(C), exact"


def verify_quasifree(
    omega: Representation, tau: Representation, q: QuasifreeWitness, depth: int
) -> VerificationReport:
    check_same_space(omega, tau)
    n = omega.n
    if q.U.n != n:
        raise ValueError("rank mismatch")
    wop = BasisU(q.W)
    wadj = wop.adjoint()
    u = q.U.entries
    u_adj = tuple(tuple(x.adjoint() for x in row) for row in u)
    names = omega.layout.names(depth)
    ok = {RELATION: True, UNITARY_LEFT: True, UNITARY_RIGHT: True}
    first: Optional[Counterexample] = None

    def fail(label, r, lhs, rhs):
        nonlocal first
        ok[label] = False
        if first is None:
            first = Counterexample(label, r, str(names[r]), lhs, rhs)

    for r in range(len(names)):
        e = SparseVector.basis(r)
        # u_ik e and u_ki* e, reused by every identity below
        ue = [[u[a][b].apply(e) for b in range(n)] for a in range(n)]
        uae = [[u_adj[a][b].apply(e) for b in range(n)] for a in range(n)]
        for i in range(n):
            lhs = omega.gen_on_ranks(i + 1, e)
            rhs = SparseVector.zero()
            for j in range(n):
                v = ue[j][i]
                if v:
                    rhs = rhs + wop.apply(tau.gen_on_ranks(j + 1, wadj.apply(v)))
            if lhs != rhs:
                fail(RELATION, r, lhs, rhs)
        for j in range(n):
            for k in range(n):
                target = e if j == k else SparseVector.zero()
                left = SparseVector.zero()
                right = SparseVector.zero()
                for i in range(n):
                    left = left + u_adj[i][j].apply(ue[i][k])
                    right = right + u[j][i].apply(uae[k][i])
                if left != target:
                    fail(UNITARY_LEFT, r, left, target)
                if right != target:
                    fail(UNITARY_RIGHT, r, right, target)
    checks = [Check(label, len(names), passed) for label, passed in ok.items()]
    m = q.U.scalar_matrix()
    if m is not None:
        exact = is_unitary(m)
        checks.append(Check(SCALAR_EXACT, 0, exact))
        if not exact and first is None:
            adj = tuple(tuple(x.conjugate() for x in col) for col in zip(*m))
            first = Counterexample(SCALAR_EXACT, -1, "-", mat_mul(adj, m), identity(n))
    return VerificationReport(depth, tuple(checks), first)


def verify_free(
    omega: Representation, tau: Representation, U: FreeWitness, depth: int
) -> VerificationReport:
    return verify_quasifree(omega, tau, QuasifreeWitness(IDENTITY, U), depth)


# -- constructions --------------------------------------------------------------


def essential_free_witness(omega: Representation, tau: Representation) -> FreeWitness:
    """``u_jk = tau(v_j)* omega(v_k)`` for two essential representations."""
    check_same_space(omega, tau)
    if multiplicity(omega) or multiplicity(tau):
        raise ValueError("not essential")
    n = omega.n
    return FreeWitness(
        n,
        tuple(
            tuple(prod(GenAdj(tau, j), Gen(omega, k)) for k in range(1, n + 1))
            for j in range(1, n + 1)
        ),
    )


def invert_free_witness(U: FreeWitness) -> FreeWitness:
    """``U*``: entrywise adjoint of the transpose."""
    n = U.n
    return FreeWitness(
        n, tuple(tuple(U.entries[k][j].adjoint() for k in range(n)) for j in range(n))
    )


def compose_free_witness(U: FreeWitness, V: FreeWitness) -> FreeWitness:
    """Witness for ``omega ~ kappa`` from ``U: omega ~ tau`` and ``V: tau ~ kappa``.

    ``omega(v_i) = sum_k kappa(v_k) (VU)_ki``.
    """
    if U.n != V.n:
        raise ValueError("rank mismatch")
    n = U.n
    return FreeWitness(
        n,
        tuple(
            tuple(add(*(prod(V.entries[k][j], U.entries[j][i]) for j in range(n))) for i in range(n))
            for k in range(n)
        ),
    )


def invert_quasifree_witness(q: QuasifreeWitness) -> QuasifreeWitness:
    """``(W*, [W* u_kj* W])``."""
    w = BasisU(q.W)
    n = q.U.n
    entries = tuple(
        tuple(prod(w.adjoint(), q.U.entries[k][j].adjoint(), w) for k in range(n))
        for j in range(n)
    )
    return QuasifreeWitness(q.W.adjoint(), FreeWitness(n, entries))


def compose_quasifree_witness(q1: QuasifreeWitness, q2: QuasifreeWitness) -> QuasifreeWitness:
    """From ``q1: omega ~ tau`` and ``q2: tau ~ kappa`` build ``omega ~ kappa``.

    ``W' = W1 W2`` and ``t_ki = sum_j W1 v_kj W1* u_ji``.
    """
    if q1.U.n != q2.U.n:
        raise ValueError("rank mismatch")
    n = q1.U.n
    w1 = BasisU(q1.W)
    u, v = q1.U.entries, q2.U.entries
    entries = tuple(
        tuple(add(*(prod(w1, v[k][j], w1.adjoint(), u[j][i]) for j in range(n))) for i in range(n))
        for k in range(n)
    )
    return QuasifreeWitness(compose(q1.W, q2.W), FreeWitness(n, entries))


def direct_sum_witness(
    q1: QuasifreeWitness,
    q2: QuasifreeWitness,
    omegas: tuple,
    taus: tuple,
) -> QuasifreeWitness:
    """Witness for ``(omega1 (+) omega2, tau1 (+) tau2)`` from the summand witnesses."""
    (o1, o2), (t1, t2) = omegas, taus
    if not (o1.n == o2.n == t1.n == t2.n == q1.U.n == q2.U.n):
        raise ValueError("rank mismatch")
    n = o1.n
    o_lay = o1.layout.concat(o2.layout)
    t_lay = t1.layout.concat(t2.layout)
    W = BasisDirectSum(
        t_lay, o_lay, ((t1.layout, o1.layout, q1.W), (t2.layout, o2.layout, q2.W))
    )
    m1, m2 = q1.U.scalar_matrix(), q2.U.scalar_matrix()
    if m1 is not None and m1 == m2:
        U = FreeWitness.from_matrix(m1)
    else:
        U = FreeWitness(
            n,
            tuple(
                tuple(
                    DirectSum(
                        o_lay,
                        o_lay,
                        (
                            (o1.layout, o1.layout, q1.U.entries[j][k]),
                            (o2.layout, o2.layout, q2.U.entries[j][k]),
                        ),
                    )
                    for k in range(n)
                )
                for j in range(n)
            ),
        )
    return QuasifreeWitness(W, U)


def decide_bh_quasifree(omega: Representation, tau: Representation):
    """Decide B(H)-quasifree equivalence; equal multiplicity is the criterion.

    The witness matches Fock blocks with Fock blocks and essential blocks
    with essential blocks (``W``), then takes ``u_jk = W tau(v_j)* W* omega(v_k)``,
    which is the essential-part witness on the essential summand and
    ``delta_jk I`` on the shift summand when the shift parts agree.
    """
    if omega.n != tau.n:
        raise ValueError("rank mismatch")
    m_o, m_t = multiplicity(omega), multiplicity(tau)
    if m_o != m_t:
        return NotEquivalent(m_o, m_t)
    check_same_space(omega, tau)
    W = wold_matching(tau.layout, omega.layout)
    W = IDENTITY if W.is_identity() else W
    w = BasisU(W)
    n = omega.n
    entries = tuple(
        tuple(prod(w, GenAdj(tau, j), w.adjoint(), Gen(omega, k)) for k in range(1, n + 1))
        for j in range(1, n + 1)
    )
    return Equivalent(QuasifreeWitness(W, FreeWitness(n, entries)))


def scalar_free_check(omega: Representation, tau: Representation, depth: int):
    """Certify or refute C-free equivalence.

    If a scalar witness exists it is forced: ``c_ji = <tau(v_j) e_0, omega(v_i) e_0>``.
    The candidate is checked exactly on every basis vector to ``depth``; any
    failure is an exact refutation.
    """
    check_same_space(omega, tau)
    n = omega.n
    e0 = SparseVector.basis(0)
    cand = tuple(
        tuple(tau.gen_on_ranks(j, e0).inner(omega.gen_on_ranks(i, e0)) for i in range(1, n + 1))
        for j in range(1, n + 1)
    )
    names = omega.layout.names(depth)
    scal_label = "tau(v_j)* omega(v_i) = c_ji I"
    for r in range(len(names)):
        e = SparseVector.basis(r)
        for i in range(1, n + 1):
            oe = omega.gen_on_ranks(i, e)
            for j in range(1, n + 1):
                lhs = tau.adj_on_ranks(j, oe)
                rhs = e.scale(cand[j - 1][i - 1])
                if lhs != rhs:
                    return Refuted(Counterexample(scal_label, r, str(names[r]), lhs, rhs), cand)
    witness = FreeWitness.from_matrix(cand)
    report = verify_free(omega, tau, witness, depth)
    if not report.passed:
        return Refuted(report.counterexample, cand)
    if _structurally_related(omega, tau, cand):
        return ScalarVerified(witness, depth, report)
    return Inconclusive(witness, depth, report)


def _structurally_related(omega: Representation, tau: Representation, c: Matrix) -> bool:
    """True when ``omega`` is literally ``tau`` post-composed with ``gamma_c``."""
    if omega.layout != tau.layout or omega.conj != tau.conj:
        return False
    return all(
        omega.effective_twist(b) == mat_mul(tau.effective_twist(b), c)
        for b in range(len(omega.blocks))
    )


__all__ = [
    "Check",
    "Counterexample",
    "Equivalent",
    "FreeWitness",
    "Inconclusive",
    "NotEquivalent",
    "QuasifreeWitness",
    "Refuted",
    "ScalarVerified",
    "VerificationReport",
    "compose_free_witness",
    "compose_quasifree_witness",
    "decide_bh_quasifree",
    "direct_sum_witness",
    "essential_free_witness",
    "invert_free_witness",
    "invert_quasifree_witness",
    "scalar_free_check",
    "verify_free",
    "verify_quasifree",
]

