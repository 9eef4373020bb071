"""Finitely presented representations of the Toeplitz algebra E_n.

A :class:`Representation` is a direct sum of Fock and cycle blocks.  The base
generator ``v_j`` acts on basis names by prepending the letter ``j`` (cycle
blocks absorb the letter into the periodic tail when it matches).  On top of
that a representation may carry

* a scalar twist ``U`` (global, and optionally per block), giving
  ``T_i = sum_j base_j * U[j][i]``, and
* a diagonal phase conjugation ``D`` keyed by basis rank, giving
  ``T_i -> D T_i D*``.

Both keep the family a Toeplitz family, exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable, Iterable, Optional, Sequence

from .layout import CYCLE, FOCK, BasisName, Layout
from .scalars import ONE, Matrix, Scalar, identity, is_unitary, mat_mul, matrix
from .words import SparseVector, Word, check_word


@dataclass(frozen=True)
class Block:
    kind: str
    word: Word = ()
    twist: Optional[Matrix] = None

    def __post_init__(self):
        if self.kind not in (FOCK, CYCLE):
            raise ValueError(f"unknown block kind {self.kind!r}")
        object.__setattr__(self, "word", tuple(self.word))
        if self.kind == FOCK and self.word:
            raise ValueError("Fock blocks carry no word")
        if self.kind == CYCLE and not self.word:
            raise ValueError("cycle word must be nonempty")
        if self.twist is not None:
            object.__setattr__(self, "twist", matrix(self.twist))

    @property
    def shape(self):
        return None if self.kind == FOCK else self.word


def fock_block() -> Block:
    return Block(FOCK)


def cycle_block(word: Sequence[int]) -> Block:
    return Block(CYCLE, tuple(word))


@dataclass(frozen=True)
class Representation:
    n: int
    blocks: tuple
    twist: Optional[Matrix] = None
    conj: tuple = field(default=())  # sorted ((rank, phase), ...)

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise ValueError("n must be a positive integer")
        blocks = tuple(self.blocks)
        if not blocks:
            raise ValueError("a representation needs at least one block (nondegeneracy)")
        object.__setattr__(self, "blocks", blocks)
        for b in blocks:
            if not isinstance(b, Block):
                raise TypeError("blocks must be Block instances")
            if b.kind == CYCLE:
                check_word(b.word, self.n)
            if b.twist is not None:
                _check_twist(b.twist, self.n)
        if self.twist is not None:
            object.__setattr__(self, "twist", matrix(self.twist))
            _check_twist(self.twist, self.n)
        conj = self.conj.items() if isinstance(self.conj, dict) else self.conj
        pairs = []
        for r, z in conj:
            z = Scalar.coerce(z)
            if isinstance(r, bool) or not isinstance(r, int) or r < 0:
                raise ValueError(f"phase rank {r!r} must be a nonnegative integer")
            if not z.is_unimodular():
                raise ValueError(f"phase {z} is not unimodular")
            if z != ONE:
                pairs.append((r, z))
        pairs.sort(key=lambda t: t[0])
        if len({r for r, _ in pairs}) != len(pairs):
            raise ValueError("repeated phase rank")
        size = self.layout.size()
        if size is not None and any(r >= size for r, _ in pairs):
            raise ValueError("phase rank outside the Hilbert space")
        object.__setattr__(self, "conj", tuple(pairs))

    # -- structure ---------------------------------------------------------
    @cached_property
    def layout(self) -> Layout:
        return Layout(self.n, tuple(b.shape for b in self.blocks))

    @cached_property
    def _phases(self) -> dict:
        return dict(self.conj)

    @cached_property
    def _block_twists(self) -> tuple:
        out = []
        for b in self.blocks:
            if b.twist is None:
                out.append(self.twist)
            elif self.twist is None:
                out.append(b.twist)
            else:
                out.append(mat_mul(b.twist, self.twist))
        return tuple(None if t == identity(self.n) else t for t in out)

    def effective_twist(self, block: int) -> Matrix:
        t = self._block_twists[block]
        return identity(self.n) if t is None else t

    @property
    def num_fock(self) -> int:
        return sum(1 for b in self.blocks if b.kind == FOCK)

    def is_pure_shift(self) -> bool:
        return all(b.kind == FOCK for b in self.blocks)

    def is_plain(self) -> bool:
        return not self.conj and all(t is None for t in self._block_twists)

    # -- base (untwisted, unconjugated) permutative action -----------------
    def base_gen(self, j: int, name: BasisName) -> BasisName:
        shape = self.layout.shapes[name.block]
        if shape is None or name.word:
            return BasisName(name.block, name.k, (j,) + name.word)
        p = len(shape)
        prev = (name.k - 1) % p
        if shape[prev] == j:
            return BasisName(name.block, prev, ())
        return BasisName(name.block, name.k, (j,))

    def base_adj(self, j: int, name: BasisName) -> Optional[BasisName]:
        shape = self.layout.shapes[name.block]
        w = name.word
        if w:
            if w[0] != j:
                return None
            return BasisName(name.block, name.k, w[1:])
        if shape is None:
            return None
        if shape[name.k] != j:
            return None
        return BasisName(name.block, (name.k + 1) % len(shape), ())

    # -- generator actions on name-keyed vectors ---------------------------
    def _check_letter(self, i: int):
        if isinstance(i, bool) or not isinstance(i, int) or not 1 <= i <= self.n:
            raise ValueError(f"letter {i!r} out of range 1..{self.n}")

    def _phase(self, name: BasisName) -> Scalar:
        if not self.conj:
            return ONE
        return self._phases.get(self.layout.rank(name), ONE)

    def apply_generator(self, i: int, xi: SparseVector) -> SparseVector:
        self._check_letter(i)
        return self._on_names(i, xi, False)

    def apply_generator_adjoint(self, i: int, xi: SparseVector) -> SparseVector:
        self._check_letter(i)
        return self._on_names(i, xi, True)

    def _on_names(self, i: int, xi: SparseVector, adjoint: bool) -> SparseVector:
        if len(xi) > 1:
            return SparseVector(self._gen_terms(i, xi, adjoint))
        # single basis vectors are memoized, as in the rank-space action below
        cache = self.__dict__.setdefault("_name_images", {})
        for name, c in xi.items():
            img = cache.get((i, name, adjoint))
            if img is None:
                e = SparseVector._trusted({name: ONE})
                img = cache[(i, name, adjoint)] = SparseVector(self._gen_terms(i, e, adjoint))
            return img.scale(c)
        return SparseVector.zero()

    def _gen_terms(self, i: int, xi: SparseVector, adjoint: bool):
        phased = bool(self.conj)
        for name, c in xi.items():
            if phased:
                z = self._phase(name)
                if z is not ONE:
                    c = c * z.conjugate()
            tw = self._block_twists[name.block]
            if tw is None:
                terms = ((i, ONE),)
            elif adjoint:
                terms = tuple((j + 1, tw[j][i - 1].conjugate()) for j in range(self.n) if tw[j][i - 1])
            else:
                terms = tuple((j + 1, tw[j][i - 1]) for j in range(self.n) if tw[j][i - 1])
            for j, coef in terms:
                target = self.base_adj(j, name) if adjoint else self.base_gen(j, name)
                if target is None:
                    continue
                cc = c if coef is ONE else c * coef
                if phased:
                    z = self._phase(target)
                    if z is not ONE:
                        cc = cc * z
                yield target, cc

    # -- rank-space actions (the common Hilbert space l2(N)) ---------------
    def to_names(self, vec: SparseVector) -> SparseVector:
        unrank = self.layout.unrank
        return SparseVector._trusted({unrank(r): c for r, c in vec.items()})

    def to_ranks(self, vec: SparseVector) -> SparseVector:
        rank = self.layout.rank
        return SparseVector._trusted({rank(b): c for b, c in vec.items()})

    def gen_on_ranks(self, i: int, vec: SparseVector) -> SparseVector:
        return self._on_ranks(i, vec, False)

    def adj_on_ranks(self, i: int, vec: SparseVector) -> SparseVector:
        return self._on_ranks(i, vec, True)

    def _on_ranks(self, i: int, vec: SparseVector, adjoint: bool) -> SparseVector:
        # images of single basis vectors are memoized; vectors are combined from them
        self._check_letter(i)
        cache = self.__dict__.setdefault("_rank_images", {})
        out = None
        for r, c in vec.items():
            img = cache.get((i, r, adjoint))
            if img is None:
                e = SparseVector._trusted({self.layout.unrank(r): ONE})
                img = self.to_ranks(SparseVector(self._gen_terms(i, e, adjoint)))
                cache[(i, r, adjoint)] = img
            if not img:
                continue
            img = img.scale(c)
            out = img if out is None else out + img
        return SparseVector.zero() if out is None else out

    # -- derived representations -------------------------------------------
    def twisted(self, u: Matrix) -> "Representation":
        """``self o gamma_U``: generator ``i`` becomes ``sum_j T_j u[j][i]``."""
        u = matrix(u)
        _check_twist(u, self.n)
        new = u if self.twist is None else mat_mul(self.twist, u)
        return replace(self, twist=new)

    def conjugated(self, phases: dict) -> "Representation":
        """Compose the stored phase conjugation with ``phases`` (keyed by rank)."""
        merged = dict(self._phases)
        for r, z in phases.items():
            merged[r] = merged.get(r, ONE) * Scalar.coerce(z)
        return replace(self, conj=tuple(merged.items()))

    def basis_vector(self, name: BasisName) -> SparseVector:
        if not self.layout.is_canonical(name):
            raise ValueError(f"{name} is not a canonical basis name")
        return SparseVector.basis(name)


def _check_twist(u: Matrix, n: int):
    if len(u) != n or any(len(r) != n for r in u):
        raise ValueError(f"twist must be {n}x{n}")
    if not is_unitary(u):
        raise ValueError("not unitary")


def fock(n: int, copies: int = 1) -> Representation:
    """The Fock representation, or a direct sum of ``copies`` of it."""
    if copies < 1:
        raise ValueError("need at least one Fock block")
    return Representation(n, tuple(fock_block() for _ in range(copies)))


def cycle(n: int, *words: Sequence[int]) -> Representation:
    """Direct sum of cycle blocks, one per word."""
    return Representation(n, tuple(cycle_block(w) for w in words))


def fock_power(n: int, k: int) -> Representation:
    """The family ``v_i -> phi(v_i)^k`` for ``n = 1``.

    For ``n = 1`` this is ``S^k``, which the rank identification realizes as
    ``k`` Fock blocks.  For ``n >= 2`` the family has an infinite-dimensional
    defect space and no finite block presentation, so it is refused.
    """
    if n != 1:
        raise ValueError("phi^k has infinite multiplicity for n >= 2; use fock(n, k)")
    return fock(1, k)


def apply_generator(rep: Representation, i: int, xi: SparseVector) -> SparseVector:
    return rep.apply_generator(i, xi)


def apply_generator_adjoint(rep: Representation, i: int, xi: SparseVector) -> SparseVector:
    return rep.apply_generator_adjoint(i, xi)


def sigma_apply(rep: Representation, x: Sequence) -> Callable[[SparseVector], SparseVector]:
    """The Toeplitz map at ``x`` in C^n: ``xi -> sum_i x_i T_i xi``."""
    if len(x) != rep.n:
        raise ValueError(f"vector has length {len(x)}, expected {rep.n}")
    coeffs = [Scalar.coerce(c) for c in x]

    def action(xi: SparseVector) -> SparseVector:
        out = SparseVector.zero()
        for i, c in enumerate(coeffs, start=1):
            if c:
                out = out + rep.apply_generator(i, xi).scale(c)
        return out

    return action


def basis_enum(rep: Representation, depth: int) -> list:
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    return rep.layout.names(depth)


def block_embedding(src: Layout, dst: Layout, offset: int) -> Callable[[int], int]:
    """Rank map for names of ``src`` placed at block ``offset`` inside ``dst``."""

    def f(r: int) -> int:
        b = src.unrank(r)
        return dst.rank(BasisName(b.block + offset, b.k, b.word))

    return f


def direct_sum(r1: Representation, r2: Representation) -> Representation:
    """Concatenate block lists; twists and phases are carried blockwise."""
    if r1.n != r2.n:
        raise ValueError("rank mismatch")
    if r1.twist == r2.twist:
        blocks = r1.blocks + r2.blocks
        twist = r1.twist
    else:
        blocks = tuple(_push_twist(b, r1.twist) for b in r1.blocks) + tuple(
            _push_twist(b, r2.twist) for b in r2.blocks
        )
        twist = None
    out = Representation(r1.n, blocks, twist)
    phases = {}
    for src, offset in ((r1, 0), (r2, len(r1.blocks))):
        if src.conj:
            emb = block_embedding(src.layout, out.layout, offset)
            for r, z in src.conj:
                phases[emb(r)] = z
    if phases:
        out = replace(out, conj=tuple(phases.items()))
    return out


def _push_twist(b: Block, twist: Optional[Matrix]) -> Block:
    if twist is None:
        return b
    new = twist if b.twist is None else mat_mul(b.twist, twist)
    return replace(b, twist=new)


def direct_sum_all(reps: Iterable[Representation]) -> Representation:
    reps = list(reps)
    out = reps[0]
    for r in reps[1:]:
        out = direct_sum(out, r)
    return out
