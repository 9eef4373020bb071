"""Basis unitaries: phase-weighted bijections of the common basis ``0, 1, 2, ...``.

Every representation acts on l2(N) through its canonical rank enumeration, so
two representations with different block structure still share one Hilbert
space.  A basis unitary ``W`` maps a rank vector to a rank vector; the kinds
below cover what the equivalence constructions need:

* :class:`BasisMap` -- match names of a source layout with names of a target
  layout segment by segment, in enumeration order, then apply phases.  With a
  single all-blocks segment this is the identity on ranks.
* :class:`Relabel` -- permute the alphabet inside every word.
* :class:`BasisProduct` -- composition, rightmost factor first.
* :class:`BasisDirectSum` -- blockwise sum of unitaries for summand layouts.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .layout import PARTS, BasisName, Layout
from .scalars import ONE, Scalar
from .words import SparseVector


class BasisUnitary:
    """Common interface; subclasses implement ``image`` and ``adjoint``."""

    def image(self, r: int) -> tuple:
        raise NotImplementedError

    def adjoint(self) -> "BasisUnitary":
        # built once per instance; the construction validates segments
        cached = self.__dict__.get("_adjoint_cache")
        if cached is None:
            cached = self._adjoint()
            self.__dict__["_adjoint_cache"] = cached
        return cached

    def _adjoint(self) -> "BasisUnitary":
        raise NotImplementedError

    def apply(self, vec: SparseVector) -> SparseVector:
        return vec.map_keys(self._cached_image)

    def _cached_image(self, r: int) -> tuple:
        cache = self.__dict__.setdefault("_images", {})
        out = cache.get(r)
        if out is None:
            out = cache[r] = self.image(r)
        return out

    def __matmul__(self, other: "BasisUnitary") -> "BasisUnitary":
        return compose(self, other)

    def is_identity(self) -> bool:
        return False


@dataclass(frozen=True)
class Segment:
    source_blocks: tuple
    target_blocks: tuple
    part: str = "all"

    def __post_init__(self):
        if self.part not in PARTS:
            raise ValueError(f"unknown segment part {self.part!r}")
        object.__setattr__(self, "source_blocks", tuple(sorted(self.source_blocks)))
        object.__setattr__(self, "target_blocks", tuple(sorted(self.target_blocks)))

    def swapped(self) -> "Segment":
        return Segment(self.target_blocks, self.source_blocks, self.part)


def _check_partition(layout: Layout, segments, side: str):
    covered: dict = {}
    for seg in segments:
        blocks = seg.source_blocks if side == "source" else seg.target_blocks
        for b in blocks:
            if not 0 <= b < layout.num_blocks:
                raise ValueError(f"{side} block {b} out of range")
            covered.setdefault(b, []).append(seg.part)
    for b in range(layout.num_blocks):
        parts = sorted(covered.get(b, []))
        is_fock = layout.shapes[b] is None
        ok = parts == ["all"] or (is_fock and parts == ["rest", "vacua"]) or (
            not is_fock and parts == ["rest"]
        )
        if not ok:
            raise ValueError(f"segments do not partition the {side} basis at block {b}")


@dataclass(frozen=True)
class BasisMap(BasisUnitary):
    source: Layout
    target: Layout
    segments: tuple = ()
    phases: tuple = ()  # ((source rank, unimodular phase), ...), sorted

    def __post_init__(self):
        if self.source.n != self.target.n:
            raise ValueError("rank mismatch")
        segs = tuple(self.segments) or (
            Segment(self.source.all_blocks(), self.target.all_blocks(), "all"),
        )
        object.__setattr__(self, "segments", segs)
        _check_partition(self.source, segs, "source")
        _check_partition(self.target, segs, "target")
        for seg in segs:
            a = self.source.enumeration(seg.source_blocks, seg.part).size
            b = self.target.enumeration(seg.target_blocks, seg.part).size
            if a != b:
                raise ValueError(
                    f"segment sizes differ ({_fmt_size(a)} vs {_fmt_size(b)}); no bijection"
                )
        items = self.phases.items() if isinstance(self.phases, dict) else self.phases
        pairs = []
        for r, z in items:
            z = Scalar.coerce(z)
            if not z.is_unimodular():
                raise ValueError(f"phase {z} is not unimodular")
            if z != ONE:
                pairs.append((int(r), z))
        pairs.sort(key=lambda t: t[0])
        object.__setattr__(self, "phases", tuple(pairs))
        object.__setattr__(self, "_phase_map", dict(pairs))

    def _segment_for(self, name: BasisName):
        for seg in self.segments:
            enum = self.source.enumeration(seg.source_blocks, seg.part)
            if enum.contains(name):
                return seg, enum
        raise AssertionError("segments partition the source")

    def image(self, r: int) -> tuple:
        name = self.source.unrank(r)
        seg, enum = self._segment_for(name)
        local = enum.rank(name)
        out = self.target.enumeration(seg.target_blocks, seg.part).unrank(local)
        return self.target.rank(out), self._phase_map.get(r, ONE)

    def _adjoint(self) -> "BasisMap":
        inv = BasisMap(self.target, self.source, tuple(s.swapped() for s in self.segments))
        phases = tuple((self.image(r)[0], z.conjugate()) for r, z in self.phases)
        return BasisMap(self.target, self.source, inv.segments, phases)

    def is_identity(self) -> bool:
        if self.phases:
            return False
        return all(
            self.source.enumeration(s.source_blocks, s.part).blocks == self.source.all_blocks()
            and self.target.enumeration(s.target_blocks, s.part).blocks == self.target.all_blocks()
            and s.part == "all"
            for s in self.segments
        )


def _fmt_size(s: Optional[int]) -> str:
    return "infinite" if s is None else str(s)


@dataclass(frozen=True)
class Relabel(BasisUnitary):
    """``(block, k, w) -> (block, k, perm(w))``; target cycles are relabelled too."""

    source: Layout
    perm: tuple

    def __post_init__(self):
        perm = tuple(self.perm)
        if sorted(perm) != list(range(1, self.source.n + 1)):
            raise ValueError("relabelling must be a permutation of 1..n")
        object.__setattr__(self, "perm", perm)

    @property
    def target(self) -> Layout:
        shapes = tuple(
            None if s is None else tuple(self.perm[x - 1] for x in s) for s in self.source.shapes
        )
        return Layout(self.source.n, shapes)

    def image(self, r: int) -> tuple:
        b = self.source.unrank(r)
        out = BasisName(b.block, b.k, tuple(self.perm[x - 1] for x in b.word))
        return self.target.rank(out), ONE

    def _adjoint(self) -> "Relabel":
        inv = [0] * len(self.perm)
        for i, p in enumerate(self.perm, start=1):
            inv[p - 1] = i
        return Relabel(self.target, tuple(inv))

    def is_identity(self) -> bool:
        return self.perm == tuple(range(1, len(self.perm) + 1))


@dataclass(frozen=True)
class BasisProduct(BasisUnitary):
    """``factors[0] @ factors[1] @ ...``; the last factor acts first."""

    factors: tuple = field(default=())

    def image(self, r: int) -> tuple:
        phase = ONE
        for f in reversed(self.factors):
            r, z = f.image(r)
            if z != ONE:
                phase = phase * z
        return r, phase

    def _adjoint(self) -> "BasisProduct":
        return BasisProduct(tuple(f.adjoint() for f in reversed(self.factors)))

    def is_identity(self) -> bool:
        return all(f.is_identity() for f in self.factors)


@dataclass(frozen=True)
class BasisDirectSum(BasisUnitary):
    """``W_1 (+) W_2 (+) ...`` from ``source`` to ``target``.

    ``parts[k] = (source_k, target_k, W_k)``; ``source`` must be the block
    concatenation of the ``source_k`` and likewise for targets.
    """

    source: Layout
    target: Layout
    parts: tuple

    def __post_init__(self):
        src = _concat([p[0] for p in self.parts])
        tgt = _concat([p[1] for p in self.parts])
        if src != self.source or tgt != self.target:
            raise ValueError("summand layouts do not concatenate to the sum layouts")
        src_off, tgt_off, owner = [], [], []
        s = t = 0
        for k, (a, b, _) in enumerate(self.parts):
            src_off.append(s)
            tgt_off.append(t)
            owner.extend([k] * a.num_blocks)
            s += a.num_blocks
            t += b.num_blocks
        object.__setattr__(self, "_src_off", tuple(src_off))
        object.__setattr__(self, "_tgt_off", tuple(tgt_off))
        object.__setattr__(self, "_owner", tuple(owner))

    def image(self, r: int) -> tuple:
        name = self.source.unrank(r)
        k = self._owner[name.block]
        src_k, tgt_k, w_k = self.parts[k]
        local = src_k.rank(BasisName(name.block - self._src_off[k], name.k, name.word))
        r2, z = w_k.image(local)
        out = tgt_k.unrank(r2)
        return self.target.rank(BasisName(out.block + self._tgt_off[k], out.k, out.word)), z

    def _adjoint(self) -> "BasisDirectSum":
        return BasisDirectSum(
            self.target, self.source, tuple((b, a, w.adjoint()) for a, b, w in self.parts)
        )

    def is_identity(self) -> bool:
        return self.source == self.target and all(
            a == b and w.is_identity() for a, b, w in self.parts
        )


def _concat(layouts: Sequence[Layout]) -> Layout:
    out = layouts[0]
    for lay in layouts[1:]:
        out = out.concat(lay)
    return out


IDENTITY = BasisProduct(())


def compose(*unitaries: BasisUnitary) -> BasisUnitary:
    """Product ``u_0 u_1 ...``, flattening nested products and dropping identities."""
    factors = []
    for u in unitaries:
        if isinstance(u, BasisProduct):
            factors.extend(u.factors)
        else:
            factors.append(u)
    factors = [f for f in factors if not f.is_identity()]
    if len(factors) == 1:
        return factors[0]
    return BasisProduct(tuple(factors))


def rank_identity(source: Layout, target: Layout) -> BasisMap:
    return BasisMap(source, target)


def phase_map(layout: Layout, phases: dict) -> BasisMap:
    return BasisMap(layout, layout, (), tuple(phases.items()))


def block_permutation(layout: Layout, order: Sequence[int]) -> BasisMap:
    """Send source block ``order[t]`` to target block ``t``."""
    if sorted(order) != list(layout.all_blocks()):
        raise ValueError("order must permute the block indices")
    target = Layout(layout.n, tuple(layout.shapes[b] for b in order))
    segs = tuple(Segment((b,), (t,), "all") for t, b in enumerate(order))
    return BasisMap(layout, target, segs)


def wold_matching(source: Layout, target: Layout) -> BasisMap:
    """Essential blocks to essential blocks, Fock blocks to Fock blocks.

    Falls back to matching the Fock vacua exactly and everything else in
    order when the essential parts have different dimensions.
    """
    if len(source.fock_blocks()) != len(target.fock_blocks()):
        raise ValueError("Fock block counts differ")
    ess_s = source.enumeration(source.cycle_blocks()).size
    ess_t = target.enumeration(target.cycle_blocks()).size
    segs = []
    if ess_s == ess_t:
        if source.cycle_blocks() or target.cycle_blocks():
            segs.append(Segment(source.cycle_blocks(), target.cycle_blocks(), "all"))
        if source.fock_blocks():
            segs.append(Segment(source.fock_blocks(), target.fock_blocks(), "all"))
    else:
        segs.append(Segment(source.fock_blocks(), target.fock_blocks(), "vacua"))
        segs.append(Segment(source.all_blocks(), target.all_blocks(), "rest"))
    return BasisMap(source, target, tuple(segs))
