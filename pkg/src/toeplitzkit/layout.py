"""Canonical word-indexed bases for Fock and cycle blocks.

A basis name is ``(block, k, word)``.  Fock blocks use ``k = 0`` and any word.
A cycle block with word ``mu`` of length ``p`` uses ``0 <= k < p`` and a word
that is empty or whose last letter differs from ``mu[(k - 1) % p]``; the name
stands for the infinite string ``word + mu[k:] + mu + mu + ...``.

Names are totally ordered by ``(depth, block, k, word)`` where depth is the
word length.  :class:`Enumeration` turns that order, restricted to a group of
blocks and optionally to or away from the Fock vacua, into a bijection with
``0, 1, 2, ...``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Optional, Sequence

from .words import Word, check_word

FOCK = "fock"
CYCLE = "cycle"

PARTS = ("all", "vacua", "rest")


class BasisName(NamedTuple):
    block: int
    k: int
    word: Word

    @property
    def depth(self) -> int:
        return len(self.word)

    def sort_key(self):
        return (len(self.word), self.block, self.k, self.word)

    def __str__(self) -> str:
        w = "".join(map(str, self.word)) if self.word else "ε"
        return f"b{self.block}:{self.k}:{w}"


@dataclass(frozen=True)
class Layout:
    """The basis-determining part of a representation.

    ``shapes[b]`` is ``None`` for a Fock block and the cycle word otherwise.
    """

    n: int
    shapes: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        for s in self.shapes:
            if s is not None:
                if not s:
                    raise ValueError("cycle word must be nonempty")
                check_word(s, self.n)

    @property
    def num_blocks(self) -> int:
        return len(self.shapes)

    def fock_blocks(self) -> tuple:
        return tuple(b for b, s in enumerate(self.shapes) if s is None)

    def cycle_blocks(self) -> tuple:
        return tuple(b for b, s in enumerate(self.shapes) if s is not None)

    def all_blocks(self) -> tuple:
        return tuple(range(len(self.shapes)))

    def concat(self, other: "Layout") -> "Layout":
        if self.n != other.n:
            raise ValueError("rank mismatch")
        return Layout(self.n, self.shapes + other.shapes)

    def is_canonical(self, name: BasisName) -> bool:
        if not 0 <= name.block < len(self.shapes):
            return False
        shape = self.shapes[name.block]
        w = name.word
        if any(not 1 <= x <= self.n for x in w):
            return False
        if shape is None:
            return name.k == 0
        p = len(shape)
        if not 0 <= name.k < p:
            return False
        return not w or w[-1] != shape[(name.k - 1) % p]

    # -- global enumeration ------------------------------------------------
    def rank(self, name: BasisName) -> int:
        return _enum(self, self.all_blocks(), "all").rank(name)

    def unrank(self, r: int) -> BasisName:
        return _enum(self, self.all_blocks(), "all").unrank(r)

    def size(self) -> Optional[int]:
        """Dimension of the Hilbert space, or ``None`` when infinite."""
        return _enum(self, self.all_blocks(), "all").size

    def names(self, depth: int) -> list:
        """All names of depth <= ``depth`` in rank order."""
        return _enum(self, self.all_blocks(), "all").names(depth)

    def count(self, block: int, depth: int) -> int:
        return _block_count(self.n, self.shapes[block], depth, "all")

    def vacua(self) -> list:
        return [BasisName(b, 0, ()) for b in self.fock_blocks()]

    def enumeration(self, blocks: Sequence[int], part: str = "all") -> "Enumeration":
        return _enum(self, tuple(blocks), part)


def _block_count(n: int, shape, depth: int, part: str) -> int:
    if shape is None:
        if part == "vacua":
            return 1 if depth == 0 else 0
        if part == "rest" and depth == 0:
            return 0
        return n ** depth
    if part == "vacua":
        return 0
    p = len(shape)
    if depth == 0:
        return p
    return p * (n - 1) * n ** (depth - 1)


def _lex_index(n: int, w: Word) -> int:
    idx = 0
    for x in w:
        idx = idx * n + (x - 1)
    return idx


def _lex_word(n: int, idx: int, length: int) -> Word:
    out = []
    for _ in range(length):
        idx, d = divmod(idx, n)
        out.append(d + 1)
    if idx:
        raise IndexError("lexicographic index out of range")
    return tuple(reversed(out))


def _local_index(n: int, shape, k: int, w: Word) -> int:
    if shape is None:
        return _lex_index(n, w)
    if not w:
        return k
    d = len(w)
    forbidden = shape[(k - 1) % len(shape)]
    last = w[-1]
    pos = last - 1 - (1 if last > forbidden else 0)
    return k * (n - 1) * n ** (d - 1) + _lex_index(n, w[:-1]) * (n - 1) + pos


def _local_name(n: int, shape, block: int, depth: int, idx: int) -> BasisName:
    if shape is None:
        return BasisName(block, 0, _lex_word(n, idx, depth))
    if depth == 0:
        return BasisName(block, idx, ())
    per_k = (n - 1) * n ** (depth - 1)
    k, rem = divmod(idx, per_k)
    prefix_idx, pos = divmod(rem, n - 1)
    last = pos + 1
    forbidden = shape[(k - 1) % len(shape)]
    if last >= forbidden:
        last += 1
    return BasisName(block, k, _lex_word(n, prefix_idx, depth - 1) + (last,))


class Enumeration:
    """Order-preserving bijection between a set of names and ``0..size-1``."""

    def __init__(self, layout: Layout, blocks: tuple, part: str):
        if part not in PARTS:
            raise ValueError(f"unknown part {part!r}")
        for b in blocks:
            if not 0 <= b < layout.num_blocks:
                raise ValueError(f"block index {b} out of range")
        if len(set(blocks)) != len(blocks):
            raise ValueError("repeated block index")
        self.layout = layout
        self.blocks = tuple(sorted(blocks))
        self._members = frozenset(self.blocks)
        self.part = part
        self._cum = [0]  # _cum[d] = number of names with depth < d
        self.size = self._compute_size()

    def _compute_size(self) -> Optional[int]:
        n, shapes = self.layout.n, self.layout.shapes
        if self.part == "vacua":
            return sum(1 for b in self.blocks if shapes[b] is None)
        if any(shapes[b] is None for b in self.blocks):
            return None
        if n == 1 or not self.blocks:
            return sum(len(shapes[b]) for b in self.blocks)
        return None

    def depth_total(self, depth: int) -> int:
        n, shapes = self.layout.n, self.layout.shapes
        return sum(_block_count(n, shapes[b], depth, self.part) for b in self.blocks)

    def _cum_upto(self, depth: int) -> int:
        while len(self._cum) <= depth:
            d = len(self._cum) - 1
            self._cum.append(self._cum[-1] + self.depth_total(d))
        return self._cum[depth]

    def contains(self, name: BasisName) -> bool:
        if name.block not in self._members:
            return False
        is_vac = self.layout.shapes[name.block] is None and not name.word
        if self.part == "vacua":
            return is_vac
        if self.part == "rest":
            return not is_vac
        return True

    def rank(self, name: BasisName) -> int:
        if not self.contains(name) or not self.layout.is_canonical(name):
            raise ValueError(f"{name} is not a member of this enumeration")
        return _cached_rank(self, name)

    def _rank(self, name: BasisName) -> int:
        n, shapes = self.layout.n, self.layout.shapes
        d = len(name.word)
        r = self._cum_upto(d)
        for b in self.blocks:
            if b == name.block:
                break
            r += _block_count(n, shapes[b], d, self.part)
        return r + _local_index(n, shapes[name.block], name.k, name.word)

    def unrank(self, r: int) -> BasisName:
        if r < 0 or (self.size is not None and r >= self.size):
            raise IndexError(f"rank {r} outside a space of dimension {self.size}")
        return _cached_unrank(self, r)

    def _unrank(self, r: int) -> BasisName:
        n, shapes = self.layout.n, self.layout.shapes
        d = 0
        while self._cum_upto(d + 1) <= r:
            d += 1
        r -= self._cum_upto(d)
        for b in self.blocks:
            c = _block_count(n, shapes[b], d, self.part)
            if r < c:
                return _local_name(n, shapes[b], b, d, r)
            r -= c
        raise AssertionError("unreachable: rank beyond depth total")

    def names(self, depth: int) -> list:
        total = self._cum_upto(depth + 1)
        return [self.unrank(r) for r in range(total)]

    def __hash__(self):
        return hash((self.layout, self.blocks, self.part))

    def __eq__(self, other):
        return (
            isinstance(other, Enumeration)
            and (self.layout, self.blocks, self.part) == (other.layout, other.blocks, other.part)
        )


@lru_cache(maxsize=4096)
def _enum(layout: Layout, blocks: tuple, part: str) -> Enumeration:
    return Enumeration(layout, blocks, part)


@lru_cache(maxsize=1 << 18)
def _cached_rank(enum: Enumeration, name: BasisName) -> int:
    return enum._rank(name)


@lru_cache(maxsize=1 << 18)
def _cached_unrank(enum: Enumeration, r: int) -> BasisName:
    return enum._unrank(r)
