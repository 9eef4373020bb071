"""Words over the alphabet {1..n} and exact finitely supported vectors."""
from __future__ import annotations

from typing import Hashable, Iterable, Iterator, Mapping, Optional, Tuple

from .scalars import ONE, ZERO, Number, Scalar

Word = Tuple[int, ...]
EMPTY: Word = ()


def word_concat(a: Word, b: Word) -> Word:
    return tuple(a) + tuple(b)


def strip_prefix(prefix: Word, w: Word) -> Optional[Word]:
    """Return ``w'`` with ``w = prefix + w'``, or ``None`` if prefix does not match."""
    k = len(prefix)
    if tuple(w[:k]) != tuple(prefix):
        return None
    return tuple(w[k:])


def length_lex_key(w: Word):
    return (len(w), tuple(w))


def check_word(w: Word, n: int) -> Word:
    w = tuple(w)
    for letter in w:
        if isinstance(letter, bool) or not isinstance(letter, int) or not 1 <= letter <= n:
            raise ValueError(f"letter {letter!r} out of range 1..{n}")
    return w


def words_of_length(n: int, length: int) -> Iterator[Word]:
    """All words of the given length in lexicographic order."""
    if length == 0:
        yield ()
        return
    for head in range(1, n + 1):
        for tail in words_of_length(n, length - 1):
            yield (head,) + tail


class SparseVector:
    """Exact vector with finitely many nonzero coordinates.

    Keys are basis labels (basis names or integer ranks).  Zero coefficients
    are never stored, so two vectors are equal iff their entry maps are.
    Instances are treated as immutable.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries: Mapping[Hashable, Number] | Iterable = ()):
        acc: dict = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for key, c in items:
            c = Scalar.coerce(c)
            if not c:
                continue
            prev = acc.get(key)
            if prev is None:
                acc[key] = c
            else:
                s = prev + c
                if s:
                    acc[key] = s
                else:
                    del acc[key]
        self._entries = acc

    @classmethod
    def _trusted(cls, entries: dict) -> "SparseVector":
        v = object.__new__(cls)
        v._entries = entries
        return v

    @classmethod
    def basis(cls, key: Hashable) -> "SparseVector":
        return cls._trusted({key: ONE})

    @classmethod
    def zero(cls) -> "SparseVector":
        return cls._trusted({})

    def items(self):
        return self._entries.items()

    def keys(self):
        return self._entries.keys()

    def __getitem__(self, key) -> Scalar:
        return self._entries.get(key, ZERO)

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseVector):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self):
        return hash(frozenset(self._entries.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{k!r}: {v}" for k, v in sorted(self._entries.items(), key=_sort_key))
        return f"SparseVector({{{body}}})"

    def __add__(self, other: "SparseVector") -> "SparseVector":
        if not other._entries:
            return self
        if not self._entries:
            return other
        acc = dict(self._entries)
        for k, c in other._entries.items():
            prev = acc.get(k)
            if prev is None:
                acc[k] = c
            else:
                s = prev + c
                if s:
                    acc[k] = s
                else:
                    del acc[k]
        return SparseVector._trusted(acc)

    def __neg__(self) -> "SparseVector":
        return SparseVector._trusted({k: -c for k, c in self._entries.items()})

    def __sub__(self, other: "SparseVector") -> "SparseVector":
        return self + (-other)

    def scale(self, c: Number) -> "SparseVector":
        c = Scalar.coerce(c)
        if not c:
            return SparseVector.zero()
        if c == ONE:
            return self
        return SparseVector._trusted({k: c * v for k, v in self._entries.items()})

    def __rmul__(self, c: Number) -> "SparseVector":
        return self.scale(c)

    def inner(self, other: "SparseVector") -> Scalar:
        """``<self, other>``, conjugate-linear in the first slot."""
        small, big = (self, other) if len(self) <= len(other) else (other, self)
        acc = ZERO
        for k in small._entries:
            if k in big._entries:
                acc = acc + self._entries[k].conjugate() * other._entries[k]
        return acc

    def norm2(self):
        return sum((c.abs2() for c in self._entries.values()), start=0)

    def map_keys(self, f) -> "SparseVector":
        """Relabel coordinates through ``f(key) -> (new_key, phase)``."""
        acc: dict = {}
        for k, c in self._entries.items():
            k2, phase = f(k)
            cc = c if phase is ONE or phase == ONE else c * phase
            prev = acc.get(k2)
            if prev is None:
                acc[k2] = cc
            else:
                s = prev + cc
                if s:
                    acc[k2] = s
                else:
                    del acc[k2]
        return SparseVector._trusted(acc)

    def sorted_items(self, key=None):
        return sorted(self._entries.items(), key=key or _sort_key)


def _sort_key(item):
    k = item[0]
    sk = getattr(k, "sort_key", None)
    if sk is not None:
        return (1, sk())
    return (0, k)
