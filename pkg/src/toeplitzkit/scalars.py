"""Exact Gaussian-rational scalars and small dense matrices over them.

Every coefficient in the library is a :class:`Scalar`, a complex number whose
real and imaginary parts are rationals (exposed as :class:`fractions.Fraction`).  Nothing is ever
rounded, so equality tests are exact.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Sequence, Union

Number = Union[int, Fraction, "Scalar"]

_RATIONAL = r"\d+(?:/\d+)?"
_SCALAR_RE = re.compile(
    rf"^(?P<re>[+-]?{_RATIONAL})?"
    rf"(?:(?P<isign>[+-])?(?P<im>{_RATIONAL})?(?P<i>i))?$"
)


class Scalar:
    """A Gaussian rational ``re + im*i``.  Immutable and hashable.

    Stored as integers ``(a + b i) / d`` with ``d > 0`` and
    ``gcd(a, b, d) = 1``, so each operation costs one normalization.
    """

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re: Union[int, Fraction, str] = 0, im: Union[int, Fraction] = 0):
        if isinstance(re, str):
            parsed = Scalar.parse(re)
            a, b, d = parsed._a, parsed._b, parsed._d
        else:
            r, i = Fraction(re), Fraction(im)
            d = r.denominator * i.denominator
            a, b = r.numerator * i.denominator, i.numerator * r.denominator
        _set(self, a, b, d)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @staticmethod
    def _raw(re: Fraction, im: Fraction) -> "Scalar":
        return _make(
            re.numerator * im.denominator, im.numerator * re.denominator, re.denominator * im.denominator
        )

    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    @classmethod
    def coerce(cls, x: Number) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, int) and not isinstance(x, bool):
            return _make(x, 0, 1)
        if isinstance(x, Fraction):
            return _make(x.numerator, 0, x.denominator)
        if isinstance(x, str):
            return cls.parse(x)
        raise TypeError(f"cannot convert {type(x).__name__} to an exact scalar")

    @classmethod
    def parse(cls, text: str) -> "Scalar":
        """Parse strings such as ``"3/5-4/5i"``, ``"1"``, ``"i"``, ``"-1/2+i"``."""
        try:
            return cls._parse(text)
        except ZeroDivisionError:
            raise ValueError(f"zero denominator in {text!r}") from None

    @classmethod
    def _parse(cls, text: str) -> "Scalar":
        s = text.replace(" ", "")
        m = _SCALAR_RE.match(s)
        if not s or m is None:
            raise ValueError(f"malformed exact scalar {text!r}")
        re_part = Fraction(m.group("re")) if m.group("re") else _ZERO_Q
        im_part = _ZERO_Q
        if m.group("i"):
            if m.group("re") and not m.group("isign"):
                # "3i" parsed as re="3", i: treat the digits as imaginary
                if m.group("im") is None:
                    return cls._raw(_ZERO_Q, Fraction(m.group("re")))
                raise ValueError(f"malformed exact scalar {text!r}")
            mag = Fraction(m.group("im")) if m.group("im") else Fraction(1)
            im_part = -mag if m.group("isign") == "-" else mag
        elif m.group("isign") or m.group("im"):
            raise ValueError(f"malformed exact scalar {text!r}")
        return cls._raw(re_part, im_part)

    def __str__(self) -> str:
        re_, im = self.re, self.im
        if im == 0:
            return str(re_)
        mag = abs(im)
        im_txt = "i" if mag == 1 else f"{mag}i"
        if re_ == 0:
            return ("-" if im < 0 else "") + im_txt
        return f"{re_}{'-' if im < 0 else '+'}{im_txt}"

    def __repr__(self) -> str:
        return f"Scalar({str(self)!r})"

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self._a == other._a and self._b == other._b and self._d == other._d
        if isinstance(other, (int, Fraction)):
            return self._b == 0 and Fraction(self._a, self._d) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._b == 0:
            return hash(Fraction(self._a, self._d))
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return bool(self._a) or bool(self._b)

    def __add__(self, other: Number) -> "Scalar":
        o = _as_scalar(other)
        if o is None:
            return NotImplemented
        d1, d2 = self._d, o._d
        if d1 == d2:
            return _make(self._a + o._a, self._b + o._b, d1)
        return _make(self._a * d2 + o._a * d1, self._b * d2 + o._b * d1, d1 * d2)

    __radd__ = __add__

    def __sub__(self, other: Number) -> "Scalar":
        o = _as_scalar(other)
        if o is None:
            return NotImplemented
        d1, d2 = self._d, o._d
        if d1 == d2:
            return _make(self._a - o._a, self._b - o._b, d1)
        return _make(self._a * d2 - o._a * d1, self._b * d2 - o._b * d1, d1 * d2)

    def __rsub__(self, other: Number) -> "Scalar":
        o = _as_scalar(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self) -> "Scalar":
        return _trusted(-self._a, -self._b, self._d)

    def __mul__(self, other: Number) -> "Scalar":
        o = _as_scalar(other)
        if o is None:
            return NotImplemented
        if o is ONE:
            return self
        if self is ONE:
            return o
        a, b, c, e = self._a, self._b, o._a, o._b
        d = self._d * o._d
        if not b and not e:
            return _make(a * c, 0, d)
        return _make(a * c - b * e, a * e + b * c, d)

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "Scalar":
        o = _as_scalar(other)
        if o is None:
            return NotImplemented
        # (a + b i)/d divided by (c + e i)/f is f (a + b i)(c - e i) / (d (c^2 + e^2))
        c, e = o._a, o._b
        den = c * c + e * e
        if den == 0:
            raise ZeroDivisionError("division by exact zero")
        a, b = self._a, self._b
        return _make(o._d * (a * c + b * e), o._d * (b * c - a * e), self._d * den)

    def __rtruediv__(self, other: Number) -> "Scalar":
        return Scalar.coerce(other) / self

    def conjugate(self) -> "Scalar":
        if not self._b:
            return self
        return _trusted(self._a, -self._b, self._d)

    def abs2(self) -> Fraction:
        """Squared modulus; always rational."""
        return Fraction(self._a * self._a + self._b * self._b, self._d * self._d)

    def is_unimodular(self) -> bool:
        return self._a * self._a + self._b * self._b == self._d * self._d


def _set(s: Scalar, a: int, b: int, d: int):
    if d == 0:
        raise ZeroDivisionError("zero denominator")
    if d < 0:
        a, b, d = -a, -b, -d
    g = math.gcd(a, b, d)
    if g != 1:
        a, b, d = a // g, b // g, d // g
    object.__setattr__(s, "_a", a)
    object.__setattr__(s, "_b", b)
    object.__setattr__(s, "_d", d)


def _trusted(a: int, b: int, d: int) -> Scalar:
    s = object.__new__(Scalar)
    object.__setattr__(s, "_a", a)
    object.__setattr__(s, "_b", b)
    object.__setattr__(s, "_d", d)
    return s


def _make(a: int, b: int, d: int) -> Scalar:
    if d == 1:
        return _trusted(a, b, 1)
    s = object.__new__(Scalar)
    _set(s, a, b, d)
    return s


_ZERO_Q = Fraction(0)
ZERO = _trusted(0, 0, 1)
ONE = _trusted(1, 0, 1)
I = _trusted(0, 1, 1)


def _as_scalar(x) -> Scalar | None:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return _trusted(x, 0, 1)
    if isinstance(x, Fraction):
        return _make(x.numerator, 0, x.denominator)
    return None


# -- dense matrices: tuples of row tuples -------------------------------------

Matrix = tuple  # tuple[tuple[Scalar, ...], ...]


def matrix(rows: Sequence[Sequence[Number]]) -> Matrix:
    """Build an immutable matrix, coercing entries (ints, Fractions, strings)."""
    out = tuple(tuple(Scalar.coerce(x) for x in row) for row in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise ValueError("ragged matrix")
    return out


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def zeros(rows: int, cols: int) -> Matrix:
    return tuple(tuple(ZERO for _ in range(cols)) for _ in range(rows))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a and len(a[0]) != len(b):
        raise ValueError("shape mismatch in matrix product")
    cols = list(zip(*b))
    out = []
    for row in a:
        out.append(tuple(_dot(row, col) for col in cols))
    return tuple(out)


def _dot(row, col) -> Scalar:
    acc = ZERO
    for x, y in zip(row, col):
        if x and y:
            acc = acc + x * y
    return acc


def mat_adjoint(a: Matrix) -> Matrix:
    return tuple(tuple(x.conjugate() for x in col) for col in zip(*a))


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_scale(c: Number, a: Matrix) -> Matrix:
    c = Scalar.coerce(c)
    return tuple(tuple(c * x for x in r) for r in a)


def is_square(a: Matrix) -> bool:
    return all(len(r) == len(a) for r in a)


def is_unitary(a: Matrix) -> bool:
    """Exact test of ``A*A = AA* = I``."""
    if not is_square(a):
        return False
    n = len(a)
    ident = identity(n)
    adj = mat_adjoint(a)
    return mat_mul(adj, a) == ident and mat_mul(a, adj) == ident


def mat_inverse(a: Matrix) -> Matrix:
    """Gauss-Jordan inverse over the Gaussian rationals.

    Raises ``ValueError`` for singular or non-square input.
    """
    if not is_square(a):
        raise ValueError("only square matrices are invertible")
    n = len(a)
    work = [list(row) + list(e) for row, e in zip(a, identity(n))]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col]), None)
        if pivot is None:
            raise ValueError("singular matrix")
        work[col], work[pivot] = work[pivot], work[col]
        inv = ONE / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for r in range(n):
            if r != col and work[r][col]:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return tuple(tuple(row[n:]) for row in work)


def cayley(skew: Matrix) -> Matrix:
    """``(I - S)(I + S)^-1`` for skew-Hermitian ``S``: an exact unitary."""
    n = len(skew)
    if mat_adjoint(skew) != mat_scale(-1, skew):
        raise ValueError("Cayley transform needs a skew-Hermitian matrix")
    ident = identity(n)
    return mat_mul(mat_add(ident, mat_scale(-1, skew)), mat_inverse(mat_add(ident, skew)))


def permutation_matrix(perm: Sequence[int]) -> Matrix:
    """Matrix sending basis vector ``j`` to ``perm[j]`` (1-based letters)."""
    n = len(perm)
    return tuple(
        tuple(ONE if perm[j] == i + 1 else ZERO for j in range(n)) for i in range(n)
    )


def format_matrix(a: Matrix) -> list:
    return [[str(x) for x in row] for row in a]


def parse_matrix(rows) -> Matrix:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ValueError("matrix must be a list of rows")
    return matrix([[_parse_entry(x) for x in r] for r in rows])


def _parse_entry(x) -> Scalar:
    if isinstance(x, bool):
        raise ValueError("booleans are not scalars")
    if isinstance(x, int):
        return Scalar.coerce(x)
    if isinstance(x, str):
        return Scalar.parse(x)
    raise ValueError(f"unsupported scalar entry {x!r}")
