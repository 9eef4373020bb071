"""Free Hilbert modules A^n over finite-dimensional C*-algebras, and an IBN test.

``A = M_{k_1} (+) ... (+) M_{k_m}``; an element of ``A`` is a tuple of square
block matrices.  ``A^n`` carries ``<x, y> = sum_i x_i* y_i`` and the right
action ``(x a)_i = x_i a``.  Adjointable operators on ``A^n`` are ``n x n``
matrices over ``A`` acting by ``(V x)_j = sum_i v_ji x_i``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .scalars import (
    Matrix,
    Number,
    identity,
    mat_add,
    mat_adjoint,
    mat_mul,
    mat_scale,
    matrix,
    zeros,
)

INFINITE = math.inf


@dataclass(frozen=True)
class FDAlgebra:
    block_sizes: tuple

    def __post_init__(self):
        sizes = tuple(self.block_sizes)
        if not sizes or any(isinstance(k, bool) or not isinstance(k, int) or k < 1 for k in sizes):
            raise ValueError("block sizes must be a nonempty list of positive integers")
        object.__setattr__(self, "block_sizes", sizes)

    # elements ---------------------------------------------------------------
    def element(self, blocks: Sequence) -> tuple:
        blocks = tuple(matrix(b) for b in blocks)
        if len(blocks) != len(self.block_sizes):
            raise ValueError("wrong number of blocks")
        for b, k in zip(blocks, self.block_sizes):
            if len(b) != k or any(len(r) != k for r in b):
                raise ValueError(f"block must be {k}x{k}")
        return blocks

    def one(self) -> tuple:
        return tuple(identity(k) for k in self.block_sizes)

    def zero(self) -> tuple:
        return tuple(zeros(k, k) for k in self.block_sizes)

    def scalar(self, c: Number) -> tuple:
        return self.scale(c, self.one())

    def add(self, a: tuple, b: tuple) -> tuple:
        return tuple(mat_add(x, y) for x, y in zip(a, b))

    def mul(self, a: tuple, b: tuple) -> tuple:
        return tuple(mat_mul(x, y) for x, y in zip(a, b))

    def adjoint(self, a: tuple) -> tuple:
        return tuple(mat_adjoint(x) for x in a)

    def scale(self, c: Number, a: tuple) -> tuple:
        return tuple(mat_scale(c, x) for x in a)

    def is_unitary(self, a: tuple) -> bool:
        one = self.one()
        return self.mul(self.adjoint(a), a) == one and self.mul(a, self.adjoint(a)) == one

    @property
    def dim(self) -> int:
        return sum(k * k for k in self.block_sizes)


@dataclass(frozen=True)
class ModuleVector:
    algebra: FDAlgebra
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.algebra.element(c) for c in self.coords))

    @property
    def n(self) -> int:
        return len(self.coords)

    def right(self, a: tuple) -> "ModuleVector":
        return ModuleVector(self.algebra, tuple(self.algebra.mul(x, a) for x in self.coords))

    def __add__(self, other: "ModuleVector") -> "ModuleVector":
        _same_shape(self, other)
        return ModuleVector(
            self.algebra, tuple(self.algebra.add(x, y) for x, y in zip(self.coords, other.coords))
        )


@dataclass(frozen=True)
class ModuleMatrix:
    """``entries[j][i]`` is ``v_{j+1, i+1}``."""

    algebra: FDAlgebra
    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(self.algebra.element(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)

    @property
    def shape(self) -> tuple:
        return (len(self.entries), len(self.entries[0]) if self.entries else 0)

    @classmethod
    def identity(cls, algebra: FDAlgebra, n: int) -> "ModuleMatrix":
        return cls(
            algebra,
            tuple(
                tuple(algebra.one() if i == j else algebra.zero() for i in range(n))
                for j in range(n)
            ),
        )

    @classmethod
    def from_scalars(cls, algebra: FDAlgebra, m: Matrix) -> "ModuleMatrix":
        return cls(algebra, tuple(tuple(algebra.scalar(c) for c in row) for row in matrix(m)))

    @classmethod
    def from_block_matrices(cls, algebra: FDAlgebra, mats: Sequence[Matrix]) -> "ModuleMatrix":
        """Read ``M_n(A)`` off ``(+)_b M_{n k_b}``: entry ``(j, i)`` of block ``b`` is
        the ``k_b x k_b`` tile at tile position ``(j, i)``."""
        if len(mats) != len(algebra.block_sizes):
            raise ValueError("wrong number of blocks")
        big = [matrix(m) for m in mats]
        sizes = algebra.block_sizes
        n, rem = divmod(len(big[0]), sizes[0])
        if rem or any(len(m) != n * k for m, k in zip(big, sizes)):
            raise ValueError("block matrices do not tile into n x n")
        return cls(
            algebra,
            tuple(
                tuple(
                    tuple(
                        tuple(tuple(m[j * k + p][i * k + q] for q in range(k)) for p in range(k))
                        for m, k in zip(big, sizes)
                    )
                    for i in range(n)
                )
                for j in range(n)
            ),
        )

    def to_block_matrices(self) -> tuple:
        n = self.shape[0]
        out = []
        for b, k in enumerate(self.algebra.block_sizes):
            out.append(
                tuple(
                    tuple(self.entries[r // k][c // k][b][r % k][c % k] for c in range(n * k))
                    for r in range(n * k)
                )
            )
        return tuple(out)

    def adjoint(self) -> "ModuleMatrix":
        A = self.algebra
        rows, cols = self.shape
        return ModuleMatrix(
            A, tuple(tuple(A.adjoint(self.entries[j][i]) for j in range(rows)) for i in range(cols))
        )

    def __matmul__(self, other: "ModuleMatrix") -> "ModuleMatrix":
        A = self.algebra
        if self.shape[1] != other.shape[0]:
            raise ValueError("shape mismatch")
        out = []
        for j in range(self.shape[0]):
            row = []
            for i in range(other.shape[1]):
                acc = A.zero()
                for k in range(self.shape[1]):
                    acc = A.add(acc, A.mul(self.entries[j][k], other.entries[k][i]))
                row.append(acc)
            out.append(tuple(row))
        return ModuleMatrix(A, tuple(out))


def _same_shape(x: ModuleVector, y: ModuleVector):
    if x.algebra != y.algebra or x.n != y.n:
        raise ValueError("shape mismatch")


def standard_basis(algebra: FDAlgebra, n: int) -> list:
    return [
        ModuleVector(algebra, tuple(algebra.one() if i == j else algebra.zero() for i in range(n)))
        for j in range(n)
    ]


def module_inner(x: ModuleVector, y: ModuleVector) -> tuple:
    """``<x, y> = sum_i x_i* y_i``."""
    _same_shape(x, y)
    A = x.algebra
    acc = A.zero()
    for a, b in zip(x.coords, y.coords):
        acc = A.add(acc, A.mul(A.adjoint(a), b))
    return acc


def check_orthonormal(F: Sequence[ModuleVector]) -> bool:
    if not F:
        return True
    for f in F[1:]:
        _same_shape(F[0], f)
    A = F[0].algebra
    one, zero = A.one(), A.zero()
    return all(
        module_inner(F[i], F[j]) == (one if i == j else zero)
        for i in range(len(F))
        for j in range(len(F))
    )


def _combine(F: Sequence[ModuleVector], coeffs: Sequence[tuple]) -> ModuleVector:
    out = F[0].right(coeffs[0])
    for f, c in zip(F[1:], coeffs[1:]):
        out = out + f.right(c)
    return out


def basis_expand(x: ModuleVector, F: Sequence[ModuleVector]) -> list:
    """Coefficients ``<f_i, x>``, so that ``x = sum_i f_i <f_i, x>``."""
    if len(F) != x.n or not check_orthonormal(F):
        raise ValueError("not orthonormal")
    return [module_inner(f, x) for f in F]


def basis_to_unitary(F: Sequence[ModuleVector]) -> ModuleMatrix:
    """``u_ij = <e_i, f_j>``; then ``U e_i = f_i``."""
    if not F:
        raise ValueError("empty basis")
    A, n = F[0].algebra, F[0].n
    if len(F) != n or not check_orthonormal(F):
        raise ValueError("not orthonormal")
    for e in standard_basis(A, n):
        if _combine(F, [module_inner(f, e) for f in F]) != e:
            raise ValueError("not generating")
    return ModuleMatrix(A, tuple(tuple(F[j].coords[i] for j in range(n)) for i in range(n)))


def check_unitary_matrix(U: ModuleMatrix) -> bool:
    rows, cols = U.shape
    if rows != cols:
        return False
    ident = ModuleMatrix.identity(U.algebra, rows)
    return U.adjoint() @ U == ident and U @ U.adjoint() == ident


def apply_matrix(V: ModuleMatrix, x: ModuleVector) -> ModuleVector:
    """``(V x)_j = sum_i v_ji x_i``."""
    if V.algebra != x.algebra or V.shape[1] != x.n:
        raise ValueError("shape mismatch")
    A = V.algebra
    out = []
    for row in V.entries:
        acc = A.zero()
        for v, c in zip(row, x.coords):
            acc = A.add(acc, A.mul(v, c))
        out.append(acc)
    return ModuleVector(A, tuple(out))


# -- K_0 and IBN ------------------------------------------------------------------


@dataclass(frozen=True)
class K0Data:
    """``Z^free_rank (+) Z/m_1 (+) ...`` with the class of the unit."""

    free_rank: int
    torsion_orders: tuple
    unit_class: tuple

    def __post_init__(self):
        tors = tuple(self.torsion_orders)
        unit = tuple(self.unit_class)
        if isinstance(self.free_rank, bool) or not isinstance(self.free_rank, int) or self.free_rank < 0:
            raise ValueError("inconsistent data: free rank must be a nonnegative integer")
        if any(isinstance(m, bool) or not isinstance(m, int) or m < 2 for m in tors):
            raise ValueError("inconsistent data: torsion orders must be integers >= 2")
        if any(isinstance(c, bool) or not isinstance(c, int) for c in unit):
            raise ValueError("inconsistent data: unit class must be integers")
        if len(unit) != self.free_rank + len(tors):
            raise ValueError("inconsistent data: unit class has the wrong length")
        object.__setattr__(self, "torsion_orders", tors)
        object.__setattr__(self, "unit_class", unit)


def unit_order(k: K0Data):
    """Least ``m >= 1`` with ``m [1] = 0``, or ``INFINITE``."""
    free = k.unit_class[: k.free_rank]
    if any(free):
        return INFINITE
    order = 1
    for m, c in zip(k.torsion_orders, k.unit_class[k.free_rank :]):
        order = math.lcm(order, m // math.gcd(c % m, m))
    return order


def ibn(k: K0Data) -> bool:
    """Invariant basis number: the unit class has infinite order.

    Flipping this predicate is the only change needed for the other reading
    of the criterion.
    """
    return unit_order(k) == INFINITE


def fd_to_k0(A: FDAlgebra) -> K0Data:
    return K0Data(len(A.block_sizes), (), A.block_sizes)

