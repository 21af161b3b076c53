"""Exact scalar arithmetic and dense linear algebra.

Two field modes are supported: the rationals (entries are
:class:`fractions.Fraction` held in numpy object arrays) and prime fields
GF(p) (entries are canonical residues in ``[0, p)``, held in ``int64``
arrays when products cannot overflow, otherwise in object arrays).

Everything here is exact; there is no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class FieldMismatch(ValueError):
    """Raised when values from two different field modes are combined."""


class ShapeError(ValueError):
    pass


# ----------------------------------------------------------------------------
# fields


class Field:
    """Common interface of the two field modes."""

    name: str
    dtype: object

    def coerce(self, x):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        return arr

    def format(self, x) -> str:
        raise NotImplementedError

    def parse(self, s: str):
        raise NotImplementedError

    def random_element(self, rng, nonzero=False):
        raise NotImplementedError

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def array(self, rows) -> np.ndarray:
        rows = list(rows)
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        out = np.empty((nrows, ncols), dtype=self.dtype)
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ShapeError("ragged matrix rows")
            for j, x in enumerate(row):
                out[i, j] = self.coerce(x)
        return out

    def zeros(self, shape) -> np.ndarray:
        out = np.zeros(shape, dtype=self.dtype)
        if self.dtype is object:
            out[...] = self.zero
        return out

    def __repr__(self):
        return self.name


class Rationals(Field):
    name = "Q"
    dtype = object

    def coerce(self, x):
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, (float, np.floating)):
            raise TypeError("floating point values are not exact scalars")
        return Fraction(int(x)) if isinstance(x, (int, np.integer)) else Fraction(x)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)

    def format(self, x) -> str:
        x = Fraction(x)
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"

    def parse(self, s: str):
        return Fraction(s.strip())

    def random_element(self, rng, nonzero=False):
        while True:
            num = int(rng.integers(-9, 10))
            den = int(rng.integers(1, 4))
            x = Fraction(num, den)
            if x or not nonzero:
                return x

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")


class PrimeField(Field):
    """GF(p) for a prime p; primality is checked by trial division."""

    def __init__(self, p: int):
        p = int(p)
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"Fp:{p}"
        # int64 is safe while a dot product of a few thousand terms fits
        self.dtype = np.int64 if p < (1 << 25) else object

    def coerce(self, x):
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        if isinstance(x, (float, np.floating)):
            raise TypeError("floating point values are not exact scalars")
        return int(x) % self.p

    def inv(self, x):
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def reduce(self, arr):
        return arr % self.p

    def format(self, x) -> str:
        return str(int(x) % self.p)

    def parse(self, s: str):
        return self.coerce(Fraction(s.strip()))

    def random_element(self, rng, nonzero=False):
        lo = 1 if nonzero else 0
        return int(rng.integers(lo, self.p))

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))


QQ = Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(spec: str) -> Field:
    """Parse a field descriptor: ``Q`` or ``Fp:<p>``."""
    spec = spec.strip()
    if spec == "Q":
        return QQ
    if spec.startswith("Fp:"):
        return PrimeField(int(spec[3:]))
    raise ValueError(f"unknown field descriptor {spec!r}")


# ----------------------------------------------------------------------------
# matrices


class Matrix:
    """Immutable dense matrix over a :class:`Field`."""

    __slots__ = ("field", "a", "__dict__")

    def __init__(self, field: Field, a):
        if not isinstance(a, np.ndarray):
            a = field.array(a)
        elif a.dtype != np.dtype(field.dtype):
            a = field.array(a.tolist()) if a.ndim == 2 else a.astype(field.dtype)
        if a.ndim != 2:
            raise ShapeError("matrices are two dimensional")
        reduced = field.reduce(a)
        if reduced is a:
            reduced = a.copy()
        reduced.flags.writeable = False
        a = reduced
        self.field = field
        self.a = a

    # constructors

    @classmethod
    def zeros(cls, field, rows, cols):
        return cls(field, field.zeros((rows, cols)))

    @classmethod
    def identity(cls, field, n):
        a = field.zeros((n, n))
        for i in range(n):
            a[i, i] = field.one
        return cls(field, a)

    @classmethod
    def column(cls, field, values: Sequence):
        return cls(field, [[v] for v in values]) if len(values) else cls.zeros(field, 0, 1)

    @classmethod
    def from_columns(cls, field, cols: Sequence["Matrix"], nrows: int):
        if not cols:
            return cls.zeros(field, nrows, 0)
        return hstack(list(cols))

    # basic protocol

    @property
    def shape(self):
        return self.a.shape

    @property
    def rows(self):
        return self.a.shape[0]

    @property
    def cols(self):
        return self.a.shape[1]

    def __getitem__(self, idx):
        return self.a[idx]

    def _check(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        if self.cols == 0:
            return Matrix.zeros(self.field, self.rows, other.cols)
        return Matrix(self.field, self.a @ other.a)

    def __add__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return Matrix(self.field, self.a + other.a)

    def __sub__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot subtract {self.shape} and {other.shape}")
        return Matrix(self.field, self.a - other.a)

    def __neg__(self):
        return Matrix(self.field, -self.a)

    def scale(self, c) -> "Matrix":
        c = self.field.coerce(c)
        return Matrix(self.field, self.a * c)

    def __mul__(self, c):
        if isinstance(c, Matrix):
            raise TypeError("use @ for matrix products")
        return self.scale(c)

    __rmul__ = __mul__

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, self.a.T.copy())

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and bool(np.all(self.a == other.a))
        )

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    @cached_property
    def key(self):
        if self.a.dtype == object:
            body = tuple(self.field.format(x) for x in self.a.flat)
        else:
            body = self.a.tobytes()
        return (self.field, self.shape, body)

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self):
        return hash(self.key)

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(x) for x in row) for row in self.a)
        return f"Matrix<{self.field}>[{body}]"

    def is_zero(self) -> bool:
        return bool(np.all(self.a == 0))

    def to_strings(self) -> list:
        fmt = self.field.format
        return [[fmt(x) for x in row] for row in self.a]

    @classmethod
    def from_strings(cls, field, rows, cols=None):
        if not rows:
            return cls.zeros(field, 0, cols or 0)
        return cls(field, [[field.parse(x) for x in row] for row in rows])

    def kron(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix(self.field, np.kron(self.a, other.a))

    def block(self, rows=None, cols=None) -> "Matrix":
        a = self.a
        if rows is not None:
            a = a[list(rows), :]
        if cols is not None:
            a = a[:, list(cols)]
        return Matrix(self.field, np.array(a, dtype=self.a.dtype))

    def vec(self) -> list:
        """Row-major list of entries."""
        return list(self.a.flat)

    # linear algebra conveniences

    def rank(self) -> int:
        return len(rref(self)[1])

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ShapeError("only square matrices are invertible")
        n = self.rows
        r, piv = rref(hstack([self, Matrix.identity(self.field, n)]))
        if piv[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return r.block(cols=range(n, 2 * n))

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows


def hstack(ms: Sequence[Matrix]) -> Matrix:
    field = ms[0].field
    for m in ms:
        ms[0]._check(m)
    return Matrix(field, np.hstack([m.a for m in ms]))


def vstack(ms: Sequence[Matrix]) -> Matrix:
    field = ms[0].field
    for m in ms:
        ms[0]._check(m)
    return Matrix(field, np.vstack([m.a for m in ms]))


def block_diag(ms: Sequence[Matrix]) -> Matrix:
    field = ms[0].field
    rows = sum(m.rows for m in ms)
    cols = sum(m.cols for m in ms)
    out = field.zeros((rows, cols))
    r = c = 0
    for m in ms:
        ms[0]._check(m)
        out[r : r + m.rows, c : c + m.cols] = m.a
        r += m.rows
        c += m.cols
    return Matrix(field, out)


# ----------------------------------------------------------------------------
# elimination


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row-echelon form of ``m`` and its pivot columns."""
    field = m.field
    a = np.array(m.a, dtype=m.a.dtype)
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c] != 0)
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        piv = a[r, c]
        if piv != 1:
            a[r] = field.reduce(a[r] * field.inv(piv))
        others = np.flatnonzero(a[:, c] != 0)
        others = others[others != r]
        if others.size:
            a[others] = field.reduce(a[others] - np.outer(a[others, c], a[r]))
        pivots.append(c)
        r += 1
    return Matrix(field, a), pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: Matrix) -> Matrix:
    """Columns spanning the right null space of ``m``."""
    field = m.field
    r, piv = rref(m)
    ncols = m.cols
    free = [c for c in range(ncols) if c not in set(piv)]
    out = field.zeros((ncols, len(free)))
    for k, fc in enumerate(free):
        out[fc, k] = field.one
        for row, pc in enumerate(piv):
            out[pc, k] = -r.a[row, fc]
    return Matrix(field, field.reduce(out) if out.size else out)


@dataclass(frozen=True)
class Solution:
    """One solution of ``a x = b`` plus the dimension of the solution space.

    ``x`` is ``None`` when the system is inconsistent; ``dimension`` is then
    meaningless and set to ``-1``.
    """

    x: Matrix | None
    dimension: int

    @property
    def solvable(self) -> bool:
        return self.x is not None


def solve_linear(a: Matrix, b: Matrix) -> Solution:
    """Solve ``a x = b`` exactly for a column (or multi-column) ``b``."""
    a._check(b)
    if a.rows != b.rows:
        raise ShapeError(f"shape mismatch {a.shape} vs {b.shape}")
    field = a.field
    n = a.cols
    r, piv = rref(hstack([a, b]))
    if any(p >= n for p in piv):
        return Solution(None, -1)
    x = field.zeros((n, b.cols))
    for row, pc in enumerate(piv):
        x[pc] = r.a[row, n:]
    return Solution(Matrix(field, x), n - len(piv))


def left_inverse(s: Matrix) -> Matrix:
    """A left inverse of a matrix with independent columns."""
    field = s.field
    _, piv = rref(s.T)
    if len(piv) != s.cols:
        raise ValueError("columns are not independent")
    sub = s.block(rows=piv)
    sel = field.zeros((s.cols, s.rows))
    for k, p in enumerate(piv):
        sel[k, p] = field.one
    return sub.inverse() @ Matrix(field, sel)


def column_space_basis(m: Matrix) -> Matrix:
    """Independent columns of ``m`` (the pivot columns) spanning its image."""
    _, piv = rref(m)
    return m.block(cols=piv)


# ----------------------------------------------------------------------------
# quotients


@dataclass(frozen=True, eq=False)
class QuotientSpace:
    """A quotient ``k^n / span(relations)`` with a deterministic basis.

    The quotient basis is the image of the standard basis vectors that are not
    pivots of the reduced relation span.  ``projection`` reduces any ambient
    vector modulo the relations; ``section`` lifts quotient coordinates back
    to those standard vectors.
    """

    ambient_dim: int
    quotient_dim: int
    projection: Matrix
    section: Matrix
    relation_basis: Matrix  # rows, in reduced echelon form
    pivots: tuple

    @property
    def field(self):
        return self.projection.field


def quotient_space(field: Field, ambient_dim: int, relations) -> QuotientSpace:
    """Quotient of ``field**ambient_dim`` by the span of ``relations``.

    ``relations`` is a Matrix whose rows are the relation vectors, or an
    iterable of vectors.
    """
    if isinstance(relations, Matrix):
        rel = relations
    else:
        rel = list(relations)
        rel = Matrix(field, rel) if rel else Matrix.zeros(field, 0, ambient_dim)
    if rel.cols != ambient_dim:
        raise ShapeError(f"relations have length {rel.cols}, expected {ambient_dim}")
    if rel.rows:
        r, piv = rref(rel)
        basis = r.block(rows=range(len(piv)))
    else:
        piv, basis = [], Matrix.zeros(field, 0, ambient_dim)
    pset = set(piv)
    free = [c for c in range(ambient_dim) if c not in pset]
    proj = field.zeros((len(free), ambient_dim))
    sec = field.zeros((ambient_dim, len(free)))
    for k, fc in enumerate(free):
        proj[k, fc] = field.one
        sec[fc, k] = field.one
        for row, pc in enumerate(piv):
            proj[k, pc] = -basis.a[row, fc]
    return QuotientSpace(
        ambient_dim,
        len(free),
        Matrix(field, proj),
        Matrix(field, sec),
        basis,
        tuple(piv),
    )


# ----------------------------------------------------------------------------
# spaces of matrices cut out by linear conditions


def elementary(field: Field, rows: int, cols: int, i: int, j: int) -> Matrix:
    a = field.zeros((rows, cols))
    a[i, j] = field.one
    return Matrix(field, a)


def matrices_satisfying(field: Field, rows: int, cols: int, condition) -> list[Matrix]:
    """Basis of ``{X : condition(X) = 0}`` for a linear ``condition``.

    ``condition`` maps a ``rows x cols`` Matrix to a Matrix (or list of
    matrices); it is evaluated on the elementary matrices.
    """
    images = []
    for i in range(rows):
        for j in range(cols):
            out = condition(elementary(field, rows, cols, i, j))
            if isinstance(out, Matrix):
                out = [out]
            images.append([x for m in out for x in m.vec()])
    if not images:
        return []
    constraint = Matrix(field, images).T
    kb = kernel_basis(constraint)
    result = []
    for k in range(kb.cols):
        col = kb.a[:, k]
        result.append(Matrix(field, np.array(col, dtype=kb.a.dtype).reshape(rows, cols)))
    return result


def combine(field: Field, coeffs: Iterable, mats: Sequence[Matrix], shape) -> Matrix:
    out = Matrix.zeros(field, *shape)
    for c, m in zip(coeffs, mats):
        out = out + m.scale(c)
    return out


def random_matrix(field: Field, rng, rows: int, cols: int) -> Matrix:
    return Matrix(field, [[field.random_element(rng) for _ in range(cols)] for _ in range(rows)])


def random_invertible(field: Field, rng, n: int) -> Matrix:
    while True:
        m = random_matrix(field, rng, n, n)
        if m.is_invertible():
            return m
