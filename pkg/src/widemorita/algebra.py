"""Finite-dimensional unital associative algebras given by structure constants."""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .exactla import Field, Matrix, ShapeError
from .report import Report


class Algebra:
    """Basis ``e_0 .. e_{d-1}`` with ``e_i e_j = sum_k c[i][j][k] e_k``.

    Equality and hashing are by value (field, structure constants, unit);
    ``name`` is a label only.
    """

    def __init__(self, field: Field, structure, unit, name: str | None = None):
        c = np.asarray(structure, dtype=object)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]):
            raise ShapeError("structure constants must have shape (d, d, d)")
        d = c.shape[0]
        arr = field.zeros((d, d, d))
        for idx in np.ndindex(c.shape):
            arr[idx] = field.coerce(c[idx])
        arr = field.reduce(arr)
        arr.flags.writeable = False
        unit = [field.coerce(u) for u in unit]
        if len(unit) != d:
            raise ShapeError("unit vector has the wrong length")
        self.field = field
        self.dim = d
        self.structure = arr
        self.unit = tuple(unit)
        self.name = name

    @cached_property
    def key(self):
        fmt = self.field.format
        return (
            self.field,
            self.dim,
            tuple(fmt(x) for x in self.structure.flat),
            tuple(fmt(x) for x in self.unit),
        )

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Algebra):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self):
        return hash(self.key)

    def __repr__(self):
        return f"Algebra({self.name or '?'}, dim={self.dim}, {self.field})"

    # operators

    @cached_property
    def left_matrices(self) -> tuple[Matrix, ...]:
        """``L_i`` with ``L_i y = e_i y``; entry ``[k, j] = c[i][j][k]``."""
        return tuple(Matrix(self.field, self.structure[i].T.copy()) for i in range(self.dim))

    @cached_property
    def right_matrices(self) -> tuple[Matrix, ...]:
        """``R_j`` with ``R_j y = y e_j``; entry ``[k, i] = c[i][j][k]``."""
        return tuple(
            Matrix(self.field, self.structure[:, j, :].T.copy()) for j in range(self.dim)
        )

    @cached_property
    def unit_vector(self) -> Matrix:
        return Matrix.column(self.field, self.unit)

    def basis_vector(self, i: int) -> Matrix:
        a = self.field.zeros((self.dim, 1))
        a[i, 0] = self.field.one
        return Matrix(self.field, a)

    def left_matrix(self, x) -> Matrix:
        return _combine(self.field, _as_list(self, x), self.left_matrices, self.dim)

    def right_matrix(self, y) -> Matrix:
        return _combine(self.field, _as_list(self, y), self.right_matrices, self.dim)

    def is_commutative(self) -> bool:
        return bool(np.all(self.structure == self.structure.transpose(1, 0, 2)))


def _as_list(alg: Algebra, x) -> list:
    if isinstance(x, Matrix):
        x = [x[i, 0] for i in range(x.rows)]
    x = [alg.field.coerce(v) for v in x]
    if len(x) != alg.dim:
        raise ShapeError(f"vector of length {len(x)} in an algebra of dim {alg.dim}")
    return x


def _combine(field, coeffs, mats, n):
    out = field.zeros((n, n))
    for c, m in zip(coeffs, mats):
        if c != 0:
            out = out + m.a * c
    return Matrix(field, out)


def multiply(alg: Algebra, x, y) -> list:
    """Product ``x y`` of coordinate vectors."""
    x = _as_list(alg, x)
    y = _as_list(alg, y)
    f = alg.field
    out = []
    for k in range(alg.dim):
        s = f.zero
        for i in range(alg.dim):
            if x[i] == 0:
                continue
            for j in range(alg.dim):
                if y[j] != 0:
                    s = s + x[i] * y[j] * alg.structure[i, j, k]
        out.append(f.coerce(s))
    return out


def validate_algebra(alg: Algebra) -> Report:
    """Check associativity on basis triples and both unit laws."""
    rep = Report("algebra")
    d = alg.dim
    f = alg.field
    basis = [[f.one if i == j else f.zero for i in range(d)] for j in range(d)]
    bad = []
    for i in range(d):
        for j in range(d):
            ij = multiply(alg, basis[i], basis[j])
            for l in range(d):
                lhs = multiply(alg, ij, basis[l])
                rhs = multiply(alg, basis[i], multiply(alg, basis[j], basis[l]))
                if lhs != rhs:
                    bad.append((i, j, l, lhs, rhs))
    if bad:
        i, j, l, lhs, rhs = bad[0]
        k = next(k for k in range(d) if lhs[k] != rhs[k])
        rep.fail(
            "associativity",
            {
                "triple": [i, j, l],
                "coordinate": k,
                "lhs": f.format(lhs[k]),
                "rhs": f.format(rhs[k]),
                "violations": len(bad),
            },
        )
    else:
        rep.ok("associativity")
    for side in ("left", "right"):
        viol = None
        for i in range(d):
            prod = (
                multiply(alg, alg.unit, basis[i])
                if side == "left"
                else multiply(alg, basis[i], alg.unit)
            )
            if prod != basis[i]:
                k = next(k for k in range(d) if prod[k] != basis[i][k])
                viol = {
                    "basis": i,
                    "coordinate": k,
                    "lhs": f.format(prod[k]),
                    "rhs": f.format(basis[i][k]),
                }
                break
        if viol:
            rep.fail(f"unit-{side}", viol)
        else:
            rep.ok(f"unit-{side}")
    return rep


def is_idempotent(alg: Algebra, e) -> bool:
    e = _as_list(alg, e)
    return multiply(alg, e, e) == e


def algebra_from_basis_matrices(field: Field, mats, unit, name=None) -> Algebra:
    """Algebra spanned by linearly independent square matrices closed under product.

    Structure constants are found by solving ``mats[i] @ mats[j]`` in the span.
    """
    from .exactla import solve_linear

    d = len(mats)
    span = Matrix(field, [[x for x in m.vec()] for m in mats]).T
    c = [[[0] * d for _ in range(d)] for _ in range(d)]
    for i in range(d):
        for j in range(d):
            prod = mats[i] @ mats[j]
            sol = solve_linear(span, Matrix.column(field, prod.vec()))
            if not sol.solvable:
                raise ValueError("matrices are not closed under multiplication")
            for k in range(d):
                c[i][j][k] = sol.x[k, 0]
    return Algebra(field, c, unit, name)


def algebra_map_matrix_ok(src: Algebra, tgt: Algebra, phi: Matrix) -> bool:
    """Whether ``phi`` (tgt.dim x src.dim) is a unital algebra map."""
    if phi.shape != (tgt.dim, src.dim):
        return False
    if phi @ src.unit_vector != tgt.unit_vector:
        return False
    for i in range(src.dim):
        for j in range(src.dim):
            lhs = phi @ Matrix.column(src.field, multiply(src, _e(src, i), _e(src, j)))
            pi = [phi[k, i] for k in range(tgt.dim)]
            pj = [phi[k, j] for k in range(tgt.dim)]
            rhs = Matrix.column(tgt.field, multiply(tgt, pi, pj))
            if lhs != rhs:
                return False
    return True


def _e(alg, i):
    return [alg.field.one if k == i else alg.field.zero for k in range(alg.dim)]
