from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import rank_by_minors, rank_of, rank_plain, sympy_rank
from widemorita.exactla import (
    GF,
    QQ,
    FieldMismatch,
    Matrix,
    ShapeError,
    kernel_basis,
    parse_field,
    quotient_space,
    random_invertible,
    random_matrix,
    rank,
    rref,
    solve_linear,
)

small = st.integers(-6, 6)


def mats(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def test_parse_field():
    assert parse_field("Q") is QQ or parse_field("Q") == QQ
    assert parse_field("Fp:101") == GF(101)
    for bad in ("Fp:100", "Fp:x", "R", "Fp:1"):
        with pytest.raises(ValueError):
            parse_field(bad)


def test_prime_field_arithmetic():
    f = GF(101)
    assert f.inv(f.coerce(2)) == 51
    assert f.coerce(-1) == 100
    assert f.format(f.coerce(-1)) == "100"
    with pytest.raises(ZeroDivisionError):
        f.inv(f.zero)
    for x in range(1, 101):
        assert (x * int(f.inv(f.coerce(x)))) % 101 == 1


def test_rational_format_parse_roundtrip():
    for s in ("0", "3", "-7/2", "5/3"):
        assert QQ.format(QQ.parse(s)) == s
    with pytest.raises(ZeroDivisionError):
        QQ.inv(QQ.zero)


def test_rref_identity_and_rank_one():
    m, piv = rref(Matrix.identity(QQ, 2))
    assert m == Matrix.identity(QQ, 2) and list(piv) == [0, 1]
    m, piv = rref(Matrix(QQ, [[1, 2], [2, 4]]))
    assert m == Matrix(QQ, [[1, 2], [0, 0]]) and list(piv) == [0]


def test_rank_random_5x7_matches_minor_oracle(fp):
    rng = np.random.default_rng(11)
    for _ in range(5):
        m = random_matrix(fp, rng, 5, 7)
        rows = [list(map(int, r)) for r in m.a.tolist()]
        assert rank(m) == rank_by_minors(rows, 101, max_k=4) or (rank(m) == 5 and rank_by_minors(rows, 101) == 4)


@given(mats(4, 5))
def test_rank_matches_plain_elimination_over_q(rows):
    m = Matrix(QQ, rows)
    assert rank(m) == rank_plain(rows) == sympy_rank(m)


@given(mats(4, 4))
def test_rank_matches_plain_elimination_mod_p(rows):
    m = Matrix(GF(7), rows)
    assert rank(m) == rank_plain(rows, 7)


def test_kernel_examples():
    assert kernel_basis(Matrix.identity(QQ, 3)).cols == 0
    k = kernel_basis(Matrix(QQ, [[1, 1]]))
    assert k.cols == 1
    assert k.a[0, 0] == -k.a[1, 0] != 0


@given(mats(4, 6))
def test_kernel_is_annihilated_and_full(rows):
    m = Matrix(QQ, rows)
    k = kernel_basis(m)
    assert (m @ k).is_zero()
    assert k.cols == 6 - rank(m)
    assert rank(k) == k.cols


def test_solve_linear_examples(field):
    b = Matrix.column(field, [3, 4])
    sol = solve_linear(Matrix.identity(field, 2), b)
    assert sol.solvable and sol.x == b and sol.dimension == 0
    sol = solve_linear(Matrix(field, [[1, 1], [1, 1]]), Matrix.column(field, [1, 2]))
    assert not sol.solvable


def test_solve_linear_random_residual(field):
    rng = np.random.default_rng(5)
    a = random_matrix(field, rng, 4, 6)
    x0 = random_matrix(field, rng, 6, 1)
    b = a @ x0
    sol = solve_linear(a, b)
    assert sol.solvable and a @ sol.x == b
    assert sol.dimension == 6 - rank(a)


def test_inverse_and_shape_errors(field):
    rng = np.random.default_rng(3)
    p = random_invertible(field, rng, 4)
    assert p @ p.inverse() == Matrix.identity(field, 4)
    with pytest.raises((ValueError, ZeroDivisionError)):
        Matrix(field, [[1, 2], [2, 4]]).inverse()
    with pytest.raises(ShapeError):
        Matrix(field, [[1, 2]]) @ Matrix(field, [[1, 2]])


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        Matrix(QQ, [[1]]) + Matrix(GF(5), [[1]])


def test_quotient_examples(field):
    q = quotient_space(field, 3, Matrix.zeros(field, 0, 3))
    assert q.quotient_dim == 3 and q.projection == Matrix.identity(field, 3)
    q = quotient_space(field, 2, Matrix(field, [[1, -1]]))
    assert q.quotient_dim == 1
    assert (q.projection @ Matrix.column(field, [1, -1])).is_zero()
    assert q.projection @ q.section == Matrix.identity(field, 1)


@given(mats(3, 6))
def test_quotient_invariants(rows):
    f = QQ
    rel = Matrix(f, rows)
    q = quotient_space(f, 6, rel)
    assert q.quotient_dim == 6 - rank_of(rel)
    assert q.projection @ q.section == Matrix.identity(f, q.quotient_dim)
    assert (q.projection @ rel.T).is_zero()
    assert rank(q.projection) == q.quotient_dim


def test_fraction_entries_stay_exact():
    m = Matrix(QQ, [[Fraction(1, 3), 1], [1, 3]])
    assert rank(m) == 1
    assert m.a[0, 0] == Fraction(1, 3)
