import numpy as np
import pytest

from oracles import hom_dim_oracle, tensor_dim_oracle
from widemorita import bimod, corpus
from widemorita.bimod import (
    AlgebraMismatch,
    Bimodule,
    BimoduleMap,
    IllDefinedMap,
    associator,
    associator_inv,
    identity,
    induced_map,
    left_unitor,
    left_unitor_inv,
    regular_bimodule,
    right_unitor,
    right_unitor_inv,
    tensor_over,
    validate_bimodule,
)
from widemorita.exactla import Matrix, QQ


def test_regular_and_column_valid(field):
    m2 = corpus.matrix_algebra(2, field)
    assert validate_bimodule(regular_bimodule(m2)).passed
    assert validate_bimodule(corpus.column_bimodule(2, field)).passed


def test_unreversed_right_action_reported():
    m2 = corpus.matrix_algebra(2, QQ)
    bad = Bimodule(m2, m2, m2.left_matrices, m2.left_matrices)
    assert not validate_bimodule(bad).passed


def test_tensor_dimensions_against_relation_oracle(field):
    col, row = corpus.column_bimodule(2, field), corpus.row_bimodule(2, field)
    m2 = regular_bimodule(corpus.matrix_algebra(2, field))
    for a, b, want in ((col, row, 4), (m2, m2, 4), (row, col, 1)):
        t = tensor_over(a, b)
        assert t.dim == want == tensor_dim_oracle(a, b)
        assert validate_bimodule(t).passed


def test_random_tensor_dims_match_oracle(fp):
    for seed in range(6):
        algs, mods = corpus.random_chain(seed, 2, fp)
        t = tensor_over(*mods)
        assert t.dim == tensor_dim_oracle(*mods)


def test_tensor_middle_mismatch(field):
    col = corpus.column_bimodule(2, field)
    with pytest.raises(AlgebraMismatch):
        tensor_over(col, col)


def test_hom_space_dimension_oracle():
    col, row = corpus.column_bimodule(2, QQ), corpus.row_bimodule(2, QQ)
    for a, b in ((col, col), (row, row), (tensor_over(col, row), regular_bimodule(corpus.matrix_algebra(2, QQ)))):
        assert len(bimod.hom_basis(a, b)) == hom_dim_oracle(a, b)


def test_induced_identity_and_scaling(field):
    col, row = corpus.column_bimodule(2, field), corpus.row_bimodule(2, field)
    t = tensor_over(col, row)
    assert induced_map(identity(col), identity(row)) == identity(t)
    two = induced_map(identity(col).scale(3), identity(row))
    assert two == identity(t).scale(3)


def test_interchange_on_random_instances(fp):
    rng = np.random.default_rng(2)
    for seed in range(5):
        algs, (m, n) = corpus.random_chain(seed, 2, fp)
        f, g = corpus.random_endomorphism(rng, m), corpus.random_endomorphism(rng, n)
        lhs = induced_map(f, identity(n)) @ induced_map(identity(m), g)
        assert lhs == induced_map(f, g)


def test_ill_defined_map_detected():
    # a linear but not right-linear map on columns breaks the tensor relations
    col, row = corpus.column_bimodule(2, QQ), corpus.row_bimodule(2, QQ)
    m2 = regular_bimodule(corpus.matrix_algebra(2, QQ))
    t = tensor_over(m2, col)
    bad = BimoduleMap(m2, m2, Matrix(QQ, [[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]))
    with pytest.raises(IllDefinedMap):
        induced_map(bad, identity(col))


def _triple_oracle(m, n, p):
    """Associator computed independently: lift to the triple ambient, push down the other way."""
    l, r = tensor_over(tensor_over(m, n), p), tensor_over(m, tensor_over(n, p))
    mn, np_ = tensor_over(m, n), tensor_over(n, p)
    # section of (mn)p lands in mn (x) p ambient; expand mn by its section
    up = mn.section.kron(Matrix.identity(m.field, p.dim)) @ l.section
    down = r.projection @ Matrix.identity(m.field, m.dim).kron(np_.projection)
    return down @ up


def test_associator_matches_triple_ambient_oracle(fp):
    for seed in range(4):
        algs, (m, n, p) = corpus.random_chain(seed, 3, fp)
        a = associator(m, n, p)
        assert a.matrix == _triple_oracle(m, n, p)
        assert associator_inv(m, n, p) @ a == identity(a.source)


def test_associator_ground_and_m2(field):
    k = corpus.ground(field)
    u = regular_bimodule(k)
    a = associator(u, u, u)
    assert a.matrix == Matrix.identity(field, 1)
    m2 = regular_bimodule(corpus.matrix_algebra(2, field))
    a = associator(m2, m2, m2)
    assert a.source.dim == a.target.dim == 4 and a.is_invertible()


def test_unitors(field):
    alg = corpus.matrix_algebra(2, field)
    i = bimod.unit_bimodule(alg)
    assert right_unitor(i) == left_unitor(i)
    for m in (corpus.column_bimodule(2, field), corpus.row_bimodule(2, field), i):
        assert right_unitor(m) @ right_unitor_inv(m) == identity(m)
        assert left_unitor_inv(m) @ left_unitor(m) == identity(left_unitor(m).source)


def test_rebracket_is_identity_on_same_shape(fp):
    algs, (m, n, p) = corpus.random_chain(1, 3, fp)
    t = tensor_over(tensor_over(m, n), p)
    assert bimod.rebracket(t, t) == identity(t)
    s = tensor_over(m, tensor_over(n, p))
    assert bimod.rebracket(s, t) @ bimod.rebracket(t, s) == identity(t)
    assert bimod.rebracket(t, s) == associator(m, n, p)


def test_map_validation_flags_non_bimodule_map():
    col = corpus.column_bimodule(2, QQ)
    bad = BimoduleMap(col, col, Matrix(QQ, [[1, 0], [0, 2]]))
    assert not bimod.validate_map(bad).passed
    assert bimod.validate_map(identity(col)).passed
