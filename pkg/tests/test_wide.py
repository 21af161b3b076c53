import pytest

from oracles import tensor_dim_oracle
from widemorita import bimod, corpus, wide
from widemorita.report import ERROR, PASS
from widemorita.wide import (
    ContextMorphism,
    ContextTypeError,
    PreconditionError,
    WideContext,
    check_context,
    check_morphism,
    compose_morphisms,
    context_associator,
    context_from_equivalence,
    context_unitor_inverses,
    context_unitors,
    epi_implies_iso,
    identity_context,
    identity_morphism,
    multiply_contexts,
    multiply_morphisms,
)

BIM = corpus.BIM


def test_identity_contexts_pass(field):
    for alg in (corpus.ground(field), corpus.matrix_algebra(2, field), corpus.truncated_poly(2, field)):
        ctx = identity_context(BIM, alg)
        assert check_context(BIM, ctx).passed
    k = identity_context(BIM, corpus.ground(field))
    assert k.f.dim == k.g.dim == 1
    assert k.eta.matrix.a.tolist() == [[field.one]]


def test_matrix_context_and_corruption(field):
    ctx = corpus.matrix_morita(2, field)
    assert check_context(BIM, ctx).passed
    bad = check_context(BIM, corpus.corrupt_context(ctx, "eta", 2))
    assert not bad.passed
    w = bad.get("f-side").witness
    assert w["side"] == "f" and {"row", "col"} <= set(w)


def test_mistyped_context_raises(field):
    ctx = corpus.matrix_morita(2, field)
    with pytest.raises(ContextTypeError):
        check_context(BIM, WideContext(ctx.f, ctx.f, ctx.eta, ctx.rho))


def test_morphism_examples(field):
    ctx = corpus.matrix_morita(2, field)
    idm = identity_morphism(BIM, ctx)
    assert check_morphism(BIM, idm).passed
    assert check_morphism(BIM, compose_morphisms(BIM, idm, idm)).passed
    doubled = ContextMorphism(bimod.identity(ctx.f).scale(2), bimod.identity(ctx.g), ctx, ctx)
    assert not check_morphism(BIM, doubled).passed
    for m in corpus.context_endomorphisms(ctx):
        assert check_morphism(BIM, m).passed


def test_products_close(fp):
    for ctx, lam in corpus.composable_context_pairs(9, 8, fp):
        assert check_context(BIM, multiply_contexts(BIM, ctx, lam)).passed


def test_corner_times_reverse(field):
    m2 = corpus.matrix_algebra(2, field)
    c = corpus.corner_context(m2, corpus.corner_idempotents(m2)[1]).context
    prod = multiply_contexts(BIM, c, corpus.swap_context(c))
    assert check_context(BIM, prod).passed


def test_unit_laws_of_product(field):
    ctx = corpus.matrix_morita(2, field)
    right, left = context_unitors(BIM, ctx)
    rinv, linv = context_unitor_inverses(BIM, ctx)
    for m in (right, left, rinv, linv):
        assert check_morphism(BIM, m).passed
    assert compose_morphisms(BIM, right, rinv) == identity_morphism(BIM, ctx)
    i = identity_context(BIM, corpus.ground(field))
    ii = multiply_contexts(BIM, i, i)
    assert check_context(BIM, ii).passed
    r, _ = context_unitors(BIM, i)
    assert r.source == ii and r.alpha.is_invertible() and r.beta.is_invertible()


def test_associator_of_contexts(fp):
    for ctx, lam in corpus.composable_context_pairs(4, 3, fp):
        om = identity_context(BIM, BIM.source(lam.f))
        fwd, bwd = context_associator(BIM, ctx, lam, om)
        assert check_morphism(BIM, fwd).passed and check_morphism(BIM, bwd).passed
        assert compose_morphisms(BIM, bwd, fwd) == identity_morphism(BIM, fwd.source)


def test_product_functor_on_identities(fp):
    ctx, lam = corpus.composable_context_pairs(2, 1, fp)[0]
    prod = multiply_morphisms(BIM, identity_morphism(BIM, ctx), identity_morphism(BIM, lam))
    assert prod == identity_morphism(BIM, multiply_contexts(BIM, ctx, lam))


def test_product_of_valid_morphisms(fp):
    ctx = corpus.matrix_morita(2, fp)
    i = identity_context(BIM, BIM.source(ctx.f))
    ends = corpus.context_endomorphisms(ctx)
    for m in ends:
        assert check_morphism(BIM, multiply_morphisms(BIM, m, identity_morphism(BIM, i))).passed
    # interchange of the product with composition
    a, b = ends[1], ends[2]
    ia = identity_morphism(BIM, i)
    lhs = multiply_morphisms(BIM, compose_morphisms(BIM, a, b), compose_morphisms(BIM, ia, ia))
    rhs = compose_morphisms(BIM, multiply_morphisms(BIM, a, ia), multiply_morphisms(BIM, b, ia))
    assert lhs == rhs


def test_equivalence_identity(field):
    alg = corpus.matrix_algebra(2, field)
    i = bimod.unit_bimodule(alg)
    eta = bimod.right_unitor(i)
    res = context_from_equivalence(BIM, i, i, eta, eta.inverse())
    assert res.context.rho == bimod.left_unitor(i)
    assert res.dimension == 1 and res.report.passed


def test_equivalence_matrix_recovers_pairing(field):
    ctx = corpus.matrix_morita(2, field)
    res = context_from_equivalence(BIM, ctx.f, ctx.g, ctx.eta, corpus.matrix_morita_theta(2, field))
    assert res.context.rho == ctx.rho
    assert res.dimension == 1


def test_equivalence_requires_invertible_theta(field):
    ctx = corpus.matrix_morita(2, field)
    theta = corpus.matrix_morita_theta(2, field).scale(0)
    with pytest.raises(PreconditionError):
        context_from_equivalence(BIM, ctx.f, ctx.g, ctx.eta, theta)


def test_equivalence_diagrams(fp):
    ctx = corpus.matrix_morita(2, fp)
    assert wide.check_equivalence_diagrams(BIM, ctx.f, ctx.g, ctx.eta).passed


def test_epi_iso_matrix(field):
    ctx = corpus.matrix_morita(2, field)
    res = epi_implies_iso(BIM, ctx)
    assert res.report.passed
    assert res.eta_inverse @ ctx.eta == bimod.identity(ctx.eta.source)
    assert ctx.rho @ res.rho_inverse == bimod.identity(ctx.rho.target)


def test_epi_iso_matrix_three(fp):
    ctx = corpus.matrix_morita(3, fp)
    assert check_context(BIM, ctx).passed
    assert epi_implies_iso(BIM, ctx).report.passed


def test_epi_iso_degenerate_corner(field):
    kk = corpus.product_algebra(2, field)
    ctx = corpus.corner_context(kk, [1, 0]).context
    rep = epi_implies_iso(BIM, ctx).report
    assert "eta-not-surjective" in rep.names() and "skipped" in rep.names()


def test_matrix_tensor_dimensions(field):
    ctx = corpus.matrix_morita(2, field)
    fg, gf = bimod.tensor_over(ctx.f, ctx.g), bimod.tensor_over(ctx.g, ctx.f)
    assert (fg.dim, gf.dim) == (4, 1)
    assert (tensor_dim_oracle(ctx.f, ctx.g), tensor_dim_oracle(ctx.g, ctx.f)) == (4, 1)


def test_left_unitor_orderings(fp):
    rep = wide.left_unitor_orderings(BIM, corpus.matrix_morita(2, fp))
    assert rep.get("f-first").status == PASS
    assert rep.get("g-first").status == ERROR
