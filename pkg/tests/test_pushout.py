import numpy as np
import pytest

from widemorita import bimod, corpus, coring
from widemorita.coring import InvalidInput, check_wrem_context, classical_to_wrem, validate_comodule
from widemorita.pushout import (
    CatSamples,
    ComoduleMorphism,
    check_cat_context,
    cofree_identity,
    eta_tilde,
    extract,
    pushout_apply,
    pushout_map,
    reconstruct_context,
)
from widemorita.report import ERROR, FAIL


@pytest.fixture
def sweedler(fp):
    return corpus.sweedler_context(fp)


@pytest.fixture
def matrix_cells(fp):
    return corpus.trivial_cell_context(corpus.matrix_morita(2, fp), "matrix-2")


def test_pushout_of_cofree_is_comodule(sweedler):
    ctx = sweedler.context
    for cell in (ctx.f, ctx.g):
        x = coring.cofree_comodule(cell.target)
        y = pushout_apply(cell, x)
        assert y.coring == cell.source
        assert validate_comodule(y).passed


def test_pushout_wrong_coring(sweedler):
    ctx = sweedler.context
    with pytest.raises(InvalidInput):
        pushout_apply(ctx.f, coring.cofree_comodule(ctx.g.target))


def test_pushout_map_is_additive_functor(fp, matrix_cells):
    rng = np.random.default_rng(0)
    cell = matrix_cells.context.f
    xs = corpus.right_module_samples(cell.target.base)
    x = xs[1]
    basis = coring.colinear_maps(x, x)
    f = bimod.combine_maps([fp.random_element(rng) for _ in basis], basis, x.carrier, x.carrier)
    g = bimod.combine_maps([fp.random_element(rng) for _ in basis], basis, x.carrier, x.carrier)
    assert pushout_map(cell, f + g) == pushout_map(cell, f) + pushout_map(cell, g)
    assert pushout_map(cell, f @ g) == pushout_map(cell, f) @ pushout_map(cell, g)
    z = bimod.zero_map(x.carrier, x.carrier)
    assert pushout_map(cell, z).matrix.is_zero()
    assert pushout_map(cell, bimod.identity(x.carrier)) == bimod.identity(pushout_apply(cell, x).carrier)


def test_cat_context_matrix(fp, matrix_cells):
    ctx = matrix_cells.context
    samples = corpus.cat_samples(ctx, 0, morphisms=5)
    assert len(samples.over_c) >= 3 and len(samples.over_d) >= 3
    assert len(samples.morphisms_c) + len(samples.morphisms_d) == 5
    rep = check_cat_context(ctx, samples)
    assert rep.passed, rep.failures
    assert set(rep.names()) == {
        "eta-colinear", "rho-colinear", "eta-natural", "rho-natural", "eta-compatible", "rho-compatible",
    }


def test_cat_context_identity_and_sweedler(fp, sweedler):
    for ctx in (coring.identity_wrem_context(corpus.sweedler_over_ground(corpus.truncated_poly(2, fp))), sweedler.context):
        assert check_cat_context(ctx, corpus.cat_samples(ctx, 1)).passed


def test_cat_context_detects_scaled_eta(fp, sweedler):
    ctx = sweedler.context
    bad = coring.wrem_context(ctx.f, ctx.g, ctx.eta.map.scale(2), ctx.rho.map)
    rep = check_cat_context(bad, corpus.cat_samples(ctx, 1))
    assert rep.get("rho-compatible").status == FAIL or rep.get("eta-compatible").status == FAIL
    w = next(f.witness for f in rep.failures)
    assert "sample" in w


def test_non_colinear_sample_is_error(fp, sweedler):
    ctx = sweedler.context
    cf = coring.cofree_comodule(ctx.f.target)
    bad = [f for f in bimod.hom_basis(cf.carrier, cf.carrier) if coring.is_colinear(f, cf, cf) is not None]
    samples = CatSamples([cf], [], [ComoduleMorphism(cf, cf, bad[0], "bad")], [])
    assert check_cat_context(ctx, samples).get("eta-natural").status == ERROR


def test_cofree_identity(fp, sweedler, matrix_cells):
    for ctx in (sweedler.context, matrix_cells.context):
        base = ctx.f.target.base
        for y in (bimod.regular_bimodule(base), corpus.ground_bimodule(base, "right")):
            lhs, rhs = cofree_identity(ctx, y)
            assert lhs == rhs


@pytest.mark.parametrize("which", ["sweedler", "matrix"])
def test_reconstruct_roundtrip(which, sweedler, matrix_cells):
    cc = sweedler if which == "sweedler" else matrix_cells
    ctx = cc.context
    e, r = extract(ctx)
    new, hyp = reconstruct_context(cc.m, cc.n, e, r)
    assert hyp.passed
    assert new.f == ctx.f and new.g == ctx.g
    assert new.eta.map == ctx.eta.map and new.rho.map == ctx.rho.map
    assert check_wrem_context(new).passed


def test_reconstruct_flags_non_colinear_input(fp, sweedler):
    ctx = sweedler.context
    e, r = extract(ctx)
    others = bimod.hom_basis(e.source, e.target)
    x = coring.cofree_comodule(ctx.f.target)
    push = pushout_apply(ctx.g, pushout_apply(ctx.f, x))
    bad = [g for g in others if coring.is_colinear(g, push, x) is not None]
    assert bad
    _, hyp = reconstruct_context(sweedler.m, sweedler.n, bad[0], r)
    assert hyp.get("eta-cofree-colinear").status == FAIL


def test_reconstruct_rejects_mistyped(fp, sweedler):
    e, r = extract(sweedler.context)
    with pytest.raises(InvalidInput):
        reconstruct_context(sweedler.m, sweedler.n, r, e)


def test_eta_tilde_on_trivial_context_is_classical(fp):
    ctx = corpus.matrix_morita(2, fp)
    u = classical_to_wrem(ctx)
    x = coring.trivial_comodule(corpus.ground_bimodule(ctx.f.left, "right"))
    e = eta_tilde(u, x)
    assert e.target == x.carrier
