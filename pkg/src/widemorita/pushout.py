"""Push-out functors along entwined cells and contexts at the comodule level.

A cell ``(M, m)`` from ``(D : B)`` to ``(C : A)`` sends a right C-comodule
``X`` to ``X (x)_A M`` with coaction ``(X (x) m)(rho^X (x) M)``.  A context
of cells gives maps ``eta~_X: (X M) N -> X`` and ``rho~_Y: (Y N) M -> Y``;
natural transformations are checked extensionally at sample comodules.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import bimod
from .bimod import BimoduleMap, identity, induced_map, rebracket, tensor_over
from .coring import (
    Bicomodule,
    Comodule,
    EntwinedCell,
    InvalidInput,
    cell_from_bicomodule,
    cofree_comodule,
    is_colinear,
    wrem_context,
    wrem_parts,
)
from .report import Report, diff_witness
from .wide import WideContext

T = tensor_over


def _wl(m, g):
    return induced_map(identity(m), g)


def _wr(f, n):
    return induced_map(f, identity(n))


def pushout_apply(cell: EntwinedCell, x: Comodule) -> Comodule:
    if x.coring != cell.target:
        raise InvalidInput("comodule is over a different coring than the cell's target")
    X, M, C, D = x.carrier, cell.carrier, cell.target.carrier, cell.source.carrier
    co = (
        rebracket(T(X, T(M, D)), T(T(X, M), D))
        @ _wl(X, cell.m)
        @ rebracket(T(T(X, C), M), T(X, T(C, M)))
        @ _wr(x.coaction, M)
    )
    return Comodule(cell.source, T(X, M), co, f"{x.label}*{cell.label}")


def pushout_map(cell: EntwinedCell, f: BimoduleMap) -> BimoduleMap:
    return _wr(f, cell.carrier)


@dataclass(frozen=True)
class ComoduleMorphism:
    source: Comodule
    target: Comodule
    map: BimoduleMap
    name: str | None = field(default=None, compare=False)


def _tilde(x: Comodule, p: EntwinedCell, q: EntwinedCell, two_cell: BimoduleMap) -> BimoduleMap:
    """``(X P) Q -> ((X K) P) Q -> X (K (P Q)) -> X (x) R -> X``."""
    X, K, P, Q = x.carrier, x.coring.carrier, p.carrier, q.carrier
    return (
        bimod.right_unitor(X)
        @ _wl(X, two_cell)
        @ rebracket(T(T(T(X, K), P), Q), T(X, T(K, T(P, Q))))
        @ _wr(_wr(x.coaction, P), Q)
    )


def eta_tilde(ctx: WideContext, x: Comodule) -> BimoduleMap:
    """``eta~_X: (X M) N -> X`` for a right C-comodule ``X``."""
    mc, nc, c, d = wrem_parts(ctx)
    if x.coring != c:
        raise InvalidInput("eta~ is defined on comodules over the target coring")
    return _tilde(x, mc, nc, ctx.eta.map)


def rho_tilde(ctx: WideContext, y: Comodule) -> BimoduleMap:
    """``rho~_Y: (Y N) M -> Y`` for a right D-comodule ``Y``."""
    mc, nc, c, d = wrem_parts(ctx)
    if y.coring != d:
        raise InvalidInput("rho~ is defined on comodules over the source coring")
    return _tilde(y, nc, mc, ctx.rho.map)


@dataclass
class CatSamples:
    """Sample comodules over each coring and morphisms between them."""

    over_c: list = field(default_factory=list)
    over_d: list = field(default_factory=list)
    morphisms_c: list = field(default_factory=list)
    morphisms_d: list = field(default_factory=list)


def _named(x, i, prefix):
    return x.name or f"{prefix}{i}"


def check_cat_context(ctx: WideContext, samples: CatSamples) -> Report:
    """Colinearity, naturality and both compatibilities at every sample."""
    mc, nc, c, d = wrem_parts(ctx)
    rep = Report("cat-context")
    results: dict[str, list] = {k: [] for k in (
        "eta-colinear", "rho-colinear", "eta-natural", "rho-natural", "eta-compatible", "rho-compatible",
    )}

    def push2(p, q, x):
        return pushout_apply(q, pushout_apply(p, x))

    for i, x in enumerate(samples.over_c):
        lab = _named(x, i, "X")
        e = eta_tilde(ctx, x)
        results["eta-colinear"].append((lab, is_colinear(e, push2(mc, nc, x), x)))
        # rho~ at M(X) against M(eta~_X), both on ((X M) N) M -> X M
        lhs = rho_tilde(ctx, pushout_apply(mc, x))
        rhs = pushout_map(mc, e)
        results["rho-compatible"].append((lab, diff_witness(lhs.matrix, rhs.matrix, "rho-compatible")))
    for i, y in enumerate(samples.over_d):
        lab = _named(y, i, "Y")
        r = rho_tilde(ctx, y)
        results["rho-colinear"].append((lab, is_colinear(r, push2(nc, mc, y), y)))
        lhs = eta_tilde(ctx, pushout_apply(nc, y))
        rhs = pushout_map(nc, r)
        results["eta-compatible"].append((lab, diff_witness(lhs.matrix, rhs.matrix, "eta-compatible")))
    for name, morphs, tilde, p, q in (
        ("eta-natural", samples.morphisms_c, eta_tilde, mc, nc),
        ("rho-natural", samples.morphisms_d, rho_tilde, nc, mc),
    ):
        for i, f in enumerate(morphs):
            lab = f.name or f"f{i}"
            w = is_colinear(f.map, f.source, f.target)
            if w is not None:
                rep.error(name, f"sample {lab} is not a comodule morphism")
                results[name] = None
                break
            lhs = tilde(ctx, f.target) @ pushout_map(q, pushout_map(p, f.map))
            rhs = f.map @ tilde(ctx, f.source)
            results[name].append((lab, diff_witness(lhs.matrix, rhs.matrix, name)))
    for name in sorted(results):
        res = results[name]
        if res is None:
            continue
        bad = [(lab, w) for lab, w in res if w is not None]
        info = {"evaluated": len(res)}
        if bad:
            lab, w = bad[0]
            rep.fail(name, {"sample": lab, **w}, {**info, "failing": len(bad)})
        else:
            rep.ok(name, info)
    return rep


def cofree_identity(ctx: WideContext, y) -> tuple:
    """Both sides of ``eta~_{Y (x) C} = Y (x) eta~_C`` for a bimodule ``Y``."""
    mc, nc, c, d = wrem_parts(ctx)
    yc = cofree_comodule(c, y)
    lhs = eta_tilde(ctx, yc)
    cm = cofree_comodule(c)
    Y, C, M, N = y, c.carrier, mc.carrier, nc.carrier
    rhs = _wl(Y, eta_tilde(ctx, cm)) @ rebracket(T(T(T(Y, C), M), N), T(Y, T(T(C, M), N)))
    return lhs, rhs


def extract(ctx: WideContext):
    """``eta~`` and ``rho~`` at the cofree comodules ``C`` and ``D``."""
    mc, nc, c, d = wrem_parts(ctx)
    return eta_tilde(ctx, cofree_comodule(c)), rho_tilde(ctx, cofree_comodule(d))


def reconstruct_context(
    m: Bicomodule, n: Bicomodule, eta_cofree: BimoduleMap, rho_cofree: BimoduleMap
) -> tuple[WideContext, Report]:
    """Assemble a context of cells from bicomodules and the maps at cofree comodules.

    ``m`` is an (A, D)-bicomodule and ``n`` a (B, C)-bicomodule, both with
    trivial left structure.  ``eta_cofree: (C M) N -> C`` and
    ``rho_cofree: (D N) M -> D`` must be colinear; the result is
    ``eta = e_C eta~_C`` and ``rho = e_D rho~_D`` up to rebracketing.
    """
    c, d = n.right, m.right
    mc = cell_from_bicomodule(m, c)
    nc = cell_from_bicomodule(n, d)
    M, N, C, D = m.carrier, n.carrier, c.carrier, d.carrier
    hyp = Report("reconstruct-hypotheses")
    for name, g, src, tgt in (
        ("eta-cofree-typed", eta_cofree, T(T(C, M), N), C),
        ("rho-cofree-typed", rho_cofree, T(T(D, N), M), D),
    ):
        if g.source != src or g.target != tgt:
            raise InvalidInput(f"{name}: map has the wrong type")
    cc, dd = cofree_comodule(c), cofree_comodule(d)
    for name, g, x, p, q in (
        ("eta-cofree-colinear", eta_cofree, cc, mc, nc),
        ("rho-cofree-colinear", rho_cofree, dd, nc, mc),
    ):
        w = is_colinear(g, pushout_apply(q, pushout_apply(p, x)), x)
        if w is None:
            hyp.ok(name)
        else:
            hyp.fail(name, w)
    eta = c.counit @ eta_cofree @ rebracket(T(C, T(M, N)), T(T(C, M), N))
    rho = d.counit @ rho_cofree @ rebracket(T(D, T(N, M)), T(T(D, N), M))
    return wrem_context(mc, nc, eta, rho), hyp

