"""Deterministic worked examples and seeded random families.

Every generator either returns a valid object or raises
:class:`GenerationError`.  Random generators draw from
``numpy.random.default_rng(seed)`` only, so equal seeds give identical objects.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import bimod, coring
from .algebra import Algebra, is_idempotent, multiply, validate_algebra
from .bicat import AxiomSamples, BimInstance
from .bimod import Bimodule, BimoduleMap
from .exactla import (
    QQ,
    Field,
    Matrix,
    column_space_basis,
    hstack,
    left_inverse,
    random_invertible,
)
from .wide import ContextMorphism, WideContext

BIM = BimInstance()


class GenerationError(RuntimeError):
    pass


@dataclass
class Tagged:
    """A corpus object with its expected verdict (``"pass"`` or ``"expected-fail"``)."""

    name: str
    value: object
    tag: str = "pass"
    note: str = ""


# ----------------------------------------------------------------------------
# algebras and their known modules

_LEFT_MODULES: dict = {}


def _register(alg: Algebra, reps):
    known = _LEFT_MODULES.setdefault(alg, [])
    keys = {tuple(m.key for m in r) for r in known}
    for r in reps:
        r = tuple(r)
        if tuple(m.key for m in r) not in keys:
            known.append(r)
            keys.add(tuple(m.key for m in r))
    return alg


def left_modules(alg: Algebra) -> list:
    """Known left modules (tuples of action matrices), always including the regular one."""
    reps = list(_LEFT_MODULES.get(alg, []))
    regular = tuple(alg.left_matrices)
    if all(tuple(m.key for m in r) != tuple(m.key for m in regular) for r in reps):
        reps.append(regular)
    return reps


def _mat(field, rows):
    return Matrix(field, rows)


def _char(field, values):
    return tuple(_mat(field, [[v]]) for v in values)


def ground(field: Field = QQ) -> Algebra:
    return _register(Algebra(field, [[[1]]], [1], "k"), [_char(field, [1])])


def product_algebra(n: int, field: Field = QQ) -> Algebra:
    """``k^n`` with basis the primitive idempotents."""
    c = np.zeros((n, n, n), dtype=object)
    for i in range(n):
        c[i, i, i] = 1
    alg = Algebra(field, c, [1] * n, f"k^{n}")
    chars = [_char(field, [1 if j == i else 0 for j in range(n)]) for i in range(n)]
    return _register(alg, chars)


def group_algebra(n: int, field: Field = QQ) -> Algebra:
    """``k[Z/n]`` with basis ``g^0 .. g^{n-1}``."""
    c = np.zeros((n, n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            c[i, j, (i + j) % n] = 1
    alg = Algebra(field, c, [1] + [0] * (n - 1), f"k[Z/{n}]")
    reps = [_char(field, [1] * n)]
    if n % 2 == 0:
        reps.append(_char(field, [(-1) ** i for i in range(n)]))
    return _register(alg, reps)


def truncated_poly(n: int, field: Field = QQ) -> Algebra:
    """``k[x]/(x^n)`` with basis ``1, x, .., x^{n-1}``."""
    c = np.zeros((n, n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            if i + j < n:
                c[i, j, i + j] = 1
    alg = Algebra(field, c, [1] + [0] * (n - 1), f"k[x]/(x^{n})")
    reps = [_char(field, [1] + [0] * (n - 1))]
    for m in range(2, n):
        # k[x]/(x^m) as a module
        reps.append(tuple(_shift_power(field, m, i) for i in range(n)))
    return _register(alg, reps)


def _shift_power(field, m, i):
    a = field.zeros((m, m))
    for j in range(m - i):
        a[j + i, j] = field.one
    return Matrix(field, a)


def _unit_matrix(field, n, i, j):
    a = field.zeros((n, n))
    a[i, j] = field.one
    return Matrix(field, a)


def matrix_algebra(n: int, field: Field = QQ) -> Algebra:
    """``M_n(k)`` with matrix-unit basis ``E_ij`` at index ``i n + j``."""
    c = np.zeros((n * n,) * 3, dtype=object)
    for i in range(n):
        for j in range(n):
            for l in range(n):
                c[i * n + j, j * n + l, i * n + l] = 1
    unit = [1 if (idx // n) == (idx % n) else 0 for idx in range(n * n)]
    alg = Algebra(field, c, unit, f"M{n}")
    column = tuple(_unit_matrix(field, n, i, j) for i in range(n) for j in range(n))
    return _register(alg, [column])


def upper_triangular(field: Field = QQ) -> Algebra:
    """Upper triangular 2x2 matrices, basis ``E11, E12, E22``."""
    units = [(0, 0), (0, 1), (1, 1)]
    idx = {u: k for k, u in enumerate(units)}
    c = np.zeros((3, 3, 3), dtype=object)
    for a, (i, j) in enumerate(units):
        for b, (k, l) in enumerate(units):
            if j == k:
                c[a, b, idx[(i, l)]] = 1
    alg = Algebra(field, c, [1, 0, 1], "T2")
    column = tuple(_unit_matrix(field, 2, i, j) for (i, j) in units)
    return _register(alg, [_char(field, [1, 0, 0]), _char(field, [0, 0, 1]), column])


def change_basis(alg: Algebra, p: Matrix, name=None) -> Algebra:
    """Same algebra in the basis ``e'_i = sum_k p[k, i] e_k``."""
    f = alg.field
    d = alg.dim
    pinv = p.inverse()
    c = np.zeros((d, d, d), dtype=object)
    for i in range(d):
        for j in range(d):
            prod = multiply(alg, p.a[:, i], p.a[:, j])
            new = pinv @ Matrix.column(f, prod)
            for k in range(d):
                c[i, j, k] = new[k, 0]
    unit = pinv @ alg.unit_vector
    out = Algebra(f, c, [unit[k, 0] for k in range(d)], name or f"{alg.name}'")
    reps = []
    for r in left_modules(alg):
        reps.append(tuple(_lincomb(f, p.a[:, i], r) for i in range(d)))
    return _register(out, reps)


def _lincomb(field, coeffs, mats):
    n = mats[0].rows
    out = field.zeros((n, n))
    for c, m in zip(coeffs, mats):
        if c != 0:
            out = out + m.a * c
    return Matrix(field, out)


def small_algebras(field: Field = QQ) -> dict:
    """The pool of algebras of dimension at most three, by dimension."""
    return {
        1: [ground(field)],
        2: [product_algebra(2, field), truncated_poly(2, field), group_algebra(2, field)],
        3: [
            product_algebra(3, field),
            truncated_poly(3, field),
            group_algebra(3, field),
            upper_triangular(field),
        ],
    }


def random_algebra(seed: int, dim: int, field: Field = QQ) -> Algebra:
    """A pool algebra of the given dimension in a random basis."""
    rng = np.random.default_rng(seed)
    pool = small_algebras(field).get(dim)
    if not pool:
        raise GenerationError(f"no algebra of dimension {dim} in the pool")
    base = pool[int(rng.integers(len(pool)))]
    if dim == 1:
        return base
    p = random_invertible(field, rng, dim)
    alg = change_basis(base, p, f"{base.name}[{seed}]")
    if not validate_algebra(alg).passed:
        raise GenerationError("basis change produced an invalid algebra")
    return alg


# ----------------------------------------------------------------------------
# bimodules


def ground_bimodule(alg: Algebra, side: str = "right") -> Bimodule:
    """``alg`` as a (k, alg)-bimodule (``side="right"``) or (alg, k)-bimodule."""
    f = alg.field
    k = ground(f)
    if side == "right":
        return Bimodule(k, alg, [Matrix.identity(f, alg.dim)], alg.right_matrices, f"{alg.name}_r")
    return Bimodule(alg, k, alg.left_matrices, [Matrix.identity(f, alg.dim)], f"{alg.name}_l")


def block_bimodule(a: Algebra, b: Algebra, v, w, name=None) -> Bimodule:
    """``V (x) W`` for a left ``a``-module ``V`` and the right ``b``-module ``W^T``."""
    f = a.field
    dv, dw = v[0].rows, w[0].rows
    iv, iw = Matrix.identity(f, dv), Matrix.identity(f, dw)
    left = [x.kron(iw) for x in v]
    right = [iv.kron(y.T) for y in w]
    return Bimodule(a, b, left, right, name)


def random_bimodule(seed: int, a: Algebra, b: Algebra, dim: int, attempts: int = 50) -> Bimodule:
    """A valid random (a, b)-bimodule of the given dimension.

    Built as a direct sum of blocks ``V (x) W`` (plus the regular bimodule
    when ``a == b``), then conjugated by a random invertible matrix.
    """
    rng = np.random.default_rng(seed)
    f = a.field
    lv, rw = left_modules(a), left_modules(b)
    blocks = [(v, w) for v in lv for w in rw]
    for _ in range(attempts):
        parts = []
        remaining = dim
        if a == b and a.dim <= dim and rng.random() < 0.25:
            parts.append(bimod.regular_bimodule(a))
            remaining -= a.dim
        stuck = False
        while remaining > 0:
            fits = [(v, w) for v, w in blocks if v[0].rows * w[0].rows <= remaining]
            if not fits:
                stuck = True
                break
            v, w = fits[int(rng.integers(len(fits)))]
            parts.append(block_bimodule(a, b, v, w))
            remaining -= v[0].rows * w[0].rows
        if stuck:
            continue
        m = parts[0]
        for extra in parts[1:]:
            m = bimod.direct_sum(m, extra)
        p = random_invertible(f, rng, dim)
        out = bimod.conjugate(m, p, name=f"B{dim}[{seed}]")
        if bimod.validate_bimodule(out).passed:
            return out
    raise GenerationError(f"no ({a.name}, {b.name})-bimodule of dimension {dim} found")


def random_endomorphism(rng, m: Bimodule) -> BimoduleMap:
    basis = bimod.hom_basis(m, m)
    coeffs = [m.field.random_element(rng) for _ in basis]
    return bimod.combine_maps(coeffs, basis, m, m)


def random_two_cell(rng, m: Bimodule, label=None):
    """A 2-cell ``m -> m'`` where ``m'`` is a random conjugate of ``m``."""
    p = random_invertible(m.field, rng, m.dim)
    m2 = bimod.conjugate(m, p, name=label or f"{m.label}'")
    iso = BimoduleMap(m, m2, p)
    return iso @ random_endomorphism(rng, m)


def random_chain(seed: int, length: int, field: Field, max_dim: int = 3):
    """Random algebras ``A_0 .. A_length`` and bimodules ``f_i`` over ``(A_i, A_{i+1})``."""
    rng = np.random.default_rng(seed)
    algs = [
        random_algebra(int(rng.integers(2**32)), int(rng.integers(1, max_dim + 1)), field)
        for _ in range(length + 1)
    ]
    mods = []
    for i in range(length):
        for _ in range(20):
            try:
                mods.append(
                    random_bimodule(
                        int(rng.integers(2**32)), algs[i], algs[i + 1], int(rng.integers(1, max_dim + 1))
                    )
                )
                break
            except GenerationError:
                continue
        else:
            raise GenerationError("could not build a chain")
    return algs, mods


def bim_axiom_samples(seed: int, count: int, field: Field, max_dim: int = 3) -> AxiomSamples:
    """``count`` samples of every tuple kind for the Bim coherence checker."""
    rng = np.random.default_rng(seed)
    s = AxiomSamples()
    for _ in range(count):
        algs, (f, g, h, k) = random_chain(int(rng.integers(2**32)), 4, field, max_dim)
        s.quadruples.append((f, g, h, k))
        s.pairs.append((f, g))
        s.cells.append(f)
        s.objects.append(algs[0])
        x, y, z = (random_two_cell(rng, m) for m in (f, g, h))
        s.cell_triples.append((x, y, z))
        s.twocells.append(x)
        # interchange: a o a2 and b o b2
        a2 = random_two_cell(rng, f)
        a = random_two_cell(rng, a2.target)
        b2 = random_two_cell(rng, g)
        b = random_two_cell(rng, b2.target)
        s.interchanges.append((a, a2, b, b2))
        c3 = random_two_cell(rng, f)
        c2 = random_two_cell(rng, c3.target)
        c1 = random_two_cell(rng, c2.target)
        s.vertical_triples.append((c1, c2, c3))
    return s


# ----------------------------------------------------------------------------
# contexts


def _ambient_products(alg: Algebra, xs: Matrix, ys: Matrix) -> Matrix:
    """Column ``i * ys.cols + j`` is the product of column i of xs and column j of ys."""
    f = alg.field
    cols = []
    for i in range(xs.cols):
        lx = alg.left_matrix(xs.a[:, i])
        for j in range(ys.cols):
            cols.append((lx @ ys.block(cols=[j])).vec())
    if not cols:
        return Matrix.zeros(f, alg.dim, 0)
    return Matrix(f, cols).T


def column_bimodule(n: int, field: Field) -> Bimodule:
    """``k^n`` as an (M_n, k)-bimodule."""
    mn, k = matrix_algebra(n, field), ground(field)
    left = [_unit_matrix(field, n, i, j) for i in range(n) for j in range(n)]
    return Bimodule(mn, k, left, [Matrix.identity(field, n)], f"col{n}")


def row_bimodule(n: int, field: Field) -> Bimodule:
    """``k^n`` as a (k, M_n)-bimodule."""
    mn, k = matrix_algebra(n, field), ground(field)
    right = [_unit_matrix(field, n, j, i) for i in range(n) for j in range(n)]
    return Bimodule(k, mn, [Matrix.identity(field, n)], right, f"row{n}")


def matrix_morita(n: int, field: Field = QQ) -> WideContext:
    """Columns, rows, the matrix-unit pairing and the dot product between M_n(k) and k."""
    mn, k = matrix_algebra(n, field), ground(field)
    f, g = column_bimodule(n, field), row_bimodule(n, field)
    fg, gf = bimod.tensor_over(f, g), bimod.tensor_over(g, f)
    # e_i (x) e_j -> E_ij
    eta_amb = Matrix.identity(field, n * n)
    eta = BimoduleMap(fg, bimod.unit_bimodule(mn), eta_amb @ fg.section)
    # e_i (x) e_j -> delta_ij
    rho_amb = field.zeros((1, n * n))
    for i in range(n):
        rho_amb[0, i * n + i] = field.one
    rho = BimoduleMap(gf, bimod.unit_bimodule(k), Matrix(field, rho_amb) @ gf.section)
    return WideContext(f, g, eta, rho)


def matrix_morita_theta(n: int, field: Field = QQ) -> BimoduleMap:
    """Inverse of the dot product ``rho`` of :func:`matrix_morita`: ``1 -> sum e_i (x) e_i``."""
    ctx = matrix_morita(n, field)
    return ctx.rho.inverse()


@dataclass
class Corner:
    """The pieces of a corner construction, kept for tests and serialization."""

    algebra: Algebra
    idempotent: tuple
    corner: Algebra
    corner_basis: Matrix  # columns: elements of eAe inside A
    context: WideContext


def corner_context(alg: Algebra, e, name=None) -> Corner:
    """``(Ae, eA, mult, mult)`` between ``eAe`` and ``alg``."""
    f = alg.field
    e = [f.coerce(x) for x in e]
    if not is_idempotent(alg, e):
        raise ValueError("e is not idempotent")
    le, re_ = alg.left_matrix(e), alg.right_matrix(e)
    s = column_space_basis(le @ re_)
    sinv = left_inverse(s)
    d = s.cols
    c = np.zeros((d, d, d), dtype=object)
    prods = _ambient_products(alg, s, s)
    coords = sinv @ prods
    for i in range(d):
        for j in range(d):
            for k in range(d):
                c[i, j, k] = coords[k, i * d + j]
    unit = sinv @ Matrix.column(f, e)
    label = name or f"{alg.name}e"
    b = Algebra(f, c, [unit[k, 0] for k in range(d)], f"e{label}e")
    _register(b, [])
    # f = Ae, g = eA
    sf = column_space_basis(re_)
    sg = column_space_basis(le)
    pf, pg = left_inverse(sf), left_inverse(sg)
    fl = [pf @ x @ sf for x in alg.left_matrices]
    fr = [pf @ alg.right_matrix(s.a[:, i]) @ sf for i in range(d)]
    gl = [pg @ alg.left_matrix(s.a[:, i]) @ sg for i in range(d)]
    gr = [pg @ x @ sg for x in alg.right_matrices]
    fm = Bimodule(alg, b, fl, fr, f"{label}:Ae")
    gm = Bimodule(b, alg, gl, gr, f"{label}:eA")
    fg, gf = bimod.tensor_over(fm, gm), bimod.tensor_over(gm, fm)
    eta = BimoduleMap(fg, bimod.unit_bimodule(alg), _ambient_products(alg, sf, sg) @ fg.section)
    rho = BimoduleMap(gf, bimod.unit_bimodule(b), sinv @ _ambient_products(alg, sg, sf) @ gf.section)
    return Corner(alg, tuple(e), b, s, WideContext(fm, gm, eta, rho))


def swap_context(ctx: WideContext) -> WideContext:
    """``(g, f, rho, eta)``: the same data read in the other direction."""
    return WideContext(ctx.g, ctx.f, ctx.rho, ctx.eta)


def scale_context(ctx: WideContext, c) -> WideContext:
    """``(f, g, c eta, c rho)``, again a context for every scalar ``c``."""
    return WideContext(ctx.f, ctx.g, ctx.eta.scale(c), ctx.rho.scale(c))


def corrupt_context(ctx: WideContext, which: str = "eta", factor=2) -> WideContext:
    if which == "eta":
        return WideContext(ctx.f, ctx.g, ctx.eta.scale(factor), ctx.rho)
    return WideContext(ctx.f, ctx.g, ctx.eta, ctx.rho.scale(factor))


def transport_context(ctx: WideContext, phi: BimoduleMap, psi: BimoduleMap) -> WideContext:
    """Move a context along isomorphisms ``phi: f -> f'`` and ``psi: g -> g'``."""
    f2, g2 = phi.target, psi.target
    inv = bimod.induced_map(phi.inverse(), psi.inverse())
    inv2 = bimod.induced_map(psi.inverse(), phi.inverse())
    return WideContext(f2, g2, ctx.eta @ inv, ctx.rho @ inv2)


def corner_idempotents(alg: Algebra) -> list:
    """Known idempotents of the pool algebras, by name."""
    f = alg.field
    n = alg.dim
    one = list(alg.unit)
    out = [one]
    name = alg.name or ""
    if name.startswith("k^"):
        for i in range(n):
            out.append([1 if j == i else 0 for j in range(n)])
    elif name.startswith("M"):
        m = int(round(n**0.5))
        for i in range(m):
            out.append([1 if idx == i * m + i else 0 for idx in range(n)])
    elif name == "T2":
        out += [[1, 0, 0], [0, 0, 1], [1, 1, 0]]
    return [[f.coerce(x) for x in e] for e in out]


def context_pool(field: Field) -> list[Tagged]:
    """Named valid contexts used throughout the tests."""
    out = [
        Tagged("matrix-1", matrix_morita(1, field)),
        Tagged("matrix-2", matrix_morita(2, field)),
    ]
    for alg in (matrix_algebra(2, field), product_algebra(2, field), upper_triangular(field), truncated_poly(2, field)):
        for i, e in enumerate(corner_idempotents(alg)):
            out.append(Tagged(f"corner-{alg.name}-{i}", corner_context(alg, e).context))
    return out


def random_corner_contexts(seed: int, count: int, field: Field) -> list[Tagged]:
    """Seeded corner contexts, swapped and scaled at random."""
    rng = np.random.default_rng(seed)
    algs = [matrix_algebra(2, field), product_algebra(2, field), product_algebra(3, field), upper_triangular(field), truncated_poly(2, field), group_algebra(2, field)]
    out = []
    for i in range(count):
        alg = algs[int(rng.integers(len(algs)))]
        idem = corner_idempotents(alg)
        e = idem[int(rng.integers(len(idem)))]
        ctx = corner_context(alg, e).context
        if rng.random() < 0.5:
            ctx = swap_context(ctx)
        c = field.random_element(rng, nonzero=True)
        ctx = scale_context(ctx, c)
        out.append(Tagged(f"corner[{seed}:{i}]", ctx))
    return out


def composable_context_pairs(seed: int, count: int, field: Field) -> list:
    """Seeded pairs ``(ctx, lam)`` with ``source(ctx) == target(lam)``."""
    rng = np.random.default_rng(seed)
    pool = [t.value for t in context_pool(field)]
    pool += [swap_context(c) for c in pool]
    by_target: dict = {}
    for c in pool:
        by_target.setdefault(BIM.target(c.f), []).append(c)
    pairs = []
    while len(pairs) < count:
        ctx = pool[int(rng.integers(len(pool)))]
        options = by_target.get(BIM.source(ctx.f), [])
        if not options:
            continue
        lam = options[int(rng.integers(len(options)))]
        c1 = field.random_element(rng, nonzero=True)
        c2 = field.random_element(rng, nonzero=True)
        pairs.append((scale_context(ctx, c1), scale_context(lam, c2)))
    return pairs


def context_endomorphisms(ctx: WideContext) -> list[ContextMorphism]:
    """Some morphisms ``ctx -> ctx``: identities and invertible scalings (c, c^{-1})."""
    f = ctx.eta.field
    out = [ContextMorphism(bimod.identity(ctx.f), bimod.identity(ctx.g), ctx, ctx)]
    for c in (2, 3):
        ci = f.inv(f.coerce(c))
        out.append(
            ContextMorphism(
                bimod.identity(ctx.f).scale(c), bimod.identity(ctx.g).scale(ci), ctx, ctx
            )
        )
    return out


def _small_context_pool(field: Field) -> list[WideContext]:
    k = ground(field)
    from .wide import identity_context

    out = [identity_context(BIM, k), matrix_morita(1, field), matrix_morita(2, field)]
    for alg in (product_algebra(2, field), upper_triangular(field), matrix_algebra(2, field)):
        for e in corner_idempotents(alg)[1:2]:
            out.append(corner_context(alg, e).context)
    out += [swap_context(c) for c in out[2:]]
    return out


def _context_walk(rng, pool, length):
    by_target: dict = {}
    for c in pool:
        by_target.setdefault(BIM.target(c.f), []).append(c)
    while True:
        walk = [pool[int(rng.integers(len(pool)))]]
        while len(walk) < length:
            options = by_target.get(BIM.source(walk[-1].f), [])
            if not options:
                break
            walk.append(options[int(rng.integers(len(options)))])
        if len(walk) == length:
            return walk


def random_context_morphism(rng, ctx: WideContext) -> ContextMorphism:
    """An invertible morphism out of ``ctx``: a scaling pair followed by a transport."""
    field = ctx.eta.field
    c = field.random_element(rng, nonzero=True)
    ci = field.inv(c)
    p = random_invertible(field, rng, ctx.f.dim)
    q = random_invertible(field, rng, ctx.g.dim)
    phi = BimoduleMap(ctx.f, bimod.conjugate(ctx.f, p, ctx.f.label + "'"), p)
    psi = BimoduleMap(ctx.g, bimod.conjugate(ctx.g, q, ctx.g.label + "'"), q)
    target = transport_context(ctx, phi, psi)
    return ContextMorphism(phi.scale(c), psi.scale(ci), ctx, target)


def w_axiom_samples(seed: int, count: int, field: Field) -> AxiomSamples:
    """Samples of contexts and context morphisms for the W(Bim) axiom checker."""
    from .wide import identity_context

    rng = np.random.default_rng(seed)
    pool = _small_context_pool(field)
    s = AxiomSamples()
    for _ in range(count):
        quad = _context_walk(rng, pool, 4)
        s.quadruples.append(tuple(quad))
        s.pairs.append(tuple(quad[:2]))
        s.cells.append(quad[0])
        s.objects.append(BIM.target(quad[0].f))
        trip = [random_context_morphism(rng, c) for c in quad[:3]]
        s.cell_triples.append(tuple(trip))
        s.twocells.append(trip[0])
        a2 = random_context_morphism(rng, quad[0])
        a = random_context_morphism(rng, a2.target)
        b2 = random_context_morphism(rng, quad[1])
        b = random_context_morphism(rng, b2.target)
        s.interchanges.append((a, a2, b, b2))
        c3 = random_context_morphism(rng, quad[0])
        c2 = random_context_morphism(rng, c3.target)
        c1 = random_context_morphism(rng, c2.target)
        s.vertical_triples.append((c1, c2, c3))
    return s


# ----------------------------------------------------------------------------
# corings, bicomodules and contexts of entwined cells


def unit_inclusion(alg: Algebra) -> Matrix:
    """The algebra map ``k -> alg`` as a ``dim x 1`` matrix."""
    return alg.unit_vector


def sweedler_over_ground(alg: Algebra) -> coring.Coring:
    k = ground(alg.field)
    return coring.sweedler_coring(alg, k, unit_inclusion(alg), name=f"({alg.name}*k{alg.name}:{alg.name})")


def coring_pool(field: Field) -> list[Tagged]:
    """Trivial and Sweedler corings, plus scaled corruptions expected to fail."""
    out = []
    for alg in (ground(field), matrix_algebra(2, field), truncated_poly(2, field)):
        out.append(Tagged(f"trivial-{alg.name}", coring.trivial_coring(alg)))
    sw = sweedler_over_ground(truncated_poly(2, field))
    out.append(Tagged("sweedler-k[x]/(x^2)", sw))
    for t in list(out):
        for part in ("delta", "counit"):
            out.append(
                Tagged(f"{t.name}-{part}-x2", coring.scaled_coring(t.value, part, 2), "expected-fail", f"{part} scaled by 2")
            )
    return out


def character_bimodule(alg: Algebra, values, name=None) -> Bimodule:
    """``k`` as an (alg, k)-bimodule through a character (images of the basis)."""
    f = alg.field
    k = ground(f)
    return Bimodule(alg, k, list(_char(f, values)), [Matrix.identity(f, 1)], name)


def grouplike_bicomodule(c: coring.Coring, g: Matrix, name=None) -> coring.Bicomodule:
    """``A`` as a (k, A)-bimodule with coaction ``a -> 1 (x) g a`` for a grouplike ``g``."""
    alg = c.base
    n = ground_bimodule(alg, "right")
    nc = bimod.tensor_over(n, c.carrier)
    u = alg.unit_vector
    cols = [u.kron(c.carrier.right_action[j] @ g) for j in range(alg.dim)]
    rho = BimoduleMap(n, nc, nc.projection @ hstack(cols))
    return coring.right_bicomodule(n, c, rho, name or f"{alg.name}_g")


def sweedler_grouplike(c: coring.Coring) -> Matrix:
    """``1 (x) 1`` in a Sweedler coring over the ground field."""
    return coring.sweedler_grouplike(c.base, ground(c.base.field), unit_inclusion(c.base))


@dataclass
class CellContext:
    """A context of entwined cells together with the bicomodules its cells come from."""

    name: str
    context: WideContext
    m: coring.Bicomodule
    n: coring.Bicomodule


def sweedler_context(field: Field) -> CellContext:
    """Descent data for ``k < k[x]/(x^2)``: push-outs along ``k`` and ``A`` are inverse.

    ``M`` is ``k`` through the augmentation, ``N`` is ``A`` with the grouplike
    coaction; the pairings form a line and the generator has ``rho = 1``.
    """
    alg = truncated_poly(2, field)
    k = ground(field)
    sw = sweedler_over_ground(alg)
    dk = coring.trivial_coring(k)
    aug = character_bimodule(alg, [1, 0], "k_aug")
    bm = coring.right_bicomodule(aug, dk, bimod.right_unitor_inv(aug), "k_aug")
    bn = grouplike_bicomodule(sw, sweedler_grouplike(sw), "A_g")
    mc = coring.cell_from_bicomodule(bm, sw)
    nc = coring.cell_from_bicomodule(bn, dk)
    pairs = coring.context_pairings(mc, nc)
    if len(pairs) != 1:
        raise GenerationError(f"expected a line of pairings, found dimension {len(pairs)}")
    eta, rho = pairs[0]
    c = rho.matrix.a[0, 0]
    if c == field.zero:
        raise GenerationError("degenerate pairing")
    ci = field.inv(c)
    ctx = coring.wrem_context(mc, nc, eta.scale(ci), rho.scale(ci))
    return CellContext("sweedler-descent", ctx, bm, bn)


def trivial_cell_context(ctx: WideContext, name: str) -> CellContext:
    """A bimodule context over trivial corings, with its bicomodules."""
    u = coring.classical_to_wrem(ctx)
    bm = coring.right_bicomodule(ctx.f, u.f.source, bimod.right_unitor_inv(ctx.f))
    bn = coring.right_bicomodule(ctx.g, u.g.source, bimod.right_unitor_inv(ctx.g))
    return CellContext(name, u, bm, bn)


def _random_small_algebra(rng, field, max_dim=2):
    return random_algebra(int(rng.integers(2**32)), int(rng.integers(1, max_dim + 1)), field)


def random_bicomodules(seed: int, count: int, field: Field) -> list[Tagged]:
    """Seeded (A, D)-bicomodules with a target coring over ``A``.

    Values are pairs ``(bicomodule, target coring)``.  Families cycle through
    trivial coactions, cofree bicomodules ``Y (x) D`` and grouplike ones.
    """
    rng = np.random.default_rng(seed)
    out = []
    i = 0
    while len(out) < count:
        family = ("trivial", "cofree", "grouplike")[i % 3]
        i += 1
        a = _random_small_algebra(rng, field)
        b = _random_small_algebra(rng, field)
        sweedler_target = rng.random() < 0.5
        try:
            if family == "grouplike":
                d = sweedler_over_ground(b)
                bc = grouplike_bicomodule(d, sweedler_grouplike(d))
                a = ground(field)
            else:
                y = random_bimodule(int(rng.integers(2**32)), a, b, int(rng.integers(1, 3)))
                if family == "trivial":
                    d = coring.trivial_coring(b)
                    bc = coring.right_bicomodule(y, d, bimod.right_unitor_inv(y))
                else:
                    d = sweedler_over_ground(b) if rng.random() < 0.5 else coring.trivial_coring(b)
                    co = coring.cofree_comodule(d, y)
                    bc = coring.right_bicomodule(co.carrier, d, co.coaction)
        except GenerationError:
            continue
        target = sweedler_over_ground(a) if sweedler_target else coring.trivial_coring(a)
        out.append(Tagged(f"bicomodule[{seed}:{len(out)}:{family}]", (bc, target)))
    return out


def right_module_samples(alg: Algebra) -> list[coring.Comodule]:
    """``A`` and ``A + A`` as comodules over the trivial coring."""
    a = ground_bimodule(alg, "right")
    x = coring.trivial_comodule(a, alg.name)
    return [x, coring.comodule_sum(x, x, f"{alg.name}^2")]


def cat_samples(ctx: WideContext, seed: int, morphisms: int = 5):
    """Sample comodules over both corings and seeded colinear maps between them."""
    from .pushout import CatSamples, ComoduleMorphism

    rng = np.random.default_rng(seed)
    mc, nc, c, d = coring.wrem_parts(ctx)
    over = {}
    for side, cor in (("c", c), ("d", d)):
        xs = right_module_samples(cor.base) if coring.is_trivial(cor) else []
        xs.append(coring.cofree_comodule(cor))
        over[side] = xs
    s = CatSamples(over["c"], over["d"])
    made = 0
    attempts = 0
    while made < morphisms and attempts < 50 * morphisms:
        attempts += 1
        side = "c" if rng.random() < 0.5 else "d"
        xs = over[side]
        x = xs[int(rng.integers(len(xs)))]
        y = xs[int(rng.integers(len(xs)))]
        basis = coring.colinear_maps(x, y)
        if not basis:
            continue
        coeffs = [x.carrier.field.random_element(rng) for _ in basis]
        f = bimod.combine_maps(coeffs, basis, x.carrier, y.carrier)
        m = ComoduleMorphism(x, y, f, f"f{made}:{x.label}->{y.label}")
        (s.morphisms_c if side == "c" else s.morphisms_d).append(m)
        made += 1
    return s


def rem_axiom_samples(seed: int, count: int, field: Field) -> AxiomSamples:
    """Samples over the Sweedler descent cells and identity cells."""
    rng = np.random.default_rng(seed)
    sc = sweedler_context(field).context
    mc, nc = sc.f, sc.g
    c, d = mc.target, mc.source
    pool = [mc, nc, coring.identity_cell(c), coring.identity_cell(d)]
    by_target: dict = {}
    for x in pool:
        by_target.setdefault(x.target, []).append(x)
    rem = coring.REMInstance()
    bases: dict = {}

    def two_cell(x):
        if x not in bases:
            bases[x] = coring.rem_two_cell_basis(x, x)
        basis = bases[x]
        coeffs = [field.random_element(rng) for _ in basis]
        return rem.combine(coeffs, basis, x, x)

    def walk(n):
        out = [pool[int(rng.integers(len(pool)))]]
        while len(out) < n:
            opts = by_target[out[-1].source]
            out.append(opts[int(rng.integers(len(opts)))])
        return out

    s = AxiomSamples()
    for _ in range(count):
        quad = walk(4)
        s.quadruples.append(tuple(quad))
        s.pairs.append(tuple(quad[:2]))
        s.cells.append(quad[0])
        s.objects.append(quad[0].target)
        trip = [two_cell(x) for x in quad[:3]]
        s.cell_triples.append(tuple(trip))
        s.twocells.append(trip[0])
        s.interchanges.append((two_cell(quad[0]), two_cell(quad[0]), two_cell(quad[1]), two_cell(quad[1])))
        s.vertical_triples.append(tuple(two_cell(quad[0]) for _ in range(3)))
    return s
